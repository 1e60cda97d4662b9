#ifndef DENSGEO_GRID_HPP
#define DENSGEO_GRID_HPP

#include "densgeo/errors.hpp"

#include <array>
#include <cstddef>
#include <type_traits>
#include <vector>

namespace densgeo {

/** Uniform periodic grid on the flat torus T^d, d = 1 or 2.
 * n nodes per axis (a power of two, n >= 8), period `length` per axis,
 * node coordinates i * length / n. Total volume length^dim. */
class periodic_grid {
  public:
    periodic_grid(int dim, int n, double length = 1.0);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double length() const { return length_; }
    double spacing() const { return length_ / n_; }
    /** Total number of nodes, n^dim. */
    std::size_t size() const { return size_; }
    /** mu(M) = length^dim. */
    double volume() const;

    double coord(int i) const { return i * length_ / n_; }
    /** Row-major node index; 2D nodes are ordered x-outer, y-inner. */
    std::size_t index(int ix, int iy = 0) const {
        return dim_ == 1 ? static_cast<std::size_t>(ix)
                         : static_cast<std::size_t>(ix) * n_ + iy;
    }

    bool operator==(const periodic_grid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && length_ == o.length_;
    }
    bool operator!=(const periodic_grid& o) const { return !(*this == o); }

  private:
    int dim_;
    int n_;
    double length_;
    std::size_t size_;
};

/** Real-valued grid function. Plain value semantics; arithmetic is nodewise. */
class scalar_field {
  public:
    explicit scalar_field(const periodic_grid& g, double fill = 0.0)
        : grid_(g), values_(g.size(), fill) {}
    scalar_field(const periodic_grid& g, std::vector<double> v);

    const periodic_grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(int ix, int iy = 0) { return values_[grid_.index(ix, iy)]; }
    double at(int ix, int iy = 0) const { return values_[grid_.index(ix, iy)]; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    const std::vector<double>& values() const { return values_; }

    scalar_field& operator+=(const scalar_field& o);
    scalar_field& operator-=(const scalar_field& o);
    scalar_field& operator*=(const scalar_field& o);
    scalar_field& operator*=(double a);
    scalar_field& operator+=(double a);

    /** Checks every node value is finite; throws on NaN/Inf. */
    void check_finite(const char* what) const;

    /** Builds a field by evaluating f at the node coordinates.
     * f(x) samples a 1D grid; f(x, y) samples a 2D grid. */
    template <class F>
    static scalar_field sample(const periodic_grid& g, F f) {
        scalar_field out(g);
        if constexpr (std::is_invocable_v<F, double, double>) {
            if (g.dim() != 2) throw error("scalar_field::sample: f(x,y) needs a 2D grid");
            for (int ix = 0; ix < g.n(); ++ix)
                for (int iy = 0; iy < g.n(); ++iy)
                    out.at(ix, iy) = f(g.coord(ix), g.coord(iy));
        } else {
            if (g.dim() != 1) throw error("scalar_field::sample: f(x) needs a 1D grid");
            for (int i = 0; i < g.n(); ++i) out[i] = f(g.coord(i));
        }
        return out;
    }

  private:
    periodic_grid grid_;
    std::vector<double> values_;
};

scalar_field operator+(scalar_field a, const scalar_field& b);
scalar_field operator-(scalar_field a, const scalar_field& b);
scalar_field operator*(scalar_field a, const scalar_field& b);
scalar_field operator*(double a, scalar_field f);

/** dim scalar components on a shared grid. */
class vector_field {
  public:
    explicit vector_field(const periodic_grid& g)
        : grid_(g), comps_(g.dim(), scalar_field(g)) {}

    const periodic_grid& grid() const { return grid_; }
    int dim() const { return grid_.dim(); }
    scalar_field& comp(int a) { return comps_[a]; }
    const scalar_field& comp(int a) const { return comps_[a]; }

  private:
    periodic_grid grid_;
    std::vector<scalar_field> comps_;
};

void require_same_grid(const periodic_grid& a, const periodic_grid& b, const char* what);

} // namespace densgeo

#endif
