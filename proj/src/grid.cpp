#include "densgeo/grid.hpp"

#include "densgeo/kernels.hpp"

#include <cmath>
#include <string>

namespace densgeo {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

periodic_grid::periodic_grid(int dim, int n, double length)
    : dim_(dim), n_(n), length_(length) {
    if (dim != 1 && dim != 2)
        throw wrong_dimension_error("periodic_grid: dim must be 1 or 2, got " + std::to_string(dim));
    if (n < 8 || !power_of_two(n))
        throw error("periodic_grid: n must be a power of two >= 8, got " + std::to_string(n));
    if (!(length > 0.0) || !std::isfinite(length))
        throw error("periodic_grid: length must be positive and finite");
    size_ = 1;
    for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n);
}

double periodic_grid::volume() const {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= length_;
    return v;
}

scalar_field::scalar_field(const periodic_grid& g, std::vector<double> v)
    : grid_(g), values_(std::move(v)) {
    if (values_.size() != g.size())
        throw error("scalar_field: value count does not match grid size");
}

scalar_field& scalar_field::operator+=(const scalar_field& o) {
    require_same_grid(grid_, o.grid_, "scalar_field +=");
    double* a = values_.data();
    const double* b = o.values_.data();
    kernels::for_each_index(values_.size(), [=](std::size_t i) { a[i] += b[i]; });
    return *this;
}

scalar_field& scalar_field::operator-=(const scalar_field& o) {
    require_same_grid(grid_, o.grid_, "scalar_field -=");
    double* a = values_.data();
    const double* b = o.values_.data();
    kernels::for_each_index(values_.size(), [=](std::size_t i) { a[i] -= b[i]; });
    return *this;
}

scalar_field& scalar_field::operator*=(const scalar_field& o) {
    require_same_grid(grid_, o.grid_, "scalar_field *=");
    double* a = values_.data();
    const double* b = o.values_.data();
    kernels::for_each_index(values_.size(), [=](std::size_t i) { a[i] *= b[i]; });
    return *this;
}

scalar_field& scalar_field::operator*=(double c) {
    double* a = values_.data();
    kernels::for_each_index(values_.size(), [=](std::size_t i) { a[i] *= c; });
    return *this;
}

scalar_field& scalar_field::operator+=(double c) {
    double* a = values_.data();
    kernels::for_each_index(values_.size(), [=](std::size_t i) { a[i] += c; });
    return *this;
}

void scalar_field::check_finite(const char* what) const {
    for (double v : values_)
        if (!std::isfinite(v))
            throw error(std::string(what) + ": non-finite node value");
}

scalar_field operator+(scalar_field a, const scalar_field& b) { return a += b; }
scalar_field operator-(scalar_field a, const scalar_field& b) { return a -= b; }
scalar_field operator*(scalar_field a, const scalar_field& b) { return a *= b; }
scalar_field operator*(double a, scalar_field f) { return f *= a; }

void require_same_grid(const periodic_grid& a, const periodic_grid& b, const char* what) {
    if (a != b) throw error(std::string(what) + ": fields live on different grids");
}

} // namespace densgeo
