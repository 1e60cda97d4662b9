#ifndef DENSGEO_DIFFEO_HPP
#define DENSGEO_DIFFEO_HPP

#include "densgeo/density.hpp"
#include "densgeo/grid.hpp"

namespace densgeo {

/** Orientation-preserving torus map x -> x + displacement(x) with periodic
 * displacement. Valid diffeos have strictly positive Jacobian determinant. */
class diffeo {
  public:
    explicit diffeo(const periodic_grid& g) : disp_(g) {}
    explicit diffeo(vector_field displacement);

    const periodic_grid& grid() const { return disp_.grid(); }
    const vector_field& displacement() const { return disp_; }
    vector_field& displacement() { return disp_; }

    static diffeo identity(const periodic_grid& g) { return diffeo(g); }

    /** Image of the node (ix[, iy]) under the map. */
    double map1(int ix) const { return grid().coord(ix) + disp_.comp(0)[grid().index(ix)]; }
    std::array<double, 2> map2(int ix, int iy) const {
        std::size_t i = grid().index(ix, iy);
        return {grid().coord(ix) + disp_.comp(0)[i], grid().coord(iy) + disp_.comp(1)[i]};
    }

  private:
    vector_field disp_;
};

/** Jacobian determinant field, spectral derivatives of the displacement.
 * Throws non_diffeomorphic_error if any node value is <= 0. */
scalar_field jacobian(const diffeo& phi);

/** (phi o psi)(x) = phi(psi(x)); displacements composed with cubic
 * interpolation of phi's displacement at the shifted nodes. */
diffeo compose(const diffeo& phi, const diffeo& psi);

/** Nodewise fixed-point inversion of x -> x + d(x) with a bounded iteration
 * count; throws inverse_diverged_error after max_iter sweeps. */
diffeo inverse(const diffeo& phi, int max_iter = 50, double tol = 1e-13);

/** Composition phi o psi measured against chi nodewise: max node distance. */
double max_displacement_error(const diffeo& a, const diffeo& b);

/** pullback: (rho o phi) * Jac(phi), renormalized to unit mass. */
density pullback_density(const diffeo& phi, const density& nu);

/** pushforward = pullback by the inverse map. */
density pushforward_density(const diffeo& phi, const density& nu);

/** Pullback of a tangent density (no renormalization; the mean-free
 * property is preserved analytically). */
scalar_field pullback_tangent(const diffeo& phi, const scalar_field& a);

/** Scalar composition f o phi via cubic interpolation. */
scalar_field compose_scalar(const scalar_field& f, const diffeo& phi);

} // namespace densgeo

#endif
