#ifndef DENSGEO_FIELD_IO_HPP
#define DENSGEO_FIELD_IO_HPP

#include "densgeo/grid.hpp"

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace densgeo {

/** Field CSV format: header `x,value` (1D) or `x,y,value` (2D), nodes in
 * row-major order, floats printed with 17 significant digits. */
void write_field_csv(const scalar_field& f, std::ostream& os);
void write_field_csv(const scalar_field& f, const std::string& path);
scalar_field read_field_csv(std::istream& is, double default_length = 1.0);
scalar_field read_field_csv(const std::string& path, double default_length = 1.0);

/** Complex fields use columns re,im: `x[,y],re,im`. */
void write_complex_field_csv(const periodic_grid& g, const std::vector<std::complex<double>>& v,
                             const std::string& path);
std::pair<periodic_grid, std::vector<std::complex<double>>>
read_complex_field_csv(const std::string& path, double default_length = 1.0);

/** Displacement CSV for diffeomorphisms: `x,dx` (1D) or `x,y,dx,dy` (2D). */
void write_displacement_csv(const vector_field& d, const std::string& path);
vector_field read_displacement_csv(const std::string& path, double default_length = 1.0);

/** 17-significant-digit float formatting used by every writer. */
std::string format_float(double v);

} // namespace densgeo

#endif
