#include "densgeo/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace densgeo {

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::vector<double>> read_rows(std::istream& is, std::size_t ncols, const char* what) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool header_skipped = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (!header_skipped) {
            header_skipped = true;
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != ncols)
            throw io_error(std::string(what) + ": expected " + std::to_string(ncols) +
                           " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw io_error(std::string(what) + ": no data rows");
    return rows;
}

// Infers (dim, n, length) from the coordinate columns of row-major data.
periodic_grid infer_grid(const std::vector<std::vector<double>>& rows, int coord_cols) {
    std::size_t total = rows.size();
    if (coord_cols == 1) {
        int n = static_cast<int>(total);
        double spacing = rows[1][0] - rows[0][0];
        return periodic_grid(1, n, spacing * n);
    }
    int n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(total))));
    if (static_cast<std::size_t>(n) * n != total)
        throw io_error("field CSV: 2D node count is not a perfect square");
    double spacing = rows[1][1] - rows[0][1];
    return periodic_grid(2, n, spacing * n);
}

int sniff_coord_cols(std::istream& is) {
    std::string header;
    std::getline(is, header);
    is.seekg(0);
    int commas = 0;
    for (char c : header)
        if (c == ',') ++commas;
    return commas; // x,value -> 1 coord col; x,y,value -> 2
}

template <class RowWriter>
void write_rows(const periodic_grid& g, std::ostream& os, const char* header, RowWriter row) {
    os << header << '\n';
    if (g.dim() == 1) {
        for (int i = 0; i < g.n(); ++i) {
            os << format_float(g.coord(i));
            row(os, g.index(i));
            os << '\n';
        }
    } else {
        for (int ix = 0; ix < g.n(); ++ix)
            for (int iy = 0; iy < g.n(); ++iy) {
                os << format_float(g.coord(ix)) << ',' << format_float(g.coord(iy));
                row(os, g.index(ix, iy));
                os << '\n';
            }
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open for reading: " + path);
    return is;
}

} // namespace

void write_field_csv(const scalar_field& f, std::ostream& os) {
    const periodic_grid& g = f.grid();
    write_rows(g, os, g.dim() == 1 ? "x,value" : "x,y,value",
               [&](std::ostream& o, std::size_t i) { o << ',' << format_float(f[i]); });
}

void write_field_csv(const scalar_field& f, const std::string& path) {
    auto os = open_out(path);
    write_field_csv(f, os);
}

scalar_field read_field_csv(std::istream& is, double) {
    int coord_cols = sniff_coord_cols(is);
    if (coord_cols != 1 && coord_cols != 2)
        throw io_error("field CSV: unrecognized column layout");
    auto rows = read_rows(is, coord_cols + 1, "field CSV");
    periodic_grid g = infer_grid(rows, coord_cols);
    scalar_field f(g);
    for (std::size_t i = 0; i < rows.size(); ++i) f[i] = rows[i].back();
    return f;
}

scalar_field read_field_csv(const std::string& path, double default_length) {
    auto is = open_in(path);
    return read_field_csv(is, default_length);
}

void write_complex_field_csv(const periodic_grid& g, const std::vector<std::complex<double>>& v,
                             const std::string& path) {
    if (v.size() != g.size()) throw io_error("complex field CSV: size mismatch");
    auto os = open_out(path);
    write_rows(g, os, g.dim() == 1 ? "x,re,im" : "x,y,re,im", [&](std::ostream& o, std::size_t i) {
        o << ',' << format_float(v[i].real()) << ',' << format_float(v[i].imag());
    });
}

std::pair<periodic_grid, std::vector<std::complex<double>>>
read_complex_field_csv(const std::string& path, double) {
    auto is = open_in(path);
    int coord_cols = sniff_coord_cols(is) - 1;
    if (coord_cols != 1 && coord_cols != 2)
        throw io_error("complex field CSV: unrecognized column layout");
    auto rows = read_rows(is, coord_cols + 2, "complex field CSV");
    periodic_grid g = infer_grid(rows, coord_cols);
    std::vector<std::complex<double>> v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        v[i] = {rows[i][coord_cols], rows[i][coord_cols + 1]};
    return {g, std::move(v)};
}

void write_displacement_csv(const vector_field& d, const std::string& path) {
    const periodic_grid& g = d.grid();
    auto os = open_out(path);
    if (g.dim() == 1) {
        write_rows(g, os, "x,dx",
                   [&](std::ostream& o, std::size_t i) { o << ',' << format_float(d.comp(0)[i]); });
    } else {
        write_rows(g, os, "x,y,dx,dy", [&](std::ostream& o, std::size_t i) {
            o << ',' << format_float(d.comp(0)[i]) << ',' << format_float(d.comp(1)[i]);
        });
    }
}

vector_field read_displacement_csv(const std::string& path, double) {
    auto is = open_in(path);
    std::string header;
    std::getline(is, header);
    is.seekg(0);
    int commas = 0;
    for (char c : header)
        if (c == ',') ++commas;
    int dim = commas == 1 ? 1 : 2;
    auto rows = read_rows(is, dim == 1 ? 2 : 4, "displacement CSV");
    periodic_grid g = infer_grid(rows, dim);
    vector_field d(g);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        d.comp(0)[i] = rows[i][dim];
        if (dim == 2) d.comp(1)[i] = rows[i][3];
    }
    return d;
}

} // namespace densgeo
