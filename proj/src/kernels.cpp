#include "densgeo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace densgeo::kernels {

namespace {

double raw_sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double raw_dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

// Pairwise combination in index order: associativity pattern is fixed, so
// the result does not depend on how block partials were produced.
double combine_pairwise(std::vector<double>& p) {
    std::size_t m = p.size();
    while (m > 1) {
        std::size_t half = (m + 1) / 2;
        for (std::size_t i = 0; i + half < m; ++i) p[i] += p[i + half];
        m = half;
    }
    return p.empty() ? 0.0 : p[0];
}

template <class BlockOp>
std::vector<double> block_partials(std::size_t n, bool parallel, BlockOp op) {
    std::size_t nb = (n + reduce_block - 1) / reduce_block;
    std::vector<double> partials(nb);
    if (parallel) {
#pragma omp parallel for num_threads(par::max_threads()) schedule(static)
        for (long long b = 0; b < static_cast<long long>(nb); ++b) {
            std::size_t lo = static_cast<std::size_t>(b) * reduce_block;
            partials[b] = op(lo, std::min(lo + reduce_block, n));
        }
    } else {
        for (std::size_t b = 0; b < nb; ++b) {
            std::size_t lo = b * reduce_block;
            partials[b] = op(lo, std::min(lo + reduce_block, n));
        }
    }
    return partials;
}

double blocked_sum(const double* x, std::size_t n, bool parallel) {
    auto p = block_partials(n, parallel, [&](std::size_t lo, std::size_t hi) {
        return raw_sum(x + lo, hi - lo);
    });
    return combine_pairwise(p);
}

double blocked_dot(const double* x, const double* y, std::size_t n, bool parallel) {
    auto p = block_partials(n, parallel, [&](std::size_t lo, std::size_t hi) {
        return raw_dot(x + lo, y + lo, hi - lo);
    });
    return combine_pairwise(p);
}

template <class Cmp>
double blocked_extreme(const double* x, std::size_t n, bool parallel, double init, Cmp cmp) {
    auto p = block_partials(n, parallel, [&](std::size_t lo, std::size_t hi) {
        double m = init;
        for (std::size_t i = lo; i < hi; ++i)
            if (cmp(x[i], m)) m = x[i];
        return m;
    });
    double m = init;
    for (double v : p)
        if (cmp(v, m)) m = v;
    return m;
}

} // namespace

namespace serial {

double sum(const double* x, std::size_t n) { return blocked_sum(x, n, false); }
double dot(const double* x, const double* y, std::size_t n) { return blocked_dot(x, y, n, false); }

double min(const double* x, std::size_t n) {
    return blocked_extreme(x, n, false, std::numeric_limits<double>::infinity(),
                           [](double a, double b) { return a < b; });
}

double max(const double* x, std::size_t n) {
    return blocked_extreme(x, n, false, -std::numeric_limits<double>::infinity(),
                           [](double a, double b) { return a > b; });
}

double max_abs(const double* x, std::size_t n) {
    auto p = block_partials(n, false, [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::fabs(x[i]));
        return m;
    });
    double m = 0.0;
    for (double v : p) m = std::max(m, v);
    return m;
}

} // namespace serial

double sum(const double* x, std::size_t n) { return blocked_sum(x, n, par::use_parallel(n)); }
double dot(const double* x, const double* y, std::size_t n) { return blocked_dot(x, y, n, par::use_parallel(n)); }

double min(const double* x, std::size_t n) {
    return blocked_extreme(x, n, par::use_parallel(n), std::numeric_limits<double>::infinity(),
                           [](double a, double b) { return a < b; });
}

double max(const double* x, std::size_t n) {
    return blocked_extreme(x, n, par::use_parallel(n), -std::numeric_limits<double>::infinity(),
                           [](double a, double b) { return a > b; });
}

double max_abs(const double* x, std::size_t n) {
    auto p = block_partials(n, par::use_parallel(n), [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::fabs(x[i]));
        return m;
    });
    double m = 0.0;
    for (double v : p) m = std::max(m, v);
    return m;
}

} // namespace densgeo::kernels
