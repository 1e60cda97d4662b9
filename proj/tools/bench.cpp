// Benchmark comparing the serial reference kernels against the OpenMP
// dispatch path across array sizes. Prints a CSV table to stdout.

#include "densgeo/diffeo.hpp"
#include "densgeo/grid.hpp"
#include "densgeo/kernels.hpp"
#include "densgeo/parallel.hpp"
#include "densgeo/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

namespace {

using clock_type = std::chrono::steady_clock;

double time_ms(int reps, const std::function<void()>& fn) {
    fn(); // warm up
    auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) fn();
    auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

volatile double sink = 0.0;

} // namespace

int main(int argc, char** argv) {
    int max_pow = argc > 1 ? std::atoi(argv[1]) : 22;
    std::printf("kernel,n,threads,serial_ms,parallel_ms,speedup\n");

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.5, 1.5);

    for (int p = 14; p <= max_pow; p += 2) {
        std::size_t n = std::size_t(1) << p;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = unif(rng);
            y[i] = unif(rng);
        }
        int reps = n > (1u << 20) ? 5 : 20;

        auto report = [&](const char* name, double ts, double tp) {
            std::printf("%s,%zu,%d,%.4f,%.4f,%.2f\n", name, n, densgeo::par::max_threads(), ts,
                        tp, ts / tp);
        };

        report("sum",
               time_ms(reps, [&] { sink = densgeo::kernels::serial::sum(x.data(), n); }),
               time_ms(reps, [&] { sink = densgeo::kernels::sum(x.data(), n); }));
        report("dot",
               time_ms(reps, [&] { sink = densgeo::kernels::serial::dot(x.data(), y.data(), n); }),
               time_ms(reps, [&] { sink = densgeo::kernels::dot(x.data(), y.data(), n); }));

        std::vector<double> z(n);
        report("saxpy_exp",
               time_ms(reps,
                       [&] {
                           densgeo::kernels::serial::for_each_index(
                               n, [&](std::size_t i) { z[i] = x[i] + std::exp(-y[i]); });
                       }),
               time_ms(reps, [&] {
                   densgeo::kernels::for_each_index(
                       n, [&](std::size_t i) { z[i] = x[i] + std::exp(-y[i]); });
               }));
    }

    // a field-level pipeline: interpolation of a 2D field at scattered points
    for (int gn : {256, 1024}) {
        densgeo::periodic_grid g(2, gn);
        densgeo::scalar_field f = densgeo::scalar_field::sample(g, [](double x, double y) {
            return std::sin(6.28 * x) * std::cos(6.28 * y);
        });
        std::size_t m = g.size();
        std::vector<std::array<double, 2>> pts(m);
        for (std::size_t i = 0; i < m; ++i) pts[i] = {unif(rng), unif(rng)};

        auto serial_interp = [&] {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                acc += densgeo::interpolate(f, pts[i][0], pts[i][1]);
            sink = acc;
        };
        auto parallel_interp = [&] {
            auto vals = densgeo::interpolate(f, pts);
            sink = vals[0];
        };
        double ts = time_ms(5, serial_interp);
        double tp = time_ms(5, parallel_interp);
        std::printf("interp2d,%zu,%d,%.4f,%.4f,%.2f\n", m, densgeo::par::max_threads(), ts, tp,
                    ts / tp);
    }
    return 0;
}
