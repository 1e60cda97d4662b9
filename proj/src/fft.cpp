#include "densgeo/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace densgeo::fft {

namespace {

// fftw planning is not thread-safe; execution through cached per-thread
// plans (each with its own buffers) is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct plan_set {
    int dim = 0, n = 0;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;       // r2c spectrum
    fftw_complex* cin = nullptr;        // c2c buffers
    fftw_complex* cout = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;
    fftw_plan cfwd = nullptr, cbwd = nullptr;
    std::size_t nreal = 0, nspec = 0, nc = 0;

    plan_set(int dim_, int n_) : dim(dim_), n(n_) {
        nreal = dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
        nspec = dim == 1 ? static_cast<std::size_t>(n / 2 + 1)
                         : static_cast<std::size_t>(n) * (n / 2 + 1);
        nc = nreal;
        real = fftw_alloc_real(nreal);
        cplx = fftw_alloc_complex(nspec);
        cin = fftw_alloc_complex(nc);
        cout = fftw_alloc_complex(nc);
        std::lock_guard<std::mutex> lock(plan_mutex());
        if (dim == 1) {
            fwd = fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
            cfwd = fftw_plan_dft_1d(n, cin, cout, FFTW_FORWARD, FFTW_ESTIMATE);
            cbwd = fftw_plan_dft_1d(n, cin, cout, FFTW_BACKWARD, FFTW_ESTIMATE);
        } else {
            fwd = fftw_plan_dft_r2c_2d(n, n, real, cplx, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_2d(n, n, cplx, real, FFTW_ESTIMATE);
            cfwd = fftw_plan_dft_2d(n, n, cin, cout, FFTW_FORWARD, FFTW_ESTIMATE);
            cbwd = fftw_plan_dft_2d(n, n, cin, cout, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
    }

    ~plan_set() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_destroy_plan(cfwd);
        fftw_destroy_plan(cbwd);
        fftw_free(real);
        fftw_free(cplx);
        fftw_free(cin);
        fftw_free(cout);
    }

    plan_set(const plan_set&) = delete;
    plan_set& operator=(const plan_set&) = delete;
};

plan_set& plans_for(const periodic_grid& g) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<plan_set>> cache;
    auto key = std::make_pair(g.dim(), g.n());
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<plan_set>(g.dim(), g.n())).first;
    return *it->second;
}

} // namespace

std::size_t spectral_size(const periodic_grid& g) {
    return g.dim() == 1 ? static_cast<std::size_t>(g.n() / 2 + 1)
                        : static_cast<std::size_t>(g.n()) * (g.n() / 2 + 1);
}

void forward(const periodic_grid& g, const double* in, std::complex<double>* out) {
    plan_set& p = plans_for(g);
    std::memcpy(p.real, in, p.nreal * sizeof(double));
    fftw_execute(p.fwd);
    // std::complex<double> is layout-compatible with fftw_complex (double[2])
    std::memcpy(reinterpret_cast<double*>(out), p.cplx, p.nspec * sizeof(fftw_complex));
}

void inverse(const periodic_grid& g, const std::complex<double>* in, double* out) {
    plan_set& p = plans_for(g);
    std::memcpy(p.cplx, in, p.nspec * sizeof(fftw_complex));
    fftw_execute(p.bwd);
    const double scale = 1.0 / static_cast<double>(p.nreal);
    for (std::size_t i = 0; i < p.nreal; ++i) out[i] = p.real[i] * scale;
}

void forward_c(const periodic_grid& g, const std::complex<double>* in, std::complex<double>* out) {
    plan_set& p = plans_for(g);
    std::memcpy(p.cin, in, p.nc * sizeof(fftw_complex));
    fftw_execute(p.cfwd);
    std::memcpy(reinterpret_cast<double*>(out), p.cout, p.nc * sizeof(fftw_complex));
}

void inverse_c(const periodic_grid& g, const std::complex<double>* in, std::complex<double>* out) {
    plan_set& p = plans_for(g);
    std::memcpy(p.cin, in, p.nc * sizeof(fftw_complex));
    fftw_execute(p.cbwd);
    const double scale = 1.0 / static_cast<double>(p.nc);
    for (std::size_t i = 0; i < p.nc; ++i)
        out[i] = std::complex<double>(p.cout[i][0] * scale, p.cout[i][1] * scale);
}

} // namespace densgeo::fft
