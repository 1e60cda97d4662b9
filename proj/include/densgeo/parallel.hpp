#ifndef DENSGEO_PARALLEL_HPP
#define DENSGEO_PARALLEL_HPP

#include <cstddef>

namespace densgeo::par {

/** Number of worker threads the kernels may use.
 * Reads DENSGEO_THREADS once on first call; falls back to the OpenMP
 * default. Always >= 1; 1 disables the parallel paths entirely. */
int max_threads();

/** Override the thread cap programmatically (tests, benchmark sweeps). */
void set_max_threads(int n);

// Arrays below this size are not worth a parallel region.
inline constexpr std::size_t grain_size = 1 << 14;

inline bool use_parallel(std::size_t n) {
    return n >= grain_size && max_threads() > 1;
}

} // namespace densgeo::par

#endif
