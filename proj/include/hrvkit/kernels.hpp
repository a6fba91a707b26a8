#pragma once

// Data-parallel inner loops. Each kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`; both produce
// bit-identical output (every output element is computed independently with
// the same floating-point expression, no cross-thread reductions).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hrvkit/error.hpp"

namespace hrvkit::kernels {

/// Weighted point on the real line or in the plane (y unused for 1-d).
struct KernelAtom {
    double weight;
    double x;
    double y = 0.0;
};

/// One Hill evaluation over descending-sorted data.
struct HillPoint {
    std::size_t k;
    double alpha_hat;   // NaN when `error` is set
    double scale_at_k;  // X_(k)
    std::optional<ErrorCode> error;
};

/// Hill estimate at a single k on descending-sorted data.
HillPoint hill_point(std::span<const double> sorted_desc, std::size_t k);

/// Number of threads the omp kernels will use (respects HRVKIT_THREADS).
int thread_count();

/// Caps the omp kernels at `threads` (>= 1). Called by the CLI once.
void set_thread_cap(int threads);

namespace serial {

/// Column-major anti-ranks: out[j * n + i] = r_i^j.
std::vector<std::size_t> anti_ranks(std::span<const double> row_major, std::size_t n,
                                    std::size_t d);

std::vector<HillPoint> hill_series(std::span<const double> sorted_desc, std::size_t k_min,
                                   std::size_t k_max);

/// Reflected Gaussian KDE on [0, 1] evaluated at `grid`.
std::vector<double> kde_interval(std::span<const KernelAtom> atoms, double bandwidth,
                                 std::span<const double> grid);

/// Reflected Gaussian KDE on the 2-simplex evaluated at (gx[i], gy[i]).
std::vector<double> kde_simplex(std::span<const KernelAtom> atoms, double bandwidth,
                                std::span<const double> gx, std::span<const double> gy);

} // namespace serial

namespace omp {

std::vector<std::size_t> anti_ranks(std::span<const double> row_major, std::size_t n,
                                    std::size_t d);
std::vector<HillPoint> hill_series(std::span<const double> sorted_desc, std::size_t k_min,
                                   std::size_t k_max);
std::vector<double> kde_interval(std::span<const KernelAtom> atoms, double bandwidth,
                                 std::span<const double> grid);
std::vector<double> kde_simplex(std::span<const KernelAtom> atoms, double bandwidth,
                                std::span<const double> gx, std::span<const double> gy);

} // namespace omp

/// Mirror images of (x, y) under the reflections of the 2-simplex edges
/// (s1 = 0, s2 = 0, s1 + s2 = 1), including the point itself. Images are
/// generated up to word length 4 in the reflection group and deduplicated.
std::vector<std::pair<double, double>> simplex_images(double x, double y);

} // namespace hrvkit::kernels
