#include "hrvkit/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <utility>

#ifdef HRVKIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace hrvkit::kernels {

namespace {

std::atomic<int> g_thread_cap{0};

// Anti-ranks of one column, written to out[i] for row i.
void column_anti_ranks(std::span<const double> row_major, std::size_t n, std::size_t d,
                       std::size_t j, std::size_t* out) {
    std::vector<std::pair<double, std::size_t>> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = {row_major[i * d + j], i};
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    // Within a run of equal values every member counts the whole run, so the
    // rank is the 1-based position of the run's last element.
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && col[end].first == col[start].first) ++end;
        for (std::size_t p = start; p < end; ++p) out[col[p].second] = end;
        start = end;
    }
}

constexpr double inv_sqrt_2pi = 0.3989422804014327;

inline double gauss(double u) { return inv_sqrt_2pi * std::exp(-0.5 * u * u); }

double kde_interval_at(std::span<const KernelAtom> atoms, double h, double x) {
    double sum = 0.0;
    for (const auto& a : atoms) {
        sum += a.weight * (gauss((x - a.x) / h) + gauss((x + a.x) / h) +
                           gauss((x - (2.0 - a.x)) / h));
    }
    return sum / h;
}

struct Image {
    double weight;
    double x;
    double y;
};

// Images farther than 8 bandwidths from the simplex contribute < e^-32.
std::vector<Image> all_images(std::span<const KernelAtom> atoms, double h) {
    std::vector<Image> images;
    for (const auto& a : atoms) {
        for (const auto& [x, y] : simplex_images(a.x, a.y)) {
            const double gap = std::max({-x, -y, (x + y - 1.0) / std::numbers::sqrt2, 0.0});
            if (gap <= 8.0 * h) images.push_back({a.weight, x, y});
        }
    }
    return images;
}

double kde_simplex_at(const std::vector<Image>& images, double h, double x, double y) {
    double sum = 0.0;
    for (const auto& im : images) {
        const double u = (x - im.x) / h;
        const double v = (y - im.y) / h;
        sum += im.weight * std::exp(-0.5 * (u * u + v * v));
    }
    return sum * inv_sqrt_2pi * inv_sqrt_2pi / (h * h);
}

void check_kde_inputs(double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        fail(ErrorCode::BadBandwidth, "bandwidth must be positive and finite");
}

void check_series(std::span<const double> sorted_desc, std::size_t k_min, std::size_t k_max) {
    if (k_min < 1 || k_min > k_max)
        fail(ErrorCode::InvalidArgument, "k range must satisfy 1 <= k_min <= k_max");
    if (k_max + 1 > sorted_desc.size())
        fail(ErrorCode::KTooLarge, "k_max must be at most n - 1");
}

} // namespace

HillPoint hill_point(std::span<const double> sorted_desc, std::size_t k) {
    HillPoint pt{k, std::numeric_limits<double>::quiet_NaN(), 0.0, std::nullopt};
    if (k < 1) {
        pt.error = ErrorCode::InvalidArgument;
        return pt;
    }
    if (k + 1 > sorted_desc.size()) {
        pt.error = ErrorCode::KTooLarge;
        return pt;
    }
    pt.scale_at_k = sorted_desc[k - 1];
    const double base = sorted_desc[k];
    if (!(base > 0.0)) {
        pt.error = ErrorCode::NonPositiveData;
        return pt;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(sorted_desc[i] / base);
    if (!(sum > 0.0)) {
        pt.error = ErrorCode::DegenerateData;
        return pt;
    }
    pt.alpha_hat = static_cast<double>(k) / sum;
    return pt;
}

int thread_count() {
    const int cap = g_thread_cap.load();
    if (cap > 0) return cap;
    if (const char* env = std::getenv("HRVKIT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
#ifdef HRVKIT_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_cap(int threads) { g_thread_cap.store(threads > 0 ? threads : 0); }

std::vector<std::pair<double, double>> simplex_images(double x, double y) {
    using P = std::pair<double, double>;
    auto key = [](const P& p) {
        return std::pair<long long, long long>(std::llround(p.first * 1e12),
                                               std::llround(p.second * 1e12));
    };
    std::vector<P> out{{x, y}};
    std::set<std::pair<long long, long long>> seen{key(out.front())};
    std::size_t frontier_begin = 0;
    for (int depth = 0; depth < 4; ++depth) {
        const std::size_t frontier_end = out.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            const P p = out[i];
            const P next[3] = {{-p.first, p.second},
                               {p.first, -p.second},
                               {1.0 - p.second, 1.0 - p.first}};
            for (const P& q : next) {
                if (seen.insert(key(q)).second) out.push_back(q);
            }
        }
        frontier_begin = frontier_end;
    }
    return out;
}

namespace serial {

std::vector<std::size_t> anti_ranks(std::span<const double> row_major, std::size_t n,
                                    std::size_t d) {
    std::vector<std::size_t> out(n * d);
    for (std::size_t j = 0; j < d; ++j) column_anti_ranks(row_major, n, d, j, out.data() + j * n);
    return out;
}

std::vector<HillPoint> hill_series(std::span<const double> sorted_desc, std::size_t k_min,
                                   std::size_t k_max) {
    check_series(sorted_desc, k_min, k_max);
    std::vector<HillPoint> out;
    out.reserve(k_max - k_min + 1);
    for (std::size_t k = k_min; k <= k_max; ++k) out.push_back(hill_point(sorted_desc, k));
    return out;
}

std::vector<double> kde_interval(std::span<const KernelAtom> atoms, double bandwidth,
                                 std::span<const double> grid) {
    check_kde_inputs(bandwidth);
    std::vector<double> out(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) out[g] = kde_interval_at(atoms, bandwidth, grid[g]);
    return out;
}

std::vector<double> kde_simplex(std::span<const KernelAtom> atoms, double bandwidth,
                                std::span<const double> gx, std::span<const double> gy) {
    check_kde_inputs(bandwidth);
    const auto images = all_images(atoms, bandwidth);
    std::vector<double> out(gx.size());
    for (std::size_t g = 0; g < gx.size(); ++g) out[g] = kde_simplex_at(images, bandwidth, gx[g], gy[g]);
    return out;
}

} // namespace serial

namespace omp {

std::vector<std::size_t> anti_ranks(std::span<const double> row_major, std::size_t n,
                                    std::size_t d) {
    std::vector<std::size_t> out(n * d);
    const auto cols = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (std::ptrdiff_t j = 0; j < cols; ++j)
        column_anti_ranks(row_major, n, d, static_cast<std::size_t>(j), out.data() + j * n);
    return out;
}

std::vector<HillPoint> hill_series(std::span<const double> sorted_desc, std::size_t k_min,
                                   std::size_t k_max) {
    check_series(sorted_desc, k_min, k_max);
    const auto count = static_cast<std::ptrdiff_t>(k_max - k_min + 1);
    std::vector<HillPoint> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count())
    for (std::ptrdiff_t i = 0; i < count; ++i)
        out[i] = hill_point(sorted_desc, k_min + static_cast<std::size_t>(i));
    return out;
}

std::vector<double> kde_interval(std::span<const KernelAtom> atoms, double bandwidth,
                                 std::span<const double> grid) {
    check_kde_inputs(bandwidth);
    const auto count = static_cast<std::ptrdiff_t>(grid.size());
    std::vector<double> out(grid.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (std::ptrdiff_t g = 0; g < count; ++g) out[g] = kde_interval_at(atoms, bandwidth, grid[g]);
    return out;
}

std::vector<double> kde_simplex(std::span<const KernelAtom> atoms, double bandwidth,
                                std::span<const double> gx, std::span<const double> gy) {
    check_kde_inputs(bandwidth);
    const auto images = all_images(atoms, bandwidth);
    const auto count = static_cast<std::ptrdiff_t>(gx.size());
    std::vector<double> out(gx.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (std::ptrdiff_t g = 0; g < count; ++g)
        out[g] = kde_simplex_at(images, bandwidth, gx[g], gy[g]);
    return out;
}

} // namespace omp

} // namespace hrvkit::kernels
