#include "hrvkit/tail_index.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "hrvkit/kernels.hpp"

namespace hrvkit::tail {

namespace {

std::vector<double> top_sorted(std::span<const double> data, std::size_t count) {
    std::vector<double> tmp(data.begin(), data.end());
    count = std::min(count, tmp.size());
    std::partial_sort(tmp.begin(), tmp.begin() + count, tmp.end(), std::greater<>());
    tmp.resize(count);
    return tmp;
}

void check_k(std::size_t k, std::size_t n, std::size_t min_k, std::size_t limit,
             const char* what) {
    if (k < min_k) {
        fail(ErrorCode::InvalidArgument,
             std::string(what) + ": k must be at least " + std::to_string(min_k));
    }
    if (k > limit) {
        fail(ErrorCode::KTooLarge, std::string(what) + ": k = " + std::to_string(k) +
                                       " too large for n = " + std::to_string(n));
    }
}

TailFit qq_estimate(std::span<const double> data, std::size_t k) {
    const std::size_t n = data.size();
    check_k(k, n, 2, n == 0 ? 0 : n - 1, "QQ");
    const auto top = top_sorted(data, k);
    if (!(top[k - 1] > 0.0)) fail(ErrorCode::NonPositiveData, "QQ: zero among the top k values");
    // Least squares of ln X_(i) on -ln(i/(k+1)), i = 1..k.
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(k), ys(k);
    for (std::size_t i = 1; i <= k; ++i) {
        xs[i - 1] = -std::log(static_cast<double>(i) / static_cast<double>(k + 1));
        ys[i - 1] = std::log(top[i - 1]);
        sx += xs[i - 1];
        sy += ys[i - 1];
    }
    const double mx = sx / static_cast<double>(k);
    const double my = sy / static_cast<double>(k);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    if (!(slope > 0.0)) fail(ErrorCode::DegenerateData, "QQ: non-positive slope");
    return {1.0 / slope, k, Method::QQ, top[k - 1]};
}

TailFit pickands_estimate(std::span<const double> data, std::size_t k) {
    const std::size_t n = data.size();
    check_k(k, n, 1, n / 4, "Pickands");
    const auto top = top_sorted(data, 4 * k);
    const double xk = top[k - 1];
    const double x2k = top[2 * k - 1];
    const double x4k = top[4 * k - 1];
    const double num = xk - x2k;
    const double den = x2k - x4k;
    if (!(den > 0.0) || !(num > 0.0))
        fail(ErrorCode::DegenerateData, "Pickands: tied order statistics");
    const double ratio = num / den;
    if (!(ratio > 1.0))
        fail(ErrorCode::DegenerateData, "Pickands: spacing ratio <= 1 (no heavy tail)");
    return {std::numbers::ln2 / std::log(ratio), k, Method::Pickands, xk};
}

} // namespace

std::string_view to_string(Method method) {
    switch (method) {
    case Method::Hill: return "hill";
    case Method::QQ: return "qq";
    case Method::Pickands: return "pickands";
    }
    return "hill";
}

Method method_from_string(std::string_view name) {
    if (name == "hill") return Method::Hill;
    if (name == "qq") return Method::QQ;
    if (name == "pickands") return Method::Pickands;
    fail(ErrorCode::InvalidArgument, "unknown tail method '" + std::string(name) + "'");
}

TailFit hill_estimate_sorted(std::span<const double> sorted_desc, std::size_t k) {
    const auto pt = kernels::hill_point(sorted_desc, k);
    if (pt.error) {
        std::string msg = "Hill at k = " + std::to_string(k) + ", n = " +
                          std::to_string(sorted_desc.size()) + ": ";
        switch (*pt.error) {
        case ErrorCode::KTooLarge: msg += "k must be at most n - 1"; break;
        case ErrorCode::NonPositiveData: msg += "X_(k+1) is zero"; break;
        case ErrorCode::DegenerateData: msg += "top k+1 values are all equal"; break;
        default: msg += "k must be at least 1"; break;
        }
        fail(*pt.error, msg);
    }
    return {pt.alpha_hat, k, Method::Hill, pt.scale_at_k};
}

TailFit hill_estimate(std::span<const double> data, std::size_t k) {
    if (k + 1 > data.size()) {
        fail(ErrorCode::KTooLarge, "Hill at k = " + std::to_string(k) + ", n = " +
                                       std::to_string(data.size()) + ": k must be at most n - 1");
    }
    return hill_estimate_sorted(top_sorted(data, k + 1), k);
}

std::vector<SeriesPoint> hill_series(std::span<const double> data, std::size_t k_min,
                                     std::size_t k_max, bool parallel) {
    if (k_max + 1 > data.size()) fail(ErrorCode::KTooLarge, "k_max must be at most n - 1");
    const auto sorted = top_sorted(data, k_max + 1);
    const auto points = parallel ? kernels::omp::hill_series(sorted, k_min, k_max)
                                 : kernels::serial::hill_series(sorted, k_min, k_max);
    std::vector<SeriesPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        SeriesPoint sp{p.k, std::nullopt, p.error};
        if (!p.error) sp.fit = TailFit{p.alpha_hat, p.k, Method::Hill, p.scale_at_k};
        out.push_back(sp);
    }
    return out;
}

TailFit alt_tail_estimate(std::span<const double> data, std::size_t k, Method method) {
    switch (method) {
    case Method::QQ: return qq_estimate(data, k);
    case Method::Pickands: return pickands_estimate(data, k);
    case Method::Hill: break;
    }
    fail(ErrorCode::InvalidArgument, "alt_tail_estimate takes QQ or Pickands");
}

TailFit estimate(std::span<const double> data, std::size_t k, Method method) {
    return method == Method::Hill ? hill_estimate(data, k) : alt_tail_estimate(data, k, method);
}

double intermediate_scale(std::span<const double> data, std::size_t k) {
    if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
    if (k > data.size()) fail(ErrorCode::KTooLarge, "k exceeds the sample size");
    std::vector<double> tmp(data.begin(), data.end());
    std::nth_element(tmp.begin(), tmp.begin() + (k - 1), tmp.end(), std::greater<>());
    return tmp[k - 1];
}

} // namespace hrvkit::tail
