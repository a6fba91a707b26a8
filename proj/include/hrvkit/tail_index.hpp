#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hrvkit/error.hpp"

namespace hrvkit::tail {

enum class Method { Hill, QQ, Pickands };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

/// Tail-index fit from the k upper order statistics.
struct TailFit {
    double alpha_hat;
    std::size_t k;
    Method method;
    double scale_at_k;  // k-th largest value, the plug-in for b(n/k)
};

/// Series entry; `fit` is empty and `error` set when that k could not be fit.
struct SeriesPoint {
    std::size_t k;
    std::optional<TailFit> fit;
    std::optional<ErrorCode> error;
};

/// alpha_hat = 1 / [(1/k) sum_{i<=k} ln(X_(i) / X_(k+1))].
TailFit hill_estimate(std::span<const double> data, std::size_t k);

/// Same as hill_estimate, on data already sorted descending.
TailFit hill_estimate_sorted(std::span<const double> sorted_desc, std::size_t k);

/// Hill fits for every k in [k_min, k_max], ascending. Points that fail are
/// flagged rather than aborting the series. `parallel` selects the OpenMP
/// kernel; output is identical either way.
std::vector<SeriesPoint> hill_series(std::span<const double> data, std::size_t k_min,
                                     std::size_t k_max, bool parallel = true);

/// QQ (least-squares slope of log-quantiles) or Pickands estimate.
TailFit alt_tail_estimate(std::span<const double> data, std::size_t k, Method method);

/// Dispatches to hill_estimate or alt_tail_estimate.
TailFit estimate(std::span<const double> data, std::size_t k, Method method);

/// k-th largest value.
double intermediate_scale(std::span<const double> data, std::size_t k);

} // namespace hrvkit::tail
