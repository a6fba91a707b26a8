#include "hrvkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "hrvkit/error.hpp"

namespace hrvkit::spectral {

namespace {

constexpr double simplex_tol = 1e-12;

void check_level(std::size_t level, std::size_t d) {
    if (level < 1 || level > d) {
        fail(ErrorCode::LevelOutOfRange,
             "level " + std::to_string(level) + " outside [1, " + std::to_string(d) + "]");
    }
}

void check_k(std::size_t k, std::size_t n) {
    if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
    if (k > n) {
        fail(ErrorCode::KTooLarge,
             "k = " + std::to_string(k) + " exceeds the sample size " + std::to_string(n));
    }
}

double kth_largest(std::vector<double> values, std::size_t k) {
    std::nth_element(values.begin(), values.begin() + (k - 1), values.end(), std::greater<>());
    return values[k - 1];
}

// (1 - sum s, s^1, ..., s^{d-1}) after validating s lies in the simplex.
std::vector<double> simplex_components(std::span<const double> s) {
    double sum = 0.0;
    for (double v : s) {
        if (!std::isfinite(v) || v < -simplex_tol)
            fail(ErrorCode::NotInSimplex, "simplex coordinates must be finite and >= 0");
        sum += v;
    }
    if (sum > 1.0 + simplex_tol) fail(ErrorCode::NotInSimplex, "simplex coordinates sum above 1");
    std::vector<double> comps;
    comps.reserve(s.size() + 1);
    comps.push_back(std::max(0.0, 1.0 - sum));
    for (double v : s) comps.push_back(std::max(0.0, v));
    return comps;
}

double lth(std::vector<double> values, std::size_t level) {
    std::nth_element(values.begin(), values.begin() + (level - 1), values.end(), std::greater<>());
    return values[level - 1];
}

} // namespace

double SpectralAtoms::total_weight() const {
    double sum = 0.0;
    for (const auto& a : atoms) sum += a.weight;
    return sum;
}

double TransformedAtoms::sentinel_weight() const {
    double sum = 0.0;
    for (const auto& a : atoms)
        if (a.sentinel) sum += a.weight;
    return sum;
}

std::size_t TransformedAtoms::sentinel_count() const {
    return static_cast<std::size_t>(
        std::count_if(atoms.begin(), atoms.end(), [](const auto& a) { return a.sentinel; }));
}

SpectralAtoms estimate_spectral_standard(const data::SampleMatrix& sample, std::size_t level,
                                         std::size_t k) {
    const std::size_t d = sample.cols();
    check_level(level, d);
    check_k(k, sample.rows());
    const auto lv = data::level_values(sample, level);
    const double c = kth_largest(lv, k);
    if (!(c > 0.0)) {
        fail(ErrorCode::AllZeroLevel,
             "the k-th largest level-" + std::to_string(level) + " value is zero");
    }
    SpectralAtoms out{level, d, {}};
    for (std::size_t i = 0; i < sample.rows(); ++i) {
        if (lv[i] < c) continue;
        const auto row = sample.row(i);
        std::vector<double> point(d);
        for (std::size_t j = 0; j < d; ++j) point[j] = row[j] / lv[i];
        out.atoms.push_back({0.0, std::move(point)});
    }
    const double w = 1.0 / static_cast<double>(out.atoms.size());
    for (auto& a : out.atoms) a.weight = w;
    return out;
}

SpectralAtoms estimate_spectral_rank(const data::AntiRankMatrix& ranks, std::size_t level,
                                     std::size_t k) {
    const std::size_t d = ranks.cols();
    check_level(level, d);
    check_k(k, ranks.rows());
    const auto m = data::rank_level_values(ranks, level);
    const double threshold = kth_largest(m, k);
    SpectralAtoms out{level, d, {}};
    for (std::size_t i = 0; i < ranks.rows(); ++i) {
        if (m[i] < threshold) continue;
        std::vector<double> point(d);
        for (std::size_t j = 0; j < d; ++j)
            point[j] = (1.0 / static_cast<double>(ranks(i, j))) / m[i];
        out.atoms.push_back({0.0, std::move(point)});
    }
    const double w = 1.0 / static_cast<double>(out.atoms.size());
    for (auto& a : out.atoms) a.weight = w;
    return out;
}

SpectralAtoms estimate_spectral_rank(const data::SampleMatrix& sample, std::size_t level,
                                     std::size_t k) {
    check_level(level, sample.cols());
    check_k(k, sample.rows());
    return estimate_spectral_rank(data::anti_ranks(sample), level, k);
}

double phi(std::span<const double> s, std::size_t level) {
    check_level(level, s.size() + 1);
    return lth(simplex_components(s), level);
}

std::vector<double> transform_T(std::span<const double> theta, std::size_t level) {
    const std::size_t d = theta.size();
    check_level(level, d);
    const bool infinite =
        std::any_of(theta.begin(), theta.end(), [](double v) { return std::isinf(v); });
    if (infinite) return std::vector<double>(d - 1, 0.0);
    const double lv = lth(std::vector<double>(theta.begin(), theta.end()), level);
    if (std::abs(lv - 1.0) > 1e-9)
        fail(ErrorCode::InvalidArgument, "theta must have l-th largest component 1");
    const double sum = std::accumulate(theta.begin(), theta.end(), 0.0);
    std::vector<double> s(theta.begin() + 1, theta.end());
    for (double& v : s) v /= sum;
    return s;
}

std::vector<double> transform_T_inverse(std::span<const double> s, std::size_t level) {
    check_level(level, s.size() + 1);
    auto comps = simplex_components(s);
    const double f = lth(comps, level);
    if (!(f > 0.0)) return std::vector<double>(comps.size(), 1.0);
    for (double& v : comps) v /= f;
    return comps;
}

TransformedAtoms transform_measure(const SpectralAtoms& atoms) {
    TransformedAtoms out{atoms.level, atoms.dim, {}};
    out.atoms.reserve(atoms.atoms.size());
    for (const auto& a : atoms.atoms) {
        const bool infinite =
            std::any_of(a.point.begin(), a.point.end(), [](double v) { return std::isinf(v); });
        out.atoms.push_back({a.weight, transform_T(a.point, atoms.level), infinite});
    }
    return out;
}

double DensityCurve::integral() const {
    if (dim == 2) {
        double sum = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i)
            sum += 0.5 * (values[i] + values[i - 1]) * (x[i] - x[i - 1]);
        return sum;
    }
    // Lattice points ordered by i (x = i/g) then j (y = j/g), i + j <= g.
    const std::size_t g = lattice;
    std::vector<std::size_t> offset(g + 2, 0);
    for (std::size_t i = 0; i <= g; ++i) offset[i + 1] = offset[i] + (g - i + 1);
    auto at = [&](std::size_t i, std::size_t j) { return values[offset[i] + j]; };
    const double area = 0.5 / static_cast<double>(g * g);
    double sum = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; i + j < g; ++j) {
            sum += area * (at(i, j) + at(i + 1, j) + at(i, j + 1)) / 3.0;
            if (i + j + 2 <= g)
                sum += area * (at(i + 1, j) + at(i, j + 1) + at(i + 1, j + 1)) / 3.0;
        }
    }
    return sum;
}

} // namespace hrvkit::spectral
