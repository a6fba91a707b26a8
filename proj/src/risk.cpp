#include "hrvkit/risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "hrvkit/error.hpp"

namespace hrvkit::risk {

namespace {

using data::SampleMatrix;

void check_thresholds(std::span<const double> t) {
    for (double v : t) {
        if (!(v > 0.0) || !std::isfinite(v))
            fail(ErrorCode::InvalidArgument, "thresholds must be positive and finite");
    }
}

void check_indices(std::span<const std::size_t> indices, std::size_t d, std::size_t n_thresholds) {
    if (indices.empty()) fail(ErrorCode::InvalidArgument, "no components queried");
    if (indices.size() != n_thresholds)
        fail(ErrorCode::InvalidArgument, "one threshold is needed per queried component");
    for (std::size_t a = 0; a < indices.size(); ++a) {
        if (indices[a] >= d)
            fail(ErrorCode::InvalidArgument, "component index " + std::to_string(indices[a] + 1) +
                                                 " exceeds d = " + std::to_string(d));
        for (std::size_t b = 0; b < a; ++b)
            if (indices[a] == indices[b]) fail(ErrorCode::InvalidArgument, "repeated component index");
    }
}

void check_k(std::size_t k, std::size_t n) {
    if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
    if (k > n) {
        fail(ErrorCode::KTooLarge,
             "k = " + std::to_string(k) + " exceeds the sample size " + std::to_string(n));
    }
}

// Hill needs X_(k+1); at k = n the fit falls back to k = n - 1.
tail::TailFit hill_at(std::span<const double> values, std::size_t k, Diagnostics& diag) {
    if (k >= values.size() && values.size() >= 2) {
        diag.warnings.push_back("alpha fitted at k = n - 1 since Hill needs k < n");
        k = values.size() - 1;
    }
    return tail::hill_estimate(values, k);
}

std::string subset_name(const SampleMatrix& sample, std::span<const std::size_t> indices) {
    std::string out;
    for (std::size_t i : indices) {
        if (!out.empty()) out += '&';
        out += sample.names()[i];
    }
    return out;
}

double exact_radial_atom(double t1, double t2, std::array<double, 2> beta, double alpha,
                         std::array<double, 2> phi, double y) {
    // On the ray r * theta the components are Z^j / a^j = (r theta^j)^(1/beta^j).
    auto r_at = [&](double level, std::size_t j, double t) {
        return std::pow(level / phi[j], beta[j]) / t;
    };
    const double r_max = std::min(r_at(y, 0, t1), r_at(y, 1, t2));
    const double r_lo = std::min(r_at(0.5 * y, 0, t1), r_at(0.5 * y, 1, t2));
    auto f = [&](double s) {
        const double r = std::exp(s);
        return phi[0] * std::pow(r * t1, 1.0 / beta[0]) + phi[1] * std::pow(r * t2, 1.0 / beta[1]) -
               y;
    };
    const double s_lo = std::log(r_lo), s_hi = std::log(r_max);
    const double f_lo = f(s_lo), f_hi = f(s_hi);
    if (!(f_hi > 0.0)) return 0.0;
    double s_min = s_lo;
    if (f_lo < 0.0) {
        std::uintmax_t iters = 200;
        const auto [a, b] = boost::math::tools::toms748_solve(
            f, s_lo, s_hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iters);
        s_min = 0.5 * (a + b);
    }
    if (!(s_min < s_hi)) return 0.0;
    return std::exp(-alpha * s_min) - std::exp(-alpha * s_hi);
}

double closed_form_atom(double t1, double t2, std::array<double, 2> beta, double alpha,
                        std::array<double, 2> phi, double y) {
    const double a = y / (phi[0] * t1 + phi[1] * t2);
    const double b = y / std::max(phi[0] * t1, phi[1] * t2);
    return beta[0] * beta[1] * std::pow(t1, beta[0] - 1.0) * std::pow(t2, beta[1] - 1.0) *
           finiteness::radial_power_integral(a, b, beta, alpha);
}

} // namespace

std::string_view to_string(Method method) {
    return method == Method::Semiparam ? "semiparam" : "rank_empirical";
}

std::string_view to_string(InteriorMethod method) {
    return method == InteriorMethod::ExactRadial ? "exact_radial" : "closed_form";
}

InteriorMethod interior_method_from_string(std::string_view name) {
    if (name == "exact_radial") return InteriorMethod::ExactRadial;
    if (name == "closed_form") return InteriorMethod::ClosedForm;
    fail(ErrorCode::InvalidArgument, "unknown interior method '" + std::string(name) + "'");
}

MarginalEstimate marginal_tail_probability(std::span<const double> column, std::size_t k,
                                           double z) {
    if (!(z > 0.0) || !std::isfinite(z))
        fail(ErrorCode::InvalidArgument, "threshold z must be positive and finite");
    const auto fit = tail::hill_estimate(column, k);
    const double kn = static_cast<double>(k) / static_cast<double>(column.size());
    MarginalEstimate out{kn * std::pow(z / fit.scale_at_k, -fit.alpha_hat), fit, {}};
    if (z < fit.scale_at_k) {
        out.warnings.push_back("threshold " + std::to_string(z) + " lies below X_(k) = " +
                               std::to_string(fit.scale_at_k) +
                               "; the tail extrapolation is used outside its range");
    }
    return out;
}

MarginalScales marginal_scale_rank(const SampleMatrix& sample, const data::AntiRankMatrix& ranks,
                                   std::size_t k, const BetaSource& beta, std::size_t level) {
    const std::size_t n = sample.rows(), d = sample.cols();
    check_k(k, n);
    if (level < 1 || level > d) fail(ErrorCode::LevelOutOfRange, "scale level outside [1, d]");
    // m_i = 1 / q_i with q_i the level-th smallest rank in row i, so
    // ceil(1 / m_(k)) is the k-th smallest q_i, computed in integers.
    std::vector<std::size_t> q(n), row(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) row[j] = ranks(i, j);
        std::nth_element(row.begin(), row.begin() + (level - 1), row.end());
        q[i] = row[level - 1];
    }
    std::nth_element(q.begin(), q.begin() + (k - 1), q.end());
    MarginalScales out{q[k - 1], {}, {}};
    for (std::size_t j = 0; j < d; ++j)
        out.scale.push_back(tail::intermediate_scale(sample.column(j), out.index));
    if (beta.fixed) {
        if (beta.fixed->size() != d)
            fail(ErrorCode::InvalidArgument, "fixed beta needs one value per column");
        for (double b : *beta.fixed)
            if (!(b > 0.0) || !std::isfinite(b)) fail(ErrorCode::BadAlpha, "beta must be positive");
        out.beta_hat = *beta.fixed;
    } else {
        for (std::size_t j = 0; j < d; ++j)
            out.beta_hat.push_back(tail::estimate(sample.column(j), k, beta.method).alpha_hat);
    }
    for (double s : out.scale) {
        if (!(s > 0.0))
            fail(ErrorCode::NonPositiveData, "a marginal scale plug-in is zero");
    }
    return out;
}

MarginalScales marginal_scale_rank(const SampleMatrix& sample, std::size_t k,
                                   const BetaSource& beta, std::size_t level) {
    check_k(k, sample.rows());
    return marginal_scale_rank(sample, data::anti_ranks(sample), k, beta, level);
}

RiskEstimate joint_exceedance_semiparam(const SampleMatrix& sample,
                                        std::span<const std::size_t> indices,
                                        std::span<const double> thresholds, std::size_t k,
                                        detect::Mode mode, const spectral::SpectralAtoms& atoms,
                                        double alpha_hat, const BetaSource& beta) {
    const std::size_t n = sample.rows(), d = sample.cols();
    check_indices(indices, d, thresholds.size());
    check_thresholds(thresholds);
    check_k(k, n);
    if (atoms.atoms.empty()) fail(ErrorCode::NoAtoms, "spectral estimate has no atoms");
    if (atoms.dim != d) fail(ErrorCode::InvalidArgument, "atoms and sample differ in dimension");
    if (atoms.level < 1 || atoms.level > indices.size()) {
        fail(ErrorCode::LevelOutOfRange, "atoms at level " + std::to_string(atoms.level) +
                                             " cannot estimate a " +
                                             std::to_string(indices.size()) + "-way exceedance");
    }
    if (!(alpha_hat > 0.0) || !std::isfinite(alpha_hat))
        fail(ErrorCode::BadAlpha, "alpha_hat must be positive and finite");

    RiskEstimate out;
    out.method = Method::Semiparam;
    out.diagnostics.k = k;
    out.diagnostics.alpha_hat = alpha_hat;

    // u[p]: the threshold of component indices[p] on the scale of the atoms.
    std::vector<double> u(indices.size());
    if (mode == detect::Mode::Standard) {
        const double b = tail::intermediate_scale(data::level_values(sample, atoms.level), k);
        if (!(b > 0.0)) fail(ErrorCode::AllZeroLevel, "Z^(l)_(k) is zero");
        out.components["b_hat"] = b;
        for (std::size_t p = 0; p < indices.size(); ++p) u[p] = thresholds[p] / b;
    } else {
        const auto scales = marginal_scale_rank(sample, data::anti_ranks(sample), k, beta, atoms.level);
        for (std::size_t p = 0; p < indices.size(); ++p) {
            const std::size_t j = indices[p];
            u[p] = std::pow(thresholds[p] / scales.scale[j], scales.beta_hat[j]);
            out.components["scale_" + sample.names()[j]] = scales.scale[j];
            out.components["beta_" + sample.names()[j]] = scales.beta_hat[j];
        }
    }

    double sum = 0.0;
    for (const auto& a : atoms.atoms) {
        double worst = 0.0;
        bool zero = false;
        for (std::size_t p = 0; p < indices.size(); ++p) {
            const double theta = a.point[indices[p]];
            if (!(theta > 0.0)) {
                zero = true;
                break;
            }
            if (!std::isinf(theta)) worst = std::max(worst, u[p] / theta);
        }
        if (zero) continue;
        if (!(worst > 0.0))
            fail(ErrorCode::InfiniteAtom, "atom infinite in every queried component");
        sum += a.weight * std::pow(worst, -alpha_hat);
    }
    out.probability = static_cast<double>(k) / static_cast<double>(n) * sum;
    return out;
}

RiskEstimate joint_exceedance(const SampleMatrix& sample, std::span<const std::size_t> indices,
                              std::span<const double> thresholds, std::size_t k,
                              detect::Mode mode, const BetaSource& beta) {
    const std::size_t n = sample.rows(), d = sample.cols();
    check_indices(indices, d, thresholds.size());
    check_k(k, n);
    const std::size_t level = indices.size();
    Diagnostics diag;
    tail::TailFit fit{};
    spectral::SpectralAtoms atoms;
    if (mode == detect::Mode::Standard) {
        fit = hill_at(data::level_values(sample, level), k, diag);
        atoms = spectral::estimate_spectral_standard(sample, level, k);
    } else {
        const auto ranks = data::anti_ranks(sample);
        fit = hill_at(data::rank_level_values(ranks, level), k, diag);
        atoms = spectral::estimate_spectral_rank(ranks, level, k);
    }
    auto out = joint_exceedance_semiparam(sample, indices, thresholds, k, mode, atoms,
                                          fit.alpha_hat, beta);
    for (auto& w : diag.warnings) out.diagnostics.warnings.push_back(std::move(w));
    return out;
}

RiskEstimate joint_exceedance_hr(const SampleMatrix& sample, std::span<const std::size_t> indices,
                                 std::span<const double> thresholds, std::size_t k,
                                 const BetaSource& beta) {
    const std::size_t n = sample.rows(), d = sample.cols();
    check_indices(indices, d, thresholds.size());
    check_thresholds(thresholds);
    check_k(k, n);
    const auto ranks = data::anti_ranks(sample);
    const auto scales = marginal_scale_rank(sample, ranks, k, beta, indices.size());
    const double m_k = 1.0 / static_cast<double>(scales.index);
    std::vector<double> bound(indices.size());
    for (std::size_t p = 0; p < indices.size(); ++p) {
        const std::size_t j = indices[p];
        bound[p] = m_k * std::pow(thresholds[p] / scales.scale[j], scales.beta_hat[j]);
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bool all = true;
        for (std::size_t p = 0; p < indices.size() && all; ++p)
            all = 1.0 / static_cast<double>(ranks(i, indices[p])) > bound[p];
        if (all) ++count;
    }
    RiskEstimate out;
    out.method = Method::RankEmpirical;
    out.probability = static_cast<double>(count) / static_cast<double>(n);
    out.diagnostics.k = k;
    out.components["count"] = static_cast<double>(count);
    out.components["m_k"] = m_k;
    for (std::size_t p = 0; p < indices.size(); ++p) {
        const std::size_t j = indices[p];
        out.components["scale_" + sample.names()[j]] = scales.scale[j];
        out.components["beta_" + sample.names()[j]] = scales.beta_hat[j];
    }
    return out;
}

RiskEstimate noncompliance_probability(const SampleMatrix& sample,
                                       std::span<const double> thresholds,
                                       const detect::DetectionReport& detection, std::size_t k,
                                       const BetaSource& beta) {
    const std::size_t n = sample.rows(), d = sample.cols();
    if (thresholds.size() != d)
        fail(ErrorCode::InvalidArgument, "one threshold is needed per column");
    check_thresholds(thresholds);
    check_k(k, n);
    if (detection.dim != d) fail(ErrorCode::InvalidArgument, "detection report has another dimension");
    if (detection.k != k) {
        fail(ErrorCode::InvalidArgument, "detection report was computed at k = " +
                                             std::to_string(detection.k) + ", not " +
                                             std::to_string(k));
    }
    if (d > 20) fail(ErrorCode::InvalidArgument, "inclusion-exclusion limited to d <= 20");

    RiskEstimate out;
    out.method = Method::Semiparam;
    out.diagnostics.k = k;
    const auto fitted = detection.fitted_levels();
    double total = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
        std::vector<std::size_t> idx;
        std::vector<double> t;
        for (std::size_t j = 0; j < d; ++j) {
            if (mask & (1u << j)) {
                idx.push_back(j);
                t.push_back(thresholds[j]);
            }
        }
        const std::size_t size = idx.size();
        const std::string name = subset_name(sample, idx);
        const double sign = size % 2 == 1 ? 1.0 : -1.0;
        double term = 0.0;
        if (size == 1) {
            auto m = marginal_tail_probability(sample.column(idx[0]), k, t[0]);
            term = m.probability;
            for (auto& w : m.warnings) out.diagnostics.warnings.push_back(name + ": " + w);
        } else {
            std::size_t level = 0;
            for (std::size_t l : fitted)
                if (l <= size) level = l;
            bool applicable = level == size;
            if (level > 0 && level < size) {
                const auto* c = detection.level(level).check(size);
                applicable = c && c->verdict == detect::Verdict::Nondegenerate;
            }
            if (!applicable) {
                out.diagnostics.warnings.push_back(
                    name + ": no hidden regular variation applies to this " +
                    std::to_string(size) + "-way term; set to 0");
            } else {
                const auto& entry = detection.level(level);
                term = joint_exceedance_semiparam(sample, idx, t, k, detection.mode, *entry.spectral,
                                                  entry.alpha_hat->alpha_hat, beta)
                           .probability;
            }
        }
        out.components[name] = term;
        total += sign * term;
    }
    if (total < 0.0) {
        out.diagnostics.warnings.push_back("inclusion-exclusion total " + std::to_string(total) +
                                           " was negative; clamped to 0");
        total = 0.0;
    }
    out.probability = total;
    return out;
}

double interior_term(const spectral::SpectralAtoms& atoms, std::array<double, 2> beta,
                     double alpha, std::array<double, 2> phi, double y, double k_over_n,
                     InteriorMethod method) {
    if (atoms.dim != 2 || atoms.level != 2)
        fail(ErrorCode::InvalidArgument, "interior term needs level-2 atoms in d = 2");
    if (!(alpha > 0.0) || !(beta[0] > 0.0) || !(beta[1] > 0.0))
        fail(ErrorCode::BadAlpha, "alpha and beta must be positive");
    if (!(phi[0] > 0.0) || !(phi[1] > 0.0) || !(y > 0.0))
        fail(ErrorCode::InvalidArgument, "phi and y must be positive");
    double sum = 0.0;
    for (const auto& a : atoms.atoms) {
        const double t1 = a.point[0], t2 = a.point[1];
        // A zero or infinite component puts the whole ray outside the region.
        if (!(t1 > 0.0) || !(t2 > 0.0) || std::isinf(t1) || std::isinf(t2)) continue;
        sum += a.weight * (method == InteriorMethod::ExactRadial
                               ? exact_radial_atom(t1, t2, beta, alpha, phi, y)
                               : closed_form_atom(t1, t2, beta, alpha, phi, y));
    }
    return k_over_n * sum;
}

RiskEstimate linear_combination_risk(const SampleMatrix& sample, std::array<double, 2> gamma,
                                     double y, std::size_t k, const LinearOptions& options) {
    const std::size_t n = sample.rows();
    if (sample.cols() != 2) fail(ErrorCode::InvalidArgument, "linear combinations need d = 2");
    if (!(gamma[0] > 0.0) || !(gamma[1] > 0.0) || !(y > 0.0))
        fail(ErrorCode::InvalidArgument, "gamma and y must be positive");
    check_k(k, n);

    RiskEstimate out;
    out.method = Method::Semiparam;
    out.diagnostics.k = k;

    const std::array<std::size_t, 2> idx{0, 1};
    const std::array<double, 2> t{y / gamma[0], y / gamma[1]};
    double marginal_sum = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
        auto m = marginal_tail_probability(sample.column(j), k, t[j]);
        out.components["marginal_" + sample.names()[j]] = m.probability;
        marginal_sum += m.probability;
        for (auto& w : m.warnings) out.diagnostics.warnings.push_back(w);
    }

    const auto ranks = data::anti_ranks(sample);
    const auto fit = hill_at(data::rank_level_values(ranks, 2), k, out.diagnostics);
    const auto atoms = spectral::estimate_spectral_rank(ranks, 2, k);
    const auto both = joint_exceedance_semiparam(sample, idx, t, k, detect::Mode::Rank, atoms,
                                                 fit.alpha_hat, options.beta);
    const auto scales = marginal_scale_rank(sample, ranks, k, options.beta, 2);
    const std::array<double, 2> beta{scales.beta_hat[0], scales.beta_hat[1]};
    const std::array<double, 2> phi{gamma[0] * scales.scale[0], gamma[1] * scales.scale[1]};

    auto check = finiteness::interior_exponent_check(beta, fit.alpha_hat, &atoms);
    const double interior =
        interior_term(atoms, beta, fit.alpha_hat, phi, y,
                      static_cast<double>(k) / static_cast<double>(n), options.interior);
    for (const auto& w : check.warnings) out.diagnostics.warnings.push_back("interior: " + w);
    out.diagnostics.exponent = std::move(check);
    out.diagnostics.alpha_hat = fit.alpha_hat;

    out.components["both_exceed"] = both.probability;
    out.components["interior"] = interior;
    out.components["phi_" + sample.names()[0]] = phi[0];
    out.components["phi_" + sample.names()[1]] = phi[1];
    out.probability = std::max(0.0, marginal_sum - both.probability + interior);
    if (marginal_sum - both.probability + interior < 0.0)
        out.diagnostics.warnings.push_back("negative total clamped to 0");
    return out;
}

} // namespace hrvkit::risk
