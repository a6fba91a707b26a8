#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrvkit/data_core.hpp"
#include "hrvkit/detect.hpp"
#include "hrvkit/finiteness.hpp"
#include "hrvkit/spectral.hpp"
#include "hrvkit/tail_index.hpp"

namespace hrvkit::risk {

enum class Method { Semiparam, RankEmpirical };

std::string_view to_string(Method method);

struct Diagnostics {
    std::size_t k = 0;
    std::optional<double> alpha_hat;
    std::vector<std::string> warnings;
    std::optional<finiteness::ExponentCheck> exponent;
};

struct RiskEstimate {
    double probability = 0.0;
    Method method = Method::Semiparam;
    std::map<std::string, double> components;
    Diagnostics diagnostics;
};

/// Marginal tail indices beta^j and the scale plug-ins a^j(b^(l)(n/k)).
struct MarginalScales {
    std::size_t index;  // ceil(1 / m^(l)_(k)), 1-based order statistic
    std::vector<double> scale;
    std::vector<double> beta_hat;
};

/// How marginal indices beta^j are obtained: fitted at k with `method`, or
/// supplied outright (e.g. known simulation truth).
struct BetaSource {
    tail::Method method = tail::Method::Hill;
    std::optional<std::vector<double>> fixed;
};

struct MarginalEstimate {
    double probability;
    tail::TailFit fit;
    std::vector<std::string> warnings;
};

/// (k/n) (z / X_(k))^(-alpha_hat) with the Hill fit at k.
MarginalEstimate marginal_tail_probability(std::span<const double> column, std::size_t k,
                                           double z);

/// Scales at the ceil(1/m^(level)_(k))-th largest order statistic per column.
MarginalScales marginal_scale_rank(const data::SampleMatrix& sample, std::size_t k,
                                   const BetaSource& beta = {}, std::size_t level = 2);
MarginalScales marginal_scale_rank(const data::SampleMatrix& sample,
                                   const data::AntiRankMatrix& ranks, std::size_t k,
                                   const BetaSource& beta, std::size_t level);

/// Semi-parametric P[Z^{i_1} > t^1, ..., Z^{i_j} > t^j] from level-j atoms.
RiskEstimate joint_exceedance_semiparam(const data::SampleMatrix& sample,
                                        std::span<const std::size_t> indices,
                                        std::span<const double> thresholds, std::size_t k,
                                        detect::Mode mode, const spectral::SpectralAtoms& atoms,
                                        double alpha_hat, const BetaSource& beta = {});

/// Fits alpha^(j) (Hill at k) and S^(j) itself, j = |indices|, then calls
/// joint_exceedance_semiparam.
RiskEstimate joint_exceedance(const data::SampleMatrix& sample,
                              std::span<const std::size_t> indices,
                              std::span<const double> thresholds, std::size_t k,
                              detect::Mode mode, const BetaSource& beta = {});

/// Rank-empirical estimate: (1/n) #{i : (1/r_i^j) > m_(k) u^j for all j}.
RiskEstimate joint_exceedance_hr(const data::SampleMatrix& sample,
                                 std::span<const std::size_t> indices,
                                 std::span<const double> thresholds, std::size_t k,
                                 const BetaSource& beta = {});

/// P[some Z^i > t^i] by inclusion-exclusion; j-way terms use the deepest
/// applicable level fitted in `detection`.
RiskEstimate noncompliance_probability(const data::SampleMatrix& sample,
                                       std::span<const double> thresholds,
                                       const detect::DetectionReport& detection, std::size_t k,
                                       const BetaSource& beta = {});

enum class InteriorMethod {
    // nu_alpha-measure of the exact radial interval of each atom's ray
    // inside the interior region.
    ExactRadial,
    // Product form with (theta^1)^(beta1-1) (theta^2)^(beta2-1) weights and
    // the closed-form radial integral.
    ClosedForm,
};

std::string_view to_string(InteriorMethod method);
InteriorMethod interior_method_from_string(std::string_view name);

struct LinearOptions {
    BetaSource beta;
    InteriorMethod interior = InteriorMethod::ExactRadial;
};

/// P[gamma_1 Z^1 + gamma_2 Z^2 > y] for d = 2.
RiskEstimate linear_combination_risk(const data::SampleMatrix& sample,
                                     std::array<double, 2> gamma, double y, std::size_t k,
                                     const LinearOptions& options = {});

/// Interior term (k/n) * sum_a w_a * [...] for fixed level-2 atoms.
/// `phi` holds gamma_j * scale_j.
double interior_term(const spectral::SpectralAtoms& atoms, std::array<double, 2> beta,
                     double alpha, std::array<double, 2> phi, double y, double k_over_n,
                     InteriorMethod method);

} // namespace hrvkit::risk
