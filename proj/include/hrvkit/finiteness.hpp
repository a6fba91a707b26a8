#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrvkit/spectral.hpp"

namespace hrvkit::finiteness {

enum class Norm { L1, L2, Linf };

std::string_view to_string(Norm norm);
Norm norm_from_string(std::string_view name);

/// Moment integral of an atomic spectral estimate and its finiteness.
struct MassVerdict {
    double value;  // +inf when infinite
    bool finite;
    std::optional<Norm> norm;  // empty for the simplex form
    // Fraction of the moment sum carried by the top 5% of atoms by norm.
    double top_share;
    std::vector<std::string> warnings;
};

enum class Branch { Power, Log };

std::string_view to_string(Branch branch);

struct ExponentCheck {
    double exponent;
    Branch branch;
    std::vector<std::string> warnings;
};

double norm_of(std::span<const double> point, Norm norm);

MassVerdict moment_mass(const spectral::SpectralAtoms& atoms, double alpha, Norm norm);

/// sum_a w_a * phi^(l)(s_a)^(-alpha), the L1 form on the simplex.
MassVerdict moment_mass_simplex(const spectral::TransformedAtoms& atoms, double alpha,
                                std::size_t level);

/// e = beta1 + beta2 - alpha2 - 2 and its integration branch. When level-2
/// atoms are given, also warns if the interior atom sum is numerically
/// divergent.
ExponentCheck interior_exponent_check(std::array<double, 2> beta, double alpha2,
                                      const spectral::SpectralAtoms* atoms = nullptr);

/// Closed form of int_a^b r^(beta1 + beta2 - 2) nu_alpha(dr) with
/// nu_alpha(dr) = alpha r^(-alpha - 1) dr, for 0 < a <= b.
double radial_power_integral(double a, double b, std::array<double, 2> beta, double alpha);

/// |e| below this uses the logarithmic branch.
inline constexpr double log_branch_threshold = 1e-9;

} // namespace hrvkit::finiteness
