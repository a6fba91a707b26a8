#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrvkit/data_core.hpp"
#include "hrvkit/spectral.hpp"

namespace hrvkit::simulate {

inline constexpr std::string_view generator_version = "1";

enum class Example { Sec7_1, Ex2_1, Ex2_2, Ex2_3, Ex2_4, Ex4_1, Ex4_2, Ex4_3, Ex5_2, Polar };

std::string_view to_string(Example example);
Example example_from_string(std::string_view name);

struct GeneratorSpec {
    Example example = Example::Sec7_1;
    std::size_t n = 1000;
    std::uint64_t seed = 0;

    // ex2_1: dimension and Pareto index of the iid components.
    // ex5_2: dimension (>= 2).
    std::size_t dim = 3;
    double alpha = 1.0;

    // polar: the angular measure (alpha is the radial index).
    std::optional<spectral::SpectralAtoms> polar_atoms;

    // ex5_2: per-level choice of the angular law on D_2^(l) (l = 2..dim).
    // `infinite_levels` lists levels whose moment integral should diverge;
    // `custom_levels` overrides the default law with explicit atoms.
    std::vector<std::size_t> infinite_levels;
    std::map<std::size_t, spectral::TransformedAtoms> custom_levels;
};

/// n iid Pareto(alpha) draws, P[X > x] = x^-alpha for x >= 1.
std::vector<double> pareto_sample(double alpha, std::size_t n, std::uint64_t seed);

/// Rows R_i * Theta_i with R_i ~ Pareto(alpha_l) independent of Theta_i ~ atoms.
data::SampleMatrix polar_sample(double alpha_l, const spectral::SpectralAtoms& atoms,
                                std::size_t n, std::uint64_t seed);

data::SampleMatrix example_dataset(const GeneratorSpec& spec);

/// Tail index l(l+1)/(2l+1) of the radial part at level l in ex5_2.
double ex5_2_alpha(std::size_t level);

/// Default two-point law on {s in D_2^(l) : s^l = ... = s^{d-1} = 0}.
spectral::TransformedAtoms ex5_2_default_law(std::size_t dim, std::size_t level);

} // namespace hrvkit::simulate
