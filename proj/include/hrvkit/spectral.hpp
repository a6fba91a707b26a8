#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hrvkit/data_core.hpp"

namespace hrvkit::spectral {

struct Atom {
    double weight;
    std::vector<double> point;
};

/// Atomic estimate of the hidden spectral measure S^(l) on
/// {x : x^(l) = 1}. Points may carry +inf components (mass at infinity).
struct SpectralAtoms {
    std::size_t level;
    std::size_t dim;
    std::vector<Atom> atoms;

    double total_weight() const;
};

struct SimplexAtom {
    double weight;
    std::vector<double> point;  // d-1 coordinates in the simplex
    bool sentinel = false;      // image of an atom with an infinite component
};

/// Pushforward of SpectralAtoms onto the (d-1)-simplex.
struct TransformedAtoms {
    std::size_t level;
    std::size_t dim;
    std::vector<SimplexAtom> atoms;

    double sentinel_weight() const;
    std::size_t sentinel_count() const;
};

/// Density on [0, 1] (dim == 2, y empty) or on simplex lattice points
/// (dim == 3, x/y paired).
struct DensityCurve {
    std::size_t dim;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> values;
    double bandwidth;
    std::size_t lattice = 0;    // lattice resolution for dim == 3
    double excluded_mass = 0.0; // sentinel mass left out of the estimate

    /// Trapezoid rule (dim 2) or piecewise-linear lattice rule (dim 3).
    double integral() const;
};

SpectralAtoms estimate_spectral_standard(const data::SampleMatrix& sample, std::size_t level,
                                         std::size_t k);

SpectralAtoms estimate_spectral_rank(const data::SampleMatrix& sample, std::size_t level,
                                     std::size_t k);
SpectralAtoms estimate_spectral_rank(const data::AntiRankMatrix& ranks, std::size_t level,
                                     std::size_t k);

/// l-th largest of (1 - sum s, s^1, ..., s^{d-1}).
double phi(std::span<const double> s, std::size_t level);

/// (theta^2, ..., theta^d) / sum theta; the zero vector if any component is
/// infinite.
std::vector<double> transform_T(std::span<const double> theta, std::size_t level);

/// (1 - sum s, s^1, ..., s^{d-1}) / phi(s); all ones where phi(s) == 0.
std::vector<double> transform_T_inverse(std::span<const double> s, std::size_t level);

TransformedAtoms transform_measure(const SpectralAtoms& atoms);

struct DensityOptions {
    std::optional<double> bandwidth;  // empty selects the Silverman rule
    std::size_t grid_size = 201;      // points on [0, 1] for d = 2
    std::size_t lattice = 60;         // simplex lattice resolution for d = 3
    bool parallel = true;
};

DensityCurve density_estimate(const TransformedAtoms& atoms, const DensityOptions& options = {});

/// Kernel density of weighted scalars in [0, 1] (e.g. a pushforward M^(p)).
DensityCurve density_estimate_interval(std::span<const double> weights,
                                       std::span<const double> values,
                                       const DensityOptions& options = {});

/// 1.06 * sigma * N_eff^(-1/5), with weighted sigma and N_eff = 1 / sum w^2.
double silverman_bandwidth(std::span<const double> weights, std::span<const double> values);

} // namespace hrvkit::spectral
