#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrvkit/data_core.hpp"
#include "hrvkit/spectral.hpp"
#include "hrvkit/tail_index.hpp"

namespace hrvkit::detect {

enum class Mode { Standard, Rank };
enum class Verdict { Degenerate, Nondegenerate };
enum class StopReason { MassOnSubcone, ReachedD, AlphaOrderViolation, NoTail };

std::string_view to_string(Mode mode);
std::string_view to_string(Verdict verdict);
std::string_view to_string(StopReason reason);
Mode mode_from_string(std::string_view name);

struct WeightedValue {
    double weight;
    double value;
};

struct DegeneracyResult {
    Verdict verdict;
    double mass_below_epsilon;
};

struct SearchConfig {
    double epsilon = 0.05;
    double cutoff = 0.9;
    double alpha_tolerance = 0.1;
};

/// Findings for one subcone p > l of a fitted level l.
struct SubconeCheck {
    std::size_t p;
    Verdict verdict;
    double mass_below_epsilon;
    double mass_positive;  // estimated S^(l)-mass on {theta^(p) > 0}
};

struct LevelEntry {
    std::size_t level;
    bool visited = false;
    std::optional<tail::TailFit> alpha_hat;
    std::optional<spectral::SpectralAtoms> spectral;
    std::vector<SubconeCheck> checks;  // ascending p
    std::optional<StopReason> stop_reason;
    std::string error;  // message when the fit failed

    const SubconeCheck* check(std::size_t p) const;
};

struct DetectionReport {
    Mode mode;
    std::size_t k;
    SearchConfig config;
    std::size_t dim;
    std::vector<LevelEntry> levels;  // one entry per l = 1..d
    StopReason stop_reason;
    std::size_t tied_values = 0;  // entries tied with another in their column

    std::vector<std::size_t> visited_levels() const;
    std::vector<std::size_t> fitted_levels() const;
    const LevelEntry& level(std::size_t l) const { return levels.at(l - 1); }
};

/// (weight, theta^(p)) for each atom: the estimate of S^(l) o (M^(p))^-1.
std::vector<WeightedValue> pushforward_M(const spectral::SpectralAtoms& atoms, std::size_t p);

/// Degenerate iff the mass at values <= epsilon reaches the cutoff.
DegeneracyResult degeneracy_test(const std::vector<WeightedValue>& samples, double epsilon,
                                 double cutoff);

/// Sequential search over E^(1) > E^(2) > ... > E^(d).
DetectionReport sequential_hrv_search(const data::SampleMatrix& sample, Mode mode, std::size_t k,
                                      const SearchConfig& config = {});

} // namespace hrvkit::detect
