#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace props {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst = 0.0;  // largest observed error (meaning depends on the suite)
    std::string first_failure;

    bool ok() const { return cases > 0 && failures == 0; }
};

SuiteResult t_round_trips(std::size_t cases, std::uint64_t seed);
SuiteResult phi_identity(std::size_t cases, std::uint64_t seed);
SuiteResult hill_scale_invariance(std::size_t cases, std::uint64_t seed);
SuiteResult rank_monotone_invariance(std::size_t cases, std::uint64_t seed);
SuiteResult threshold_homogeneity(std::size_t cases, std::uint64_t seed);
SuiteResult moment_mass_identity(std::size_t cases, std::uint64_t seed);

std::vector<SuiteResult> all(std::size_t cases, std::uint64_t seed);

} // namespace props
