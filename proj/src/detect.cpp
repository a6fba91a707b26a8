#include "hrvkit/detect.hpp"

#include <algorithm>
#include <string>

#include "hrvkit/error.hpp"

namespace hrvkit::detect {

namespace {

std::size_t count_tied(const data::SampleMatrix& sample) {
    std::size_t tied = 0;
    for (std::size_t j = 0; j < sample.cols(); ++j) {
        auto col = sample.column(j);
        std::sort(col.begin(), col.end());
        std::size_t start = 0;
        while (start < col.size()) {
            std::size_t end = start + 1;
            while (end < col.size() && col[end] == col[start]) ++end;
            if (end - start > 1) tied += end - start;
            start = end;
        }
    }
    return tied;
}

std::vector<SubconeCheck> subcone_checks(const spectral::SpectralAtoms& atoms,
                                         const SearchConfig& config) {
    std::vector<SubconeCheck> checks;
    for (std::size_t p = atoms.level + 1; p <= atoms.dim; ++p) {
        const auto pushed = pushforward_M(atoms, p);
        const auto res = degeneracy_test(pushed, config.epsilon, config.cutoff);
        double positive = 0.0;
        for (const auto& s : pushed)
            if (s.value > 0.0) positive += s.weight;
        checks.push_back({p, res.verdict, res.mass_below_epsilon, positive});
    }
    // theta^(p) <= theta^(p-1) pointwise, so mass near zero can only grow.
    for (std::size_t i = 1; i < checks.size(); ++i) {
        if (checks[i].mass_below_epsilon < checks[i - 1].mass_below_epsilon ||
            checks[i].mass_positive > checks[i - 1].mass_positive) {
            fail(ErrorCode::InvalidArgument, "internal: subcone masses not monotone in p");
        }
    }
    return checks;
}

} // namespace

std::string_view to_string(Mode mode) { return mode == Mode::Standard ? "standard" : "rank"; }

std::string_view to_string(Verdict verdict) {
    return verdict == Verdict::Degenerate ? "degenerate" : "nondegenerate";
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
    case StopReason::MassOnSubcone: return "mass_on_subcone";
    case StopReason::ReachedD: return "reached_d";
    case StopReason::AlphaOrderViolation: return "alpha_order_violation";
    case StopReason::NoTail: return "no_tail";
    }
    return "no_tail";
}

Mode mode_from_string(std::string_view name) {
    if (name == "standard") return Mode::Standard;
    if (name == "rank") return Mode::Rank;
    fail(ErrorCode::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

const SubconeCheck* LevelEntry::check(std::size_t p) const {
    for (const auto& c : checks)
        if (c.p == p) return &c;
    return nullptr;
}

std::vector<std::size_t> DetectionReport::visited_levels() const {
    std::vector<std::size_t> out;
    for (const auto& e : levels)
        if (e.visited) out.push_back(e.level);
    return out;
}

std::vector<std::size_t> DetectionReport::fitted_levels() const {
    std::vector<std::size_t> out;
    for (const auto& e : levels)
        if (e.alpha_hat && e.spectral) out.push_back(e.level);
    return out;
}

std::vector<WeightedValue> pushforward_M(const spectral::SpectralAtoms& atoms, std::size_t p) {
    if (p <= atoms.level || p > atoms.dim) {
        fail(ErrorCode::LevelOutOfRange, "pushforward needs level < p <= d, got p = " +
                                             std::to_string(p) + " at level " +
                                             std::to_string(atoms.level));
    }
    std::vector<WeightedValue> out;
    out.reserve(atoms.atoms.size());
    for (const auto& a : atoms.atoms) out.push_back({a.weight, data::lth_largest(a.point, p)});
    return out;
}

DegeneracyResult degeneracy_test(const std::vector<WeightedValue>& samples, double epsilon,
                                 double cutoff) {
    double below = 0.0;
    for (const auto& s : samples)
        if (s.value <= epsilon) below += s.weight;
    return {below >= cutoff ? Verdict::Degenerate : Verdict::Nondegenerate, below};
}

DetectionReport sequential_hrv_search(const data::SampleMatrix& sample, Mode mode, std::size_t k,
                                      const SearchConfig& config) {
    const std::size_t n = sample.rows();
    const std::size_t d = sample.cols();
    if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
    if (k >= n) {
        fail(ErrorCode::KTooLarge,
             "k = " + std::to_string(k) + " must be below the sample size " + std::to_string(n));
    }
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
        fail(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
    if (!(config.cutoff > 0.0 && config.cutoff <= 1.0))
        fail(ErrorCode::InvalidArgument, "cutoff must lie in (0, 1]");

    DetectionReport report{mode, k, config, d, {}, StopReason::ReachedD, count_tied(sample)};
    for (std::size_t l = 1; l <= d; ++l) {
        LevelEntry entry;
        entry.level = l;
        report.levels.push_back(std::move(entry));
    }

    std::optional<data::AntiRankMatrix> ranks;
    if (mode == Mode::Rank) ranks = data::anti_ranks(sample);

    std::optional<double> prev_alpha;
    std::size_t l = 1;
    while (true) {
        auto& entry = report.levels[l - 1];
        entry.visited = true;
        auto stop = [&](StopReason reason) {
            entry.stop_reason = reason;
            report.stop_reason = reason;
        };
        try {
            const auto values = mode == Mode::Standard ? data::level_values(sample, l)
                                                       : data::rank_level_values(*ranks, l);
            entry.alpha_hat = tail::hill_estimate(values, k);
            entry.spectral = mode == Mode::Standard ? spectral::estimate_spectral_standard(sample, l, k)
                                                    : spectral::estimate_spectral_rank(*ranks, l, k);
        } catch (const Error& e) {
            entry.error = e.what();
            stop(StopReason::NoTail);
            break;
        }
        if (prev_alpha && entry.alpha_hat->alpha_hat < *prev_alpha - config.alpha_tolerance) {
            stop(StopReason::AlphaOrderViolation);
            break;
        }
        prev_alpha = entry.alpha_hat->alpha_hat;
        if (l == d) {
            stop(StopReason::ReachedD);
            break;
        }
        entry.checks = subcone_checks(*entry.spectral, config);
        std::size_t p_star = l;
        for (const auto& c : entry.checks)
            if (c.verdict == Verdict::Nondegenerate) p_star = c.p;
        if (p_star == d) {
            stop(StopReason::MassOnSubcone);
            break;
        }
        l = p_star + 1;
    }
    return report;
}

} // namespace hrvkit::detect
