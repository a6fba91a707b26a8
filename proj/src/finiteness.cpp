#include "hrvkit/finiteness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "hrvkit/error.hpp"

namespace hrvkit::finiteness {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// The top-share diagnostic needs enough atoms for "top 5%" to be a proper
// subset.
constexpr std::size_t min_atoms_for_share = 20;
constexpr double share_warning = 0.5;

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        fail(ErrorCode::BadAlpha, "alpha must be positive and finite");
}

// Share of sum(contribution) carried by the atoms with the largest `key`.
double top_share(std::vector<std::pair<double, double>> key_and_contribution) {
    if (key_and_contribution.empty()) return 0.0;
    std::sort(key_and_contribution.begin(), key_and_contribution.end(), std::greater<>());
    const std::size_t top = static_cast<std::size_t>(
        std::ceil(0.05 * static_cast<double>(key_and_contribution.size())));
    double total = 0.0, head = 0.0;
    for (std::size_t i = 0; i < key_and_contribution.size(); ++i) {
        total += key_and_contribution[i].second;
        if (i < top) head += key_and_contribution[i].second;
    }
    return total > 0.0 ? head / total : 0.0;
}

void share_warnings(MassVerdict& v, std::size_t atoms) {
    if (atoms >= min_atoms_for_share && v.top_share > share_warning) {
        v.warnings.push_back("top 5% of atoms carry " + std::to_string(v.top_share) +
                             " of the moment sum; the population integral may diverge");
    }
}

} // namespace

std::string_view to_string(Norm norm) {
    switch (norm) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::Linf: return "linf";
    }
    return "l1";
}

Norm norm_from_string(std::string_view name) {
    if (name == "l1" || name == "L1") return Norm::L1;
    if (name == "l2" || name == "L2") return Norm::L2;
    if (name == "linf" || name == "Linf") return Norm::Linf;
    fail(ErrorCode::InvalidArgument, "unknown norm '" + std::string(name) + "'");
}

std::string_view to_string(Branch branch) { return branch == Branch::Power ? "power" : "log"; }

double norm_of(std::span<const double> point, Norm norm) {
    double acc = 0.0;
    for (double v : point) {
        const double a = std::abs(v);
        if (std::isinf(a)) return inf;
        switch (norm) {
        case Norm::L1: acc += a; break;
        case Norm::L2: acc += a * a; break;
        case Norm::Linf: acc = std::max(acc, a); break;
        }
    }
    return norm == Norm::L2 ? std::sqrt(acc) : acc;
}

MassVerdict moment_mass(const spectral::SpectralAtoms& atoms, double alpha, Norm norm) {
    check_alpha(alpha);
    MassVerdict v{0.0, true, norm, 0.0, {}};
    std::vector<std::pair<double, double>> parts;
    for (const auto& a : atoms.atoms) {
        const double r = norm_of(a.point, norm);
        if (std::isinf(r)) {
            v.value = inf;
            v.finite = false;
            continue;
        }
        const double c = a.weight * std::pow(r, alpha);
        if (v.finite) v.value += c;
        parts.emplace_back(r, c);
    }
    if (!v.finite) {
        v.warnings.push_back("atom with an infinite component: mass at infinity");
        return v;
    }
    v.top_share = top_share(std::move(parts));
    share_warnings(v, atoms.atoms.size());
    return v;
}

MassVerdict moment_mass_simplex(const spectral::TransformedAtoms& atoms, double alpha,
                                std::size_t level) {
    check_alpha(alpha);
    MassVerdict v{0.0, true, std::nullopt, 0.0, {}};
    std::vector<std::pair<double, double>> parts;
    for (const auto& a : atoms.atoms) {
        const double f = a.sentinel ? 0.0 : spectral::phi(a.point, level);
        if (!(f > 0.0)) {
            v.value = inf;
            v.finite = false;
            continue;
        }
        const double c = a.weight * std::pow(f, -alpha);
        if (v.finite) v.value += c;
        parts.emplace_back(1.0 / f, c);
    }
    if (!v.finite) {
        v.warnings.push_back("atom with phi^(l) = 0 (sentinel or boundary): infinite moment");
        return v;
    }
    v.top_share = top_share(std::move(parts));
    share_warnings(v, atoms.atoms.size());
    return v;
}

double radial_power_integral(double a, double b, std::array<double, 2> beta, double alpha) {
    check_alpha(alpha);
    if (!(a > 0.0) || !(b >= a))
        fail(ErrorCode::InvalidArgument, "radial integral needs 0 < a <= b");
    const double e = beta[0] + beta[1] - alpha - 2.0;
    // alpha * int_a^b r^(e-1) dr
    if (std::isinf(b)) return e < 0.0 ? -alpha * std::pow(a, e) / e : inf;
    const double la = std::log(a), lb = std::log(b);
    if (std::abs(e) < log_branch_threshold) return alpha * (lb - la);
    return alpha * std::exp(e * la) * std::expm1(e * (lb - la)) / e;
}

ExponentCheck interior_exponent_check(std::array<double, 2> beta, double alpha2,
                                      const spectral::SpectralAtoms* atoms) {
    check_alpha(alpha2);
    if (!(beta[0] > 0.0) || !(beta[1] > 0.0))
        fail(ErrorCode::BadAlpha, "marginal indices beta must be positive");
    const double e = beta[0] + beta[1] - alpha2 - 2.0;
    ExponentCheck out{e, std::abs(e) < log_branch_threshold ? Branch::Log : Branch::Power, {}};
    if (!atoms) return out;
    if (atoms->dim != 2 || atoms->level != 2) {
        out.warnings.push_back("interior check expects level-2 atoms in d = 2");
        return out;
    }
    // The theta-dependent factor of the interior integrand with phi = (1, 1)
    // and y = 1; singular when a component is 0 and its beta is below 1.
    std::vector<std::pair<double, double>> parts;
    std::size_t singular = 0, infinite = 0;
    for (const auto& a : atoms->atoms) {
        const double t1 = a.point[0], t2 = a.point[1];
        if (std::isinf(t1) || std::isinf(t2)) {
            ++infinite;
            continue;
        }
        if ((t1 == 0.0 && beta[0] < 1.0) || (t2 == 0.0 && beta[1] < 1.0)) {
            ++singular;
            continue;
        }
        if (t1 == 0.0 || t2 == 0.0) continue;
        const double g = std::pow(t1, beta[0] - 1.0) * std::pow(t2, beta[1] - 1.0) *
                         radial_power_integral(1.0 / (t1 + t2), 1.0 / std::max(t1, t2), beta, alpha2);
        const double c = a.weight * std::abs(g);
        if (!std::isfinite(c)) {
            ++singular;
            continue;
        }
        parts.emplace_back(c, c);
    }
    if (singular > 0) {
        out.warnings.push_back(std::to_string(singular) +
                               " atom(s) make the interior integrand singular");
    }
    if (infinite > 0) {
        out.warnings.push_back(std::to_string(infinite) +
                               " atom(s) at infinity are left out of the interior integral");
    }
    const double share = top_share(std::move(parts));
    if (atoms->atoms.size() >= min_atoms_for_share && share > share_warning) {
        out.warnings.push_back("interior atom sum dominated by its top 5% of atoms (share " +
                               std::to_string(share) + "); the integral may diverge");
    }
    return out;
}

} // namespace hrvkit::finiteness
