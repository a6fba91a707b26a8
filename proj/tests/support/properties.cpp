#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "hrvkit/data_core.hpp"
#include "hrvkit/finiteness.hpp"
#include "hrvkit/risk.hpp"
#include "hrvkit/spectral.hpp"
#include "hrvkit/tail_index.hpp"

namespace props {

namespace {

using Rng = std::mt19937_64;

double unif(Rng& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
std::size_t pick(Rng& g, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(g);
}

// A point with l-th largest component exactly 1: l-1 entries in [1, 20],
// one entry 1, the rest in [0, 1), shuffled.
std::vector<double> delta_aleph_point(Rng& g, std::size_t d, std::size_t l) {
    std::vector<double> p;
    for (std::size_t i = 0; i + 1 < l; ++i) p.push_back(unif(g, 1.0, 20.0));
    p.push_back(1.0);
    while (p.size() < d) p.push_back(g() % 8 == 0 ? 0.0 : unif(g, 0.0, 1.0));
    std::shuffle(p.begin(), p.end(), g);
    return p;
}

std::vector<double> simplex_point(Rng& g, std::size_t d) {
    std::vector<double> e(d);
    double sum = 0.0;
    for (double& v : e) {
        v = -std::log(unif(g, 1e-12, 1.0));
        sum += v;
    }
    std::vector<double> s;
    for (std::size_t i = 1; i < d; ++i) s.push_back(e[i] / sum);
    return s;
}

void record(SuiteResult& r, double err, double tol, const std::string& what) {
    ++r.cases;
    r.worst = std::max(r.worst, err);
    if (!(err <= tol)) {
        if (r.failures == 0) r.first_failure = what;
        ++r.failures;
    }
}

std::string describe(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

hrvkit::data::SampleMatrix random_sample(Rng& g, std::size_t n, std::size_t d) {
    std::vector<double> vals(n * d);
    for (double& v : vals) v = std::pow(unif(g, 1e-9, 1.0), -1.0);
    return hrvkit::data::SampleMatrix(n, d, std::move(vals));
}

} // namespace

SuiteResult t_round_trips(std::size_t cases, std::uint64_t seed) {
    using namespace hrvkit::spectral;
    SuiteResult r{"T round trips"};
    Rng g(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t d = pick(g, 2, 5), l = pick(g, 1, d);
        const auto theta = delta_aleph_point(g, d, l);
        const auto back = transform_T_inverse(transform_T(theta, l), l);
        double err = 0.0;
        for (std::size_t j = 0; j < d; ++j) err = std::max(err, std::abs(back[j] - theta[j]));
        record(r, err, 1e-12, "theta " + describe(theta) + " l=" + std::to_string(l));

        auto s = simplex_point(g, d);
        // Points of D_2^(l) with positive phi; some coordinates zeroed when l allows.
        if (phi(s, l) < 1e-3) continue;
        const auto again = transform_T(transform_T_inverse(s, l), l);
        double err2 = 0.0;
        for (std::size_t j = 0; j + 1 < d; ++j) err2 = std::max(err2, std::abs(again[j] - s[j]));
        record(r, err2, 1e-12, "s " + describe(s) + " l=" + std::to_string(l));
    }
    return r;
}

SuiteResult phi_identity(std::size_t cases, std::uint64_t seed) {
    using namespace hrvkit::spectral;
    SuiteResult r{"phi identity"};
    Rng g(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t d = pick(g, 2, 5), l = pick(g, 1, d);
        const auto theta = delta_aleph_point(g, d, l);
        double sum = 0.0;
        for (double v : theta) sum += v;
        const double lhs = phi(transform_T(theta, l), l);
        record(r, std::abs(lhs * sum - 1.0), 1e-12, "theta " + describe(theta));
    }
    return r;
}

SuiteResult hill_scale_invariance(std::size_t cases, std::uint64_t seed) {
    SuiteResult r{"Hill scale invariance"};
    Rng g(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t n = pick(g, 5, 200);
        std::vector<double> x(n), y(n);
        const double alpha = unif(g, 0.3, 4.0);
        const double scale = std::exp(unif(g, -7.0, 7.0));
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::pow(unif(g, 1e-12, 1.0), -1.0 / alpha);
            y[i] = scale * x[i];
        }
        const std::size_t k = pick(g, 1, n - 1);
        const double a = hrvkit::tail::hill_estimate(x, k).alpha_hat;
        const double b = hrvkit::tail::hill_estimate(y, k).alpha_hat;
        record(r, std::abs(a - b) / a, 1e-10,
               "n=" + std::to_string(n) + " k=" + std::to_string(k) + " c=" + std::to_string(scale));
    }
    return r;
}

SuiteResult rank_monotone_invariance(std::size_t cases, std::uint64_t seed) {
    using namespace hrvkit;
    SuiteResult r{"rank invariance under monotone maps"};
    Rng g(seed);
    const std::vector<std::function<double(double)>> maps{
        [](double v) { return std::sqrt(v); },
        [](double v) { return std::log1p(v) * 5.0 + 2.0; },
        [](double v) { return v * v * v; },
        [](double v) { return 3.0 * v + 7.0; },
        [](double v) { return v / (1.0 + v); },
    };
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t n = pick(g, 1, 30), d = pick(g, 2, 4);
        std::vector<double> vals(n * d), mapped(n * d);
        std::vector<std::size_t> which(d);
        for (auto& w : which) w = pick(g, 0, maps.size() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                // Coarse values so ties occur and must be preserved.
                vals[i * d + j] = static_cast<double>(pick(g, 0, 12)) * 0.5;
                mapped[i * d + j] = maps[which[j]](vals[i * d + j]);
            }
        }
        const data::SampleMatrix a(n, d, vals), b(n, d, mapped);
        const bool ranks_equal = data::anti_ranks(a) == data::anti_ranks(b);
        const std::size_t l = pick(g, 1, d), k = pick(g, 1, n);
        const auto sa = spectral::estimate_spectral_rank(a, l, k);
        const auto sb = spectral::estimate_spectral_rank(b, l, k);
        bool atoms_equal = sa.atoms.size() == sb.atoms.size();
        for (std::size_t i = 0; atoms_equal && i < sa.atoms.size(); ++i)
            atoms_equal = sa.atoms[i].weight == sb.atoms[i].weight && sa.atoms[i].point == sb.atoms[i].point;
        record(r, (ranks_equal && atoms_equal) ? 0.0 : 1.0, 0.0,
               "n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
    return r;
}

SuiteResult threshold_homogeneity(std::size_t cases, std::uint64_t seed) {
    using namespace hrvkit;
    SuiteResult r{"threshold homogeneity"};
    Rng g(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t d = pick(g, 2, 3), n = pick(g, 10, 40);
        const auto sample = random_sample(g, n, d);
        const std::size_t j = pick(g, 2, d);
        std::vector<std::size_t> idx(d);
        for (std::size_t i = 0; i < d; ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), g);
        idx.resize(j);
        const std::size_t level = pick(g, 1, j);
        spectral::SpectralAtoms atoms{level, d, {}};
        const std::size_t count = pick(g, 1, 6);
        for (std::size_t a = 0; a < count; ++a)
            atoms.atoms.push_back({1.0 / static_cast<double>(count), delta_aleph_point(g, d, level)});
        std::vector<double> t(j), ct(j);
        const double scale = std::exp(unif(g, -3.0, 3.0));
        for (std::size_t p = 0; p < j; ++p) {
            t[p] = unif(g, 1.0, 100.0);
            ct[p] = scale * t[p];
        }
        const double alpha = unif(g, 0.5, 3.0);
        const std::size_t k = pick(g, 1, n - 1);
        const auto base = risk::joint_exceedance_semiparam(sample, idx, t, k, detect::Mode::Standard,
                                                           atoms, alpha);
        const auto scaled = risk::joint_exceedance_semiparam(sample, idx, ct, k,
                                                             detect::Mode::Standard, atoms, alpha);
        const double expect = std::pow(scale, -alpha) * base.probability;
        const double err = base.probability > 0.0
                               ? std::abs(scaled.probability - expect) / expect
                               : std::abs(scaled.probability);
        record(r, err, 1e-12, "alpha=" + std::to_string(alpha) + " c=" + std::to_string(scale));
    }
    return r;
}

SuiteResult moment_mass_identity(std::size_t cases, std::uint64_t seed) {
    using namespace hrvkit;
    SuiteResult r{"moment mass L1/simplex identity"};
    Rng g(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t d = pick(g, 2, 5), l = pick(g, 1, d);
        spectral::SpectralAtoms atoms{l, d, {}};
        const std::size_t count = pick(g, 1, 10);
        double total = 0.0;
        for (std::size_t a = 0; a < count; ++a) {
            const double w = unif(g, 0.1, 1.0);
            total += w;
            atoms.atoms.push_back({w, delta_aleph_point(g, d, l)});
        }
        for (auto& a : atoms.atoms) a.weight /= total;
        const double alpha = unif(g, 0.2, 4.0);
        const auto direct = finiteness::moment_mass(atoms, alpha, finiteness::Norm::L1);
        const auto simplex = finiteness::moment_mass_simplex(spectral::transform_measure(atoms), alpha, l);
        record(r, std::abs(direct.value - simplex.value) / direct.value, 1e-10,
               "d=" + std::to_string(d) + " l=" + std::to_string(l));
    }
    return r;
}

std::vector<SuiteResult> all(std::size_t cases, std::uint64_t seed) {
    return {t_round_trips(cases, seed),           phi_identity(cases, seed + 1),
            hill_scale_invariance(cases, seed + 2), rank_monotone_invariance(cases, seed + 3),
            threshold_homogeneity(cases, seed + 4), moment_mass_identity(cases, seed + 5)};
}

} // namespace props
