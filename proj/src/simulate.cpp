#include "hrvkit/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hrvkit/error.hpp"
#include "hrvkit/rng.hpp"

namespace hrvkit::simulate {

namespace {

using data::SampleMatrix;

constexpr std::array<std::pair<Example, std::string_view>, 10> example_names{{
    {Example::Sec7_1, "sec7_1"},
    {Example::Ex2_1, "ex2_1"},
    {Example::Ex2_2, "ex2_2"},
    {Example::Ex2_3, "ex2_3"},
    {Example::Ex2_4, "ex2_4"},
    {Example::Ex4_1, "ex4_1"},
    {Example::Ex4_2, "ex4_2"},
    {Example::Ex4_3, "ex4_3"},
    {Example::Ex5_2, "ex5_2"},
    {Example::Polar, "polar"},
}};

// Fixed stream ids: one per latent variable, so adding a variable to one
// example never shifts the draws of another.
constexpr std::uint64_t selector_stream = 1000;
constexpr std::uint64_t angle_stream = 2000;

double pareto(Stream& s, double alpha) { return std::pow(s.uniform(), -1.0 / alpha); }

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        fail(ErrorCode::BadAlpha, "alpha must be positive and finite, got " + std::to_string(alpha));
}

void check_n(std::size_t n) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "n must be at least 1");
}

// Draws an atom index with probability proportional to its weight.
class AtomPicker {
public:
    explicit AtomPicker(std::vector<double> weights) : cumulative_(std::move(weights)) {
        double total = 0.0;
        for (double& w : cumulative_) {
            if (!(w >= 0.0) || !std::isfinite(w))
                fail(ErrorCode::InvalidArgument, "atom weights must be finite and >= 0");
            total += w;
            w = total;
        }
        if (!(total > 0.0)) fail(ErrorCode::NoAtoms, "atomic measure has no mass");
        for (double& w : cumulative_) w /= total;
    }

    std::size_t pick(Stream& s) const {
        const double u = s.uniform();
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
        return it == cumulative_.end() ? cumulative_.size() - 1
                                       : static_cast<std::size_t>(it - cumulative_.begin());
    }

private:
    std::vector<double> cumulative_;
};

SampleMatrix iid_pareto(std::size_t n, std::size_t d, double alpha, std::uint64_t seed) {
    if (d < 2) fail(ErrorCode::InvalidArgument, "dimension must be at least 2");
    std::vector<double> values(n * d);
    for (std::size_t j = 0; j < d; ++j) {
        Stream s(seed, j);
        for (std::size_t i = 0; i < n; ++i) values[i * d + j] = pareto(s, alpha);
    }
    return SampleMatrix(n, d, std::move(values));
}

SampleMatrix sec7_1(std::size_t n, std::uint64_t seed) {
    Stream sx(seed, 0), sy(seed, 1);
    std::vector<double> values(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        values[2 * i] = pareto(sx, 1.0);
        values[2 * i + 1] = pareto(sy, 2.0);
    }
    return SampleMatrix(n, 2, std::move(values));
}

// Generic row builder for the constructions below: `latent` iid Pareto(1)
// streams plus one selector stream.
template <class Row>
SampleMatrix mixture(std::size_t n, std::size_t d, std::size_t latent, std::uint64_t seed,
                     Row&& row) {
    std::vector<Stream> xs;
    for (std::size_t j = 0; j < latent; ++j) xs.emplace_back(seed, j);
    Stream sel(seed, selector_stream);
    std::vector<double> values(n * d), x(latent);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < latent; ++j) x[j] = pareto(xs[j], 1.0);
        row(x, sel, values.data() + i * d);
    }
    return SampleMatrix(n, d, std::move(values));
}

// Uniform pick among three equally likely mixture components.
std::size_t third(Stream& s) { return s.index(3); }

SampleMatrix ex2_2(std::size_t n, std::uint64_t seed) {
    return mixture(n, 3, 2, seed, [](const auto& x, Stream&, double* z) {
        z[0] = x[0];
        z[1] = 2.0 * x[0];
        z[2] = x[1];
    });
}

SampleMatrix ex2_3(std::size_t n, std::uint64_t seed) {
    return mixture(n, 3, 3, seed, [](const auto& x, Stream& sel, double* z) {
        const bool b1 = sel.uniform() <= 0.5;
        const bool b2 = sel.uniform() <= 0.5;
        z[0] = b2 ? x[0] : 0.0;
        z[1] = b2 ? 0.0 : x[1];
        z[2] = b1 ? 0.0 : x[2];
    });
}

SampleMatrix ex2_4(std::size_t n, std::uint64_t seed) {
    return mixture(n, 3, 3, seed, [](const auto& x, Stream&, double* z) {
        const double a = x[0] * x[0], b = x[1] * x[1], c = x[2] * x[2];
        z[0] = std::min(a, b);
        z[1] = std::min(b, c);
        z[2] = std::min(a, c);
    });
}

SampleMatrix ex4_1(std::size_t n, std::uint64_t seed) {
    return mixture(n, 2, 2, seed, [](const auto& x, Stream& sel, double* z) {
        if (sel.uniform() <= 0.5) {
            z[0] = x[0];
            z[1] = x[0] * x[0];
        } else {
            z[0] = x[1] * x[1];
            z[1] = x[1];
        }
    });
}

SampleMatrix ex4_2(std::size_t n, std::uint64_t seed) {
    return mixture(n, 3, 5, seed, [](const auto& x, Stream& sel, double* z) {
        switch (third(sel)) {
        case 0: z[0] = x[0]; z[1] = x[0] * x[0]; z[2] = 0.0; break;
        case 1: z[0] = x[1] * x[1]; z[1] = x[1]; z[2] = 0.0; break;
        default: z[0] = x[2] * x[2]; z[1] = x[3] * x[3]; z[2] = x[4] * x[4]; break;
        }
    });
}

SampleMatrix ex4_3(std::size_t n, std::uint64_t seed) {
    return mixture(n, 3, 5, seed, [](const auto& x, Stream& sel, double* z) {
        switch (third(sel)) {
        case 0:
            z[0] = x[0];
            z[1] = std::pow(x[0], 3.0);
            z[2] = std::pow(x[0], 1.25);
            break;
        case 1:
            z[0] = std::pow(x[1], 3.0);
            z[1] = x[1];
            z[2] = std::pow(x[1], 1.25);
            break;
        default:
            z[0] = std::pow(x[2], 3.0);
            z[1] = std::pow(x[3], 3.0);
            z[2] = std::pow(x[4], 3.0);
            break;
        }
    });
}

// Angular law for one level of ex5_2: either atoms on the simplex or the
// continuous law with a diverging moment integral.
struct LevelLaw {
    std::size_t level = 0;
    bool infinite = false;
    std::vector<std::vector<double>> points;  // T^-1 images of the atoms
    std::optional<AtomPicker> picker;

    std::vector<double> draw(Stream& s, std::size_t d) const {
        if (!infinite) return points[picker->pick(s)];
        // v = U^(2/alpha_l) / l in coordinate l, the other l-1 nonzero
        // coordinates share 1 - v; phi^(l) = v and E[v^-alpha_l] diverges.
        const double v = std::pow(s.uniform(), 2.0 / ex5_2_alpha(level)) /
                         static_cast<double>(level);
        std::vector<double> comps(d, 0.0);
        for (std::size_t j = 0; j + 1 < level; ++j)
            comps[j] = (1.0 - v) / static_cast<double>(level - 1);
        comps[level - 1] = v;
        for (double& c : comps) c /= v;
        return comps;
    }
};

void check_level_support(const spectral::TransformedAtoms& law, std::size_t d, std::size_t l) {
    if (law.dim != d || law.level != l)
        fail(ErrorCode::InvalidArgument, "custom law for level " + std::to_string(l) +
                                             " has the wrong level or dimension");
    for (const auto& a : law.atoms) {
        if (a.point.size() + 1 != d)
            fail(ErrorCode::NotInSimplex, "custom atom has the wrong number of coordinates");
        for (std::size_t j = l; j < d; ++j) {
            if (a.point[j - 1] != 0.0) {
                fail(ErrorCode::InvalidArgument,
                     "custom law for level " + std::to_string(l) +
                         " must vanish in simplex coordinates l..d-1");
            }
        }
        if (!(spectral::phi(a.point, l) > 0.0))
            fail(ErrorCode::NotInSimplex, "custom atom has phi^(l) = 0 (outside D_2^(l))");
    }
}

SampleMatrix ex5_2(const GeneratorSpec& spec) {
    const std::size_t d = spec.dim;
    if (d < 2) fail(ErrorCode::InvalidArgument, "ex5_2 needs dimension >= 2");
    std::vector<LevelLaw> laws;
    for (std::size_t l = 2; l <= d; ++l) {
        LevelLaw law;
        law.level = l;
        law.infinite = std::find(spec.infinite_levels.begin(), spec.infinite_levels.end(), l) !=
                       spec.infinite_levels.end();
        if (!law.infinite) {
            const auto it = spec.custom_levels.find(l);
            const auto atoms = it != spec.custom_levels.end() ? it->second : ex5_2_default_law(d, l);
            check_level_support(atoms, d, l);
            std::vector<double> weights;
            for (const auto& a : atoms.atoms) {
                weights.push_back(a.weight);
                law.points.push_back(spectral::transform_T_inverse(a.point, l));
            }
            law.picker.emplace(std::move(weights));
        }
        laws.push_back(std::move(law));
    }
    for (std::size_t l : spec.infinite_levels) {
        if (l < 2 || l > d)
            fail(ErrorCode::LevelOutOfRange, "infinite level " + std::to_string(l) + " not in [2, d]");
    }

    std::vector<Stream> xs, rs, angles;
    for (std::size_t j = 0; j < d; ++j) xs.emplace_back(spec.seed, j);
    for (std::size_t l = 2; l <= d; ++l) {
        rs.emplace_back(spec.seed, 100 + l);
        angles.emplace_back(spec.seed, angle_stream + l);
    }
    Stream sel(spec.seed, selector_stream);

    std::vector<double> values(spec.n * d);
    for (std::size_t i = 0; i < spec.n; ++i) {
        double* z = values.data() + i * d;
        const std::size_t which = sel.index(d);
        if (which == 0) {
            for (std::size_t j = 0; j < d; ++j) z[j] = pareto(xs[j], 1.0);
            continue;
        }
        const std::size_t l = which + 1;
        const double r = pareto(rs[l - 2], ex5_2_alpha(l));
        const auto theta = laws[l - 2].draw(angles[l - 2], d);
        for (std::size_t j = 0; j < d; ++j) z[j] = r * theta[j];
    }
    return SampleMatrix(spec.n, d, std::move(values));
}

} // namespace

std::string_view to_string(Example example) {
    for (const auto& [e, name] : example_names)
        if (e == example) return name;
    return "sec7_1";
}

Example example_from_string(std::string_view name) {
    for (const auto& [e, n] : example_names)
        if (n == name) return e;
    fail(ErrorCode::UnknownExample, "unknown example '" + std::string(name) + "'");
}

std::vector<double> pareto_sample(double alpha, std::size_t n, std::uint64_t seed) {
    check_alpha(alpha);
    check_n(n);
    Stream s(seed, 0);
    std::vector<double> out(n);
    for (double& x : out) x = pareto(s, alpha);
    return out;
}

data::SampleMatrix polar_sample(double alpha_l, const spectral::SpectralAtoms& atoms,
                                std::size_t n, std::uint64_t seed) {
    check_alpha(alpha_l);
    check_n(n);
    if (atoms.atoms.empty()) fail(ErrorCode::NoAtoms, "polar construction needs atoms");
    std::vector<double> weights;
    for (const auto& a : atoms.atoms) {
        if (a.point.size() != atoms.dim)
            fail(ErrorCode::InvalidArgument, "atom dimension does not match the measure");
        for (double v : a.point) {
            if (std::isinf(v))
                fail(ErrorCode::InfiniteAtom, "atom with an infinite component: R * Theta would not be real-valued");
            if (!(v >= 0.0)) fail(ErrorCode::NegativeValue, "atom components must be >= 0");
        }
        weights.push_back(a.weight);
    }
    const AtomPicker picker(std::move(weights));
    Stream sr(seed, 0), sa(seed, angle_stream);
    const std::size_t d = atoms.dim;
    std::vector<double> values(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = pareto(sr, alpha_l);
        const auto& theta = atoms.atoms[picker.pick(sa)].point;
        for (std::size_t j = 0; j < d; ++j) values[i * d + j] = r * theta[j];
    }
    return SampleMatrix(n, d, std::move(values));
}

double ex5_2_alpha(std::size_t level) {
    if (level < 2) fail(ErrorCode::LevelOutOfRange, "ex5_2 levels start at 2");
    const double l = static_cast<double>(level);
    return l * (l + 1.0) / (2.0 * l + 1.0);
}

spectral::TransformedAtoms ex5_2_default_law(std::size_t dim, std::size_t level) {
    if (level < 2 || level > dim)
        fail(ErrorCode::LevelOutOfRange, "level must lie in [2, d]");
    // Two atoms putting positive mass on exactly the first `level` original
    // coordinates: the barycentre, and (2, 1, ..., 1) / (l + 1).
    const double l = static_cast<double>(level);
    spectral::TransformedAtoms law{level, dim, {}};
    std::vector<double> even(dim - 1, 0.0), skew(dim - 1, 0.0);
    for (std::size_t j = 0; j + 1 < level; ++j) {
        even[j] = 1.0 / l;
        skew[j] = 1.0 / (l + 1.0);
    }
    law.atoms.push_back({0.5, even, false});
    law.atoms.push_back({0.5, skew, false});
    return law;
}

data::SampleMatrix example_dataset(const GeneratorSpec& spec) {
    check_n(spec.n);
    switch (spec.example) {
    case Example::Sec7_1: return sec7_1(spec.n, spec.seed);
    case Example::Ex2_1:
        check_alpha(spec.alpha);
        return iid_pareto(spec.n, spec.dim, spec.alpha, spec.seed);
    case Example::Ex2_2: return ex2_2(spec.n, spec.seed);
    case Example::Ex2_3: return ex2_3(spec.n, spec.seed);
    case Example::Ex2_4: return ex2_4(spec.n, spec.seed);
    case Example::Ex4_1: return ex4_1(spec.n, spec.seed);
    case Example::Ex4_2: return ex4_2(spec.n, spec.seed);
    case Example::Ex4_3: return ex4_3(spec.n, spec.seed);
    case Example::Ex5_2: return ex5_2(spec);
    case Example::Polar:
        if (!spec.polar_atoms) fail(ErrorCode::InvalidArgument, "polar example needs atoms");
        return polar_sample(spec.alpha, *spec.polar_atoms, spec.n, spec.seed);
    }
    fail(ErrorCode::UnknownExample, "unknown example");
}

} // namespace hrvkit::simulate
