#include <cmath>
#include <string>

#include "hrvkit/error.hpp"
#include "hrvkit/kernels.hpp"
#include "hrvkit/spectral.hpp"

namespace hrvkit::spectral {

namespace {

struct WeightedStats {
    double mean;
    double variance;
    double n_eff;
};

WeightedStats weighted_stats(std::span<const double> weights, std::span<const double> values) {
    double wsum = 0.0, w2sum = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        wsum += weights[i];
        w2sum += weights[i] * weights[i];
        mean += weights[i] * values[i];
    }
    mean /= wsum;
    double var = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        var += weights[i] * (values[i] - mean) * (values[i] - mean);
    var /= wsum;
    return {mean, var, wsum * wsum / w2sum};
}

double resolve_bandwidth(const DensityOptions& options, double sigma, double n_eff) {
    if (options.bandwidth) {
        if (!(*options.bandwidth > 0.0) || !std::isfinite(*options.bandwidth))
            fail(ErrorCode::BadBandwidth, "bandwidth must be positive and finite");
        return *options.bandwidth;
    }
    const double h = 1.06 * sigma * std::pow(n_eff, -0.2);
    if (!(h > 0.0)) {
        fail(ErrorCode::BadBandwidth,
             "automatic bandwidth is zero (atoms have no spread); pass an explicit bandwidth");
    }
    return h;
}

DensityCurve interval_curve(std::vector<kernels::KernelAtom> atoms, double sigma, double n_eff,
                            const DensityOptions& options) {
    if (options.grid_size < 2) fail(ErrorCode::InvalidArgument, "grid_size must be at least 2");
    DensityCurve curve{2, {}, {}, {}, resolve_bandwidth(options, sigma, n_eff)};
    curve.x.resize(options.grid_size);
    for (std::size_t g = 0; g < options.grid_size; ++g)
        curve.x[g] = static_cast<double>(g) / static_cast<double>(options.grid_size - 1);
    curve.values = options.parallel ? kernels::omp::kde_interval(atoms, curve.bandwidth, curve.x)
                                    : kernels::serial::kde_interval(atoms, curve.bandwidth, curve.x);
    return curve;
}

} // namespace

double silverman_bandwidth(std::span<const double> weights, std::span<const double> values) {
    if (weights.empty() || weights.size() != values.size())
        fail(ErrorCode::NoMass, "no atoms for bandwidth selection");
    const auto st = weighted_stats(weights, values);
    return 1.06 * std::sqrt(st.variance) * std::pow(st.n_eff, -0.2);
}

DensityCurve density_estimate_interval(std::span<const double> weights,
                                       std::span<const double> values,
                                       const DensityOptions& options) {
    if (weights.size() != values.size())
        fail(ErrorCode::InvalidArgument, "weights and values differ in length");
    double total = 0.0;
    for (double w : weights) total += w;
    if (weights.empty() || !(total > 0.0)) fail(ErrorCode::NoMass, "no mass to smooth");
    std::vector<kernels::KernelAtom> atoms;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < -1e-12 || values[i] > 1.0 + 1e-12)
            fail(ErrorCode::InvalidArgument, "interval density values must lie in [0, 1]");
        atoms.push_back({weights[i] / total, values[i]});
    }
    const auto st = weighted_stats(weights, values);
    return interval_curve(std::move(atoms), std::sqrt(st.variance), st.n_eff, options);
}

DensityCurve density_estimate(const TransformedAtoms& atoms, const DensityOptions& options) {
    if (atoms.dim != 2 && atoms.dim != 3) {
        fail(ErrorCode::InvalidArgument,
             "densities are only plotted for d = 2 or 3, got d = " + std::to_string(atoms.dim));
    }
    double total = 0.0, excluded = 0.0;
    for (const auto& a : atoms.atoms) (a.sentinel ? excluded : total) += a.weight;
    if (!(total > 0.0)) fail(ErrorCode::NoMass, "no finite (non-sentinel) atoms to smooth");

    std::vector<double> weights, xs, ys;
    for (const auto& a : atoms.atoms) {
        if (a.sentinel) continue;
        weights.push_back(a.weight / total);
        xs.push_back(a.point[0]);
        ys.push_back(atoms.dim == 3 ? a.point[1] : 0.0);
    }

    if (atoms.dim == 2) {
        std::vector<kernels::KernelAtom> ka;
        for (std::size_t i = 0; i < xs.size(); ++i) ka.push_back({weights[i], xs[i]});
        const auto st = weighted_stats(weights, xs);
        auto curve = interval_curve(std::move(ka), std::sqrt(st.variance), st.n_eff, options);
        curve.excluded_mass = excluded;
        return curve;
    }

    const auto sx = weighted_stats(weights, xs);
    const auto sy = weighted_stats(weights, ys);
    const double sigma = std::sqrt(0.5 * (sx.variance + sy.variance));
    DensityCurve curve{3, {}, {}, {}, resolve_bandwidth(options, sigma, sx.n_eff)};
    const std::size_t g = options.lattice;
    if (g < 1) fail(ErrorCode::InvalidArgument, "lattice resolution must be at least 1");
    curve.lattice = g;
    for (std::size_t i = 0; i <= g; ++i) {
        for (std::size_t j = 0; i + j <= g; ++j) {
            curve.x.push_back(static_cast<double>(i) / static_cast<double>(g));
            curve.y.push_back(static_cast<double>(j) / static_cast<double>(g));
        }
    }
    std::vector<kernels::KernelAtom> ka;
    for (std::size_t i = 0; i < xs.size(); ++i) ka.push_back({weights[i], xs[i], ys[i]});
    curve.values = options.parallel
                       ? kernels::omp::kde_simplex(ka, curve.bandwidth, curve.x, curve.y)
                       : kernels::serial::kde_simplex(ka, curve.bandwidth, curve.x, curve.y);
    curve.excluded_mass = excluded;
    return curve;
}

} // namespace hrvkit::spectral
