#include "hrvkit/serialize.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "hrvkit/error.hpp"

namespace hrvkit::io {

namespace {

json point_json(std::span<const double> point) {
    json arr = json::array();
    for (double v : point) arr.push_back(number(v));
    return arr;
}

double parse_number(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string() && j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    fail(ErrorCode::NonNumeric, "expected a number or \"inf\" in atom JSON");
}

std::string shortest(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

json warnings_json(const std::vector<std::string>& warnings) {
    json arr = json::array();
    for (const auto& w : warnings) arr.push_back(w);
    return arr;
}

} // namespace

json number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return nullptr;
    return x;
}

json to_json(const spectral::SpectralAtoms& atoms) {
    json arr = json::array();
    for (const auto& a : atoms.atoms) arr.push_back({{"weight", a.weight}, {"point", point_json(a.point)}});
    return {{"level", atoms.level}, {"dim", atoms.dim}, {"atoms", std::move(arr)}};
}

json to_json(const spectral::TransformedAtoms& atoms) {
    json arr = json::array();
    for (const auto& a : atoms.atoms) {
        arr.push_back(
            {{"weight", a.weight}, {"point", point_json(a.point)}, {"sentinel", a.sentinel}});
    }
    return {{"level", atoms.level},
            {"dim", atoms.dim},
            {"sentinel_weight", atoms.sentinel_weight()},
            {"atoms", std::move(arr)}};
}

json to_json(const tail::TailFit& fit) {
    return {{"alpha_hat", number(fit.alpha_hat)},
            {"k", fit.k},
            {"method", tail::to_string(fit.method)},
            {"scale_at_k", number(fit.scale_at_k)}};
}

json to_json(const detect::DetectionReport& report) {
    json levels = json::array();
    for (const auto& e : report.levels) {
        json entry{{"level", e.level}, {"visited", e.visited}};
        entry["alpha_hat"] = e.alpha_hat ? to_json(*e.alpha_hat) : json(nullptr);
        entry["spectral"] = e.spectral ? to_json(*e.spectral) : json(nullptr);
        json checks = json::array();
        for (const auto& c : e.checks) {
            checks.push_back({{"p", c.p},
                              {"verdict", detect::to_string(c.verdict)},
                              {"mass_below_epsilon", c.mass_below_epsilon},
                              {"next_cone_mass", c.mass_positive}});
        }
        entry["checks"] = std::move(checks);
        entry["stop_reason"] =
            e.stop_reason ? json(detect::to_string(*e.stop_reason)) : json(nullptr);
        entry["error"] = e.error.empty() ? json(nullptr) : json(e.error);
        levels.push_back(std::move(entry));
    }
    json visited = report.visited_levels();
    json fitted = report.fitted_levels();
    return {{"mode", detect::to_string(report.mode)},
            {"k", report.k},
            {"dim", report.dim},
            {"config",
             {{"epsilon", report.config.epsilon},
              {"cutoff", report.config.cutoff},
              {"alpha_tolerance", report.config.alpha_tolerance}}},
            {"stop_reason", detect::to_string(report.stop_reason)},
            {"visited_levels", std::move(visited)},
            {"fitted_levels", std::move(fitted)},
            {"tied_values", report.tied_values},
            {"levels", std::move(levels)}};
}

json to_json(const finiteness::MassVerdict& verdict) {
    return {{"value", number(verdict.value)},
            {"finite", verdict.finite},
            {"norm", verdict.norm ? json(finiteness::to_string(*verdict.norm)) : json("simplex")},
            {"top_share", verdict.top_share},
            {"warnings", warnings_json(verdict.warnings)}};
}

json to_json(const finiteness::ExponentCheck& check) {
    return {{"exponent", check.exponent},
            {"branch", finiteness::to_string(check.branch)},
            {"warnings", warnings_json(check.warnings)}};
}

json to_json(const risk::RiskEstimate& estimate) {
    json components = json::object();
    for (const auto& [name, value] : estimate.components) components[name] = number(value);
    json diag{{"k", estimate.diagnostics.k},
              {"alpha_hat", estimate.diagnostics.alpha_hat ? number(*estimate.diagnostics.alpha_hat)
                                                           : json(nullptr)},
              {"warnings", warnings_json(estimate.diagnostics.warnings)}};
    diag["exponent"] =
        estimate.diagnostics.exponent ? to_json(*estimate.diagnostics.exponent) : json(nullptr);
    return {{"probability", estimate.probability},
            {"method", risk::to_string(estimate.method)},
            {"components", std::move(components)},
            {"diagnostics", std::move(diag)}};
}

spectral::SpectralAtoms spectral_atoms_from_json(const json& j) {
    try {
        spectral::SpectralAtoms out{j.at("level").get<std::size_t>(), j.at("dim").get<std::size_t>(), {}};
        for (const auto& a : j.at("atoms")) {
            spectral::Atom atom{a.at("weight").get<double>(), {}};
            for (const auto& v : a.at("point")) atom.point.push_back(parse_number(v));
            if (atom.point.size() != out.dim)
                fail(ErrorCode::InvalidArgument, "atom point length differs from dim");
            out.atoms.push_back(std::move(atom));
        }
        return out;
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("malformed atom JSON: ") + e.what());
    }
}

void write_density_csv(std::ostream& out, const spectral::DensityCurve& curve) {
    if (curve.dim == 2) {
        out << "s,density\n";
        for (std::size_t i = 0; i < curve.x.size(); ++i)
            out << shortest(curve.x[i]) << ',' << shortest(curve.values[i]) << '\n';
        return;
    }
    out << "s1,s2,density\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        out << shortest(curve.x[i]) << ',' << shortest(curve.y[i]) << ','
            << shortest(curve.values[i]) << '\n';
    }
}

} // namespace hrvkit::io
