// hrvkit command-line front end.
//
// Exit codes: 0 success, 1 computation error (structured JSON on stderr),
// 2 flag error (usage on stderr).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hrvkit/data_core.hpp"
#include "hrvkit/detect.hpp"
#include "hrvkit/error.hpp"
#include "hrvkit/finiteness.hpp"
#include "hrvkit/kernels.hpp"
#include "hrvkit/risk.hpp"
#include "hrvkit/rng.hpp"
#include "hrvkit/serialize.hpp"
#include "hrvkit/simulate.hpp"
#include "hrvkit/spectral.hpp"
#include "hrvkit/tail_index.hpp"

namespace fs = std::filesystem;
using hrvkit::io::json;
using namespace hrvkit;

namespace {

constexpr const char* version = "0.1.0";

// Raised for flag combinations CLI11 cannot express; reported like a parse
// error (exit 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- options

struct InputOptions {
    std::string path;
    bool no_header = false;
    char delimiter = ',';
};

struct KOptions {
    std::optional<std::size_t> k;
    std::optional<std::size_t> k_min, k_max;
    std::size_t k_step = 1;
};

struct DensityFlags {
    std::optional<double> bandwidth;
    std::size_t grid = 201;
    std::size_t lattice = 60;
};

struct Options {
    bool parallel = false;
    InputOptions input;
    KOptions k;
    DensityFlags density;

    // simulate
    std::string example;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t dim = 3;
    double alpha = 1.0;
    std::string atoms_path;
    std::vector<std::size_t> infinite_levels;

    // shared
    std::string out;
    std::string json_out;
    std::string csv_out;
    std::string density_out;
    std::string density_dir;
    std::string mode = "rank";
    std::size_t level = 1;

    // tail
    std::string method = "hill";
    std::optional<std::size_t> column;
    std::optional<std::size_t> data_level;
    std::optional<std::size_t> rank_level;

    // detect
    double epsilon = 0.05;
    double cutoff = 0.9;
    double alpha_tolerance = 0.1;

    // risk
    std::vector<std::size_t> indices;
    std::vector<double> thresholds;
    std::string risk_method = "semiparam";
    std::vector<double> beta;
    std::string beta_method = "hill";
    std::vector<double> gamma{1.0, 1.0};
    double y = 0.0;
    std::string interior = "exact_radial";

    // finiteness
    std::optional<double> alpha_given;
    std::string norm = "l1";
    std::optional<double> alpha2;
};

void add_input(CLI::App* app, Options& o) {
    app->add_option("input", o.input.path, "CSV file with one observation per row")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_flag("--no-header", o.input.no_header, "the CSV has no header row");
    app->add_option("--delimiter", o.input.delimiter, "field delimiter")->capture_default_str();
}

void add_k(CLI::App* app, Options& o, bool allow_sweep) {
    auto* k = app->add_option("--k", o.k.k, "number of upper order statistics")
                  ->check(CLI::PositiveNumber);
    if (!allow_sweep) {
        k->required();
        return;
    }
    auto* lo = app->add_option("--k-min", o.k.k_min, "first k of a sweep")->check(CLI::PositiveNumber);
    auto* hi = app->add_option("--k-max", o.k.k_max, "last k of a sweep")->check(CLI::PositiveNumber);
    app->add_option("--k-step", o.k.k_step, "step of a sweep")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    k->excludes(lo)->excludes(hi);
    lo->needs(hi);
    hi->needs(lo);
}

void add_density(CLI::App* app, Options& o) {
    app->add_option("--bandwidth", o.density.bandwidth, "KDE bandwidth (default: Silverman rule)")
        ->check(CLI::PositiveNumber);
    app->add_option("--grid", o.density.grid, "grid points on [0, 1] for d = 2")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    app->add_option("--lattice", o.density.lattice, "simplex lattice resolution for d = 3")
        ->check(CLI::Range(1, 2000))
        ->capture_default_str();
}

void add_mode(CLI::App* app, Options& o) {
    app->add_option("--mode", o.mode, "standard or rank")
        ->check(CLI::IsMember({"standard", "rank"}))
        ->capture_default_str();
}

void add_beta(CLI::App* app, Options& o) {
    app->add_option("--beta", o.beta, "fixed marginal tail indices, one per column")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    app->add_option("--beta-method", o.beta_method, "estimator for marginal indices")
        ->check(CLI::IsMember({"hill", "qq", "pickands"}))
        ->capture_default_str();
}

std::vector<std::size_t> k_grid(const KOptions& k) {
    if (k.k) return {*k.k};
    if (!k.k_min) throw UsageError("give --k or --k-min/--k-max");
    if (*k.k_min > *k.k_max) throw UsageError("--k-min must not exceed --k-max");
    std::vector<std::size_t> out;
    for (std::size_t v = *k.k_min; v <= *k.k_max; v += k.k_step) out.push_back(v);
    return out;
}

bool is_sweep(const KOptions& k) { return !k.k.has_value(); }

// ---------------------------------------------------------------- output

std::string shortest(double x) {
    if (std::isnan(x)) return "";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_file(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot write " + path);
    f << text;
    if (!f) fail(ErrorCode::InvalidArgument, "failed writing " + path);
}

void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

// CSV artifacts carry their config in a sidecar <file>.meta.json.
void write_csv_artifact(const std::string& path, const std::string& text, const json& config) {
    write_file(path, text);
    if (!path.empty() && path != "-") write_json(path + ".meta.json", {{"config", config}});
}

data::SampleMatrix load(const InputOptions& in) {
    data::CsvConfig cfg;
    cfg.header = !in.no_header;
    cfg.delimiter = in.delimiter;
    return data::load_csv_file(in.path, cfg);
}

json input_echo(const InputOptions& in, const data::SampleMatrix& s) {
    return {{"path", in.path}, {"header", !in.no_header}, {"rows", s.rows()}, {"cols", s.cols()},
            {"columns", s.names()}};
}

json base_config(const std::string& command, const Options& o) {
    return {{"command", command}, {"hrvkit_version", version}, {"parallel", o.parallel}};
}

json k_echo(const KOptions& k) {
    if (k.k) return {{"k", *k.k}};
    return {{"k_min", *k.k_min}, {"k_max", *k.k_max}, {"k_step", k.k_step}};
}

spectral::DensityOptions density_options(const Options& o) {
    spectral::DensityOptions d;
    d.bandwidth = o.density.bandwidth;
    d.grid_size = o.density.grid;
    d.lattice = o.density.lattice;
    d.parallel = o.parallel;
    return d;
}

json density_echo(const Options& o) {
    return {{"bandwidth", o.density.bandwidth ? json(*o.density.bandwidth) : json("silverman")},
            {"grid", o.density.grid},
            {"lattice", o.density.lattice}};
}

json error_json(const Error& e) {
    return {{"code", to_string(e.code())}, {"message", e.what()}};
}

risk::BetaSource beta_source(const Options& o, std::size_t d) {
    risk::BetaSource b;
    b.method = tail::method_from_string(o.beta_method);
    if (!o.beta.empty()) {
        if (o.beta.size() != d)
            throw UsageError("--beta needs " + std::to_string(d) + " values, one per column");
        b.fixed = o.beta;
    }
    return b;
}

json beta_echo(const Options& o) {
    if (!o.beta.empty()) return {{"fixed", o.beta}};
    return {{"method", o.beta_method}};
}

// Runs f(k) for every k of the grid, in parallel when asked. Results keep
// grid order.
template <class T, class F>
std::vector<T> sweep(const std::vector<std::size_t>& ks, bool parallel, F&& f) {
    std::vector<T> out(ks.size());
    const long count = static_cast<long>(ks.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) if (parallel) num_threads(kernels::thread_count())
#endif
    for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(ks[static_cast<std::size_t>(i)]);
    (void)parallel;
    return out;
}

// ---------------------------------------------------------------- simulate

int run_simulate(const Options& o) {
    const auto example = simulate::example_from_string(o.example);
    simulate::GeneratorSpec spec;
    spec.example = example;
    spec.n = o.n;
    spec.seed = o.seed;
    spec.dim = o.dim;
    spec.alpha = o.alpha;
    spec.infinite_levels = o.infinite_levels;
    json atoms_echo = nullptr;
    if (example == simulate::Example::Polar) {
        if (o.atoms_path.empty()) throw UsageError("--example polar needs --atoms");
        std::ifstream f(o.atoms_path);
        if (!f) fail(ErrorCode::InvalidArgument, "cannot open " + o.atoms_path);
        json j;
        try {
            j = json::parse(f);
        } catch (const json::exception& e) {
            fail(ErrorCode::InvalidArgument, std::string("malformed atom JSON: ") + e.what());
        }
        spec.polar_atoms = io::spectral_atoms_from_json(j);
        atoms_echo = io::to_json(*spec.polar_atoms);
    }
    const auto sample = simulate::example_dataset(spec);
    std::ostringstream csv;
    data::write_csv(csv, sample);
    write_file(o.out, csv.str());

    json config = base_config("simulate", o);
    config["example"] = o.example;
    config["n"] = o.n;
    config["seed"] = o.seed;
    if (example == simulate::Example::Ex2_1 || example == simulate::Example::Ex5_2)
        config["dim"] = o.dim;
    if (example == simulate::Example::Ex2_1 || example == simulate::Example::Polar)
        config["alpha"] = o.alpha;
    if (example == simulate::Example::Ex5_2) config["infinite_levels"] = o.infinite_levels;
    if (example == simulate::Example::Polar) config["atoms"] = atoms_echo;
    config["out"] = o.out;
    const json meta{{"config", config},
                    {"generator_version", simulate::generator_version},
                    {"rng", simulate::Stream::algorithm},
                    {"rows", sample.rows()},
                    {"cols", sample.cols()}};
    if (!o.out.empty() && o.out != "-") write_json(o.out + ".meta.json", meta);
    return 0;
}

// ---------------------------------------------------------------- tail

int run_tail(const Options& o) {
    const auto sample = load(o.input);
    const int sources = o.column.has_value() + o.data_level.has_value() + o.rank_level.has_value();
    if (sources > 1) throw UsageError("give at most one of --column, --level, --rank-level");
    std::vector<double> values;
    json source;
    if (o.column) {
        if (*o.column > sample.cols()) throw UsageError("--column exceeds the number of columns");
        values = sample.column(*o.column - 1);
        source = {{"column", *o.column}};
    } else if (o.rank_level) {
        if (*o.rank_level > sample.cols()) throw UsageError("--rank-level exceeds d");
        values = data::rank_transform(sample, *o.rank_level).m;
        source = {{"rank_level", *o.rank_level}};
    } else {
        const std::size_t l = o.data_level.value_or(1);
        if (l > sample.cols()) throw UsageError("--level exceeds d");
        values = data::level_values(sample, l);
        source = {{"level", l}};
    }
    const auto ks = k_grid(o.k);
    const auto method = tail::method_from_string(o.method);

    std::vector<tail::SeriesPoint> points;
    if (method == tail::Method::Hill) {
        if (ks.back() < ks.front()) throw UsageError("empty k grid");
        const auto all = tail::hill_series(values, ks.front(), ks.back(), o.parallel);
        for (const auto& p : all)
            if ((p.k - ks.front()) % o.k.k_step == 0) points.push_back(p);
    } else {
        points = sweep<tail::SeriesPoint>(ks, o.parallel, [&](std::size_t k) {
            tail::SeriesPoint p{k, std::nullopt, std::nullopt};
            try {
                p.fit = tail::alt_tail_estimate(values, k, method);
            } catch (const Error& e) {
                p.error = e.code();
            }
            return p;
        });
    }
    std::ostringstream csv;
    csv << "k,alpha_hat,scale_at_k,status\n";
    for (const auto& p : points) {
        csv << p.k << ',';
        if (p.fit)
            csv << shortest(p.fit->alpha_hat) << ',' << shortest(p.fit->scale_at_k) << ",ok\n";
        else
            csv << ",," << to_string(*p.error) << '\n';
    }
    json config = base_config("tail", o);
    config["input"] = input_echo(o.input, sample);
    config["method"] = o.method;
    config["source"] = source;
    config["k"] = k_echo(o.k);
    write_csv_artifact(o.out, csv.str(), config);
    return 0;
}

// ---------------------------------------------------------------- detect

detect::SearchConfig search_config(const Options& o) {
    return {o.epsilon, o.cutoff, o.alpha_tolerance};
}

json detect_summary(const detect::DetectionReport& r) {
    json levels = json::array();
    for (const auto& e : r.levels) {
        if (!e.visited) continue;
        json checks = json::array();
        for (const auto& c : e.checks)
            checks.push_back({{"p", c.p},
                              {"verdict", detect::to_string(c.verdict)},
                              {"mass_below_epsilon", c.mass_below_epsilon}});
        levels.push_back({{"level", e.level},
                          {"alpha_hat", e.alpha_hat ? io::number(e.alpha_hat->alpha_hat) : json(nullptr)},
                          {"checks", std::move(checks)}});
    }
    return {{"k", r.k},
            {"stop_reason", detect::to_string(r.stop_reason)},
            {"visited_levels", r.visited_levels()},
            {"fitted_levels", r.fitted_levels()},
            {"levels", std::move(levels)}};
}

// Writes the per-level density CSVs the degeneracy rule summarizes.
json write_detection_densities(const detect::DetectionReport& r, const Options& o) {
    json files = json::array();
    if (o.density_dir.empty()) return files;
    fs::create_directories(o.density_dir);
    const auto opts = density_options(o);
    auto emit = [&](json entry, const std::string& name, auto&& compute) {
        const std::string path = (fs::path(o.density_dir) / name).string();
        try {
            const auto curve = compute();
            std::ostringstream csv;
            io::write_density_csv(csv, curve);
            write_file(path, csv.str());
            entry["file"] = name;
            entry["bandwidth"] = curve.bandwidth;
            entry["excluded_mass"] = curve.excluded_mass;
            entry["error"] = nullptr;
        } catch (const Error& e) {
            entry["file"] = nullptr;
            entry["error"] = error_json(e);
        }
        files.push_back(std::move(entry));
    };
    for (const auto& e : r.levels) {
        if (!e.spectral) continue;
        const auto& atoms = *e.spectral;
        for (const auto& c : e.checks) {
            emit({{"level", e.level}, {"kind", "pushforward"}, {"p", c.p}},
                 "level" + std::to_string(e.level) + "_p" + std::to_string(c.p) + ".csv", [&] {
                     std::vector<double> w, v;
                     for (const auto& s : detect::pushforward_M(atoms, c.p)) {
                         w.push_back(s.weight);
                         v.push_back(s.value);
                     }
                     return spectral::density_estimate_interval(w, v, opts);
                 });
        }
        if (atoms.dim == 2 || atoms.dim == 3) {
            emit({{"level", e.level}, {"kind", "transformed"}, {"p", nullptr}},
                 "level" + std::to_string(e.level) + "_transformed.csv", [&] {
                     return spectral::density_estimate(spectral::transform_measure(atoms), opts);
                 });
        }
    }
    return files;
}

int run_detect(const Options& o) {
    const auto sample = load(o.input);
    const auto mode = detect::mode_from_string(o.mode);
    const auto cfg = search_config(o);
    const auto ks = k_grid(o.k);

    json config = base_config("detect", o);
    config["input"] = input_echo(o.input, sample);
    config["mode"] = o.mode;
    config["k"] = k_echo(o.k);
    config["epsilon"] = o.epsilon;
    config["cutoff"] = o.cutoff;
    config["alpha_tolerance"] = o.alpha_tolerance;
    config["density"] = density_echo(o);
    config["density_dir"] = o.density_dir.empty() ? json(nullptr) : json(o.density_dir);

    if (!is_sweep(o.k)) {
        const auto report = detect::sequential_hrv_search(sample, mode, ks.front(), cfg);
        json out{{"config", config}, {"report", io::to_json(report)}};
        out["densities"] = write_detection_densities(report, o);
        write_json(o.json_out, out);
        return 0;
    }

    struct Entry {
        std::optional<detect::DetectionReport> report;
        std::optional<Error> error;
    };
    const auto entries = sweep<Entry>(ks, o.parallel, [&](std::size_t k) {
        Entry e;
        try {
            e.report = detect::sequential_hrv_search(sample, mode, k, cfg);
        } catch (const Error& err) {
            e.error = err;
        }
        return e;
    });
    json rows = json::array();
    std::map<std::string, std::size_t> stability;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (entries[i].error) {
            rows.push_back({{"k", ks[i]}, {"error", error_json(*entries[i].error)}});
            continue;
        }
        const auto& r = *entries[i].report;
        json s = detect_summary(r);
        s["error"] = nullptr;
        rows.push_back(std::move(s));
        std::string key;
        for (auto l : r.visited_levels()) key += (key.empty() ? "" : ",") + std::to_string(l);
        ++stability[key];
    }
    json stab = json::array();
    for (const auto& [key, count] : stability)
        stab.push_back({{"visited_levels", key}, {"count", count}});
    write_json(o.json_out, {{"config", config}, {"sweep", std::move(rows)}, {"stability", std::move(stab)}});
    return 0;
}

// ---------------------------------------------------------------- spectral

int run_spectral(const Options& o) {
    const auto sample = load(o.input);
    if (o.level > sample.cols()) throw UsageError("--level exceeds d");
    const auto mode = detect::mode_from_string(o.mode);
    const std::size_t k = *o.k.k;
    const auto atoms = mode == detect::Mode::Standard
                           ? spectral::estimate_spectral_standard(sample, o.level, k)
                           : spectral::estimate_spectral_rank(sample, o.level, k);
    const auto transformed = spectral::transform_measure(atoms);

    json config = base_config("spectral", o);
    config["input"] = input_echo(o.input, sample);
    config["mode"] = o.mode;
    config["level"] = o.level;
    config["k"] = k;
    config["density"] = density_echo(o);
    config["density_out"] = o.density_out.empty() ? json(nullptr) : json(o.density_out);

    json out{{"config", config},
             {"atoms", io::to_json(atoms)},
             {"transformed", io::to_json(transformed)},
             {"sentinel_count", transformed.sentinel_count()},
             {"density", nullptr}};
    if (!o.density_out.empty()) {
        try {
            const auto curve = spectral::density_estimate(transformed, density_options(o));
            std::ostringstream csv;
            io::write_density_csv(csv, curve);
            write_csv_artifact(o.density_out, csv.str(), config);
            out["density"] = {{"bandwidth", curve.bandwidth},
                              {"excluded_mass", curve.excluded_mass},
                              {"integral", curve.integral()}};
        } catch (const Error& e) {
            out["density"] = {{"error", error_json(e)}};
        }
    }
    write_json(o.json_out, out);
    return 0;
}

// ---------------------------------------------------------------- risk

template <class F>
int run_risk_common(const Options& o, json config,
                    const std::vector<std::size_t>& ks, F&& estimate) {
    config["k"] = k_echo(o.k);
    if (!is_sweep(o.k)) {
        const auto est = estimate(ks.front());
        write_json(o.json_out, {{"config", config}, {"estimate", io::to_json(est)}});
        return 0;
    }
    struct Entry {
        std::optional<risk::RiskEstimate> est;
        std::optional<Error> error;
    };
    const auto entries = sweep<Entry>(ks, o.parallel, [&](std::size_t k) {
        Entry e;
        try {
            e.est = estimate(k);
        } catch (const Error& err) {
            e.error = err;
        }
        return e;
    });
    json list = json::array();
    std::ostringstream csv;
    csv << "k,probability,method,status\n";
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (entries[i].error) {
            list.push_back({{"k", ks[i]}, {"error", error_json(*entries[i].error)}});
            csv << ks[i] << ",,," << to_string(entries[i].error->code()) << '\n';
        } else {
            list.push_back({{"k", ks[i]}, {"estimate", io::to_json(*entries[i].est)}});
            csv << ks[i] << ',' << shortest(entries[i].est->probability) << ','
                << risk::to_string(entries[i].est->method) << ",ok\n";
        }
    }
    if (!o.csv_out.empty()) write_csv_artifact(o.csv_out, csv.str(), config);
    write_json(o.json_out, {{"config", config}, {"sweep", std::move(list)}});
    return 0;
}

int run_risk_joint(const Options& o) {
    const auto sample = load(o.input);
    const std::size_t d = sample.cols();
    std::vector<std::size_t> idx;
    if (o.indices.empty()) {
        for (std::size_t j = 0; j < d; ++j) idx.push_back(j);
    } else {
        for (auto i : o.indices) {
            if (i < 1 || i > d) throw UsageError("--indices are 1-based column numbers in [1, d]");
            idx.push_back(i - 1);
        }
    }
    if (o.thresholds.size() != idx.size())
        throw UsageError("--thresholds needs one value per queried column");
    const auto beta = beta_source(o, d);
    const auto mode = detect::mode_from_string(o.mode);
    const bool hr = o.risk_method == "rank_empirical";

    json config = base_config("risk joint", o);
    config["input"] = input_echo(o.input, sample);
    config["indices"] = o.indices.empty() ? json(nullptr) : json(o.indices);
    config["thresholds"] = o.thresholds;
    config["method"] = o.risk_method;
    config["mode"] = hr ? json(nullptr) : json(o.mode);
    config["beta"] = beta_echo(o);
    config["csv"] = o.csv_out.empty() ? json(nullptr) : json(o.csv_out);
    return run_risk_common(o, config, k_grid(o.k), [&](std::size_t k) {
        return hr ? risk::joint_exceedance_hr(sample, idx, o.thresholds, k, beta)
                  : risk::joint_exceedance(sample, idx, o.thresholds, k, mode, beta);
    });
}

int run_risk_noncompliance(const Options& o) {
    const auto sample = load(o.input);
    if (o.thresholds.size() != sample.cols())
        throw UsageError("--thresholds needs one value per column");
    const auto beta = beta_source(o, sample.cols());
    const auto mode = detect::mode_from_string(o.mode);
    const auto cfg = search_config(o);

    json config = base_config("risk noncompliance", o);
    config["input"] = input_echo(o.input, sample);
    config["thresholds"] = o.thresholds;
    config["mode"] = o.mode;
    config["beta"] = beta_echo(o);
    config["epsilon"] = o.epsilon;
    config["cutoff"] = o.cutoff;
    config["alpha_tolerance"] = o.alpha_tolerance;
    config["csv"] = o.csv_out.empty() ? json(nullptr) : json(o.csv_out);
    return run_risk_common(o, config, k_grid(o.k), [&](std::size_t k) {
        const auto report = detect::sequential_hrv_search(sample, mode, k, cfg);
        auto est = risk::noncompliance_probability(sample, o.thresholds, report, k, beta);
        std::string levels;
        for (auto l : report.fitted_levels()) levels += (levels.empty() ? "" : ",") + std::to_string(l);
        est.diagnostics.warnings.insert(est.diagnostics.warnings.begin(),
                                        "detection fitted levels {" + levels + "}, stop reason " +
                                            std::string(detect::to_string(report.stop_reason)));
        return est;
    });
}

int run_risk_linear(const Options& o) {
    const auto sample = load(o.input);
    if (sample.cols() != 2) fail(ErrorCode::InvalidArgument, "risk linear needs a two-column sample");
    if (o.gamma.size() != 2) throw UsageError("--gamma needs two values");
    risk::LinearOptions opts;
    opts.beta = beta_source(o, 2);
    opts.interior = risk::interior_method_from_string(o.interior);

    json config = base_config("risk linear", o);
    config["input"] = input_echo(o.input, sample);
    config["gamma"] = o.gamma;
    config["y"] = o.y;
    config["interior"] = o.interior;
    config["beta"] = beta_echo(o);
    config["csv"] = o.csv_out.empty() ? json(nullptr) : json(o.csv_out);
    return run_risk_common(o, config, k_grid(o.k), [&](std::size_t k) {
        return risk::linear_combination_risk(sample, {o.gamma[0], o.gamma[1]}, o.y, k, opts);
    });
}

// ---------------------------------------------------------------- finiteness

int run_finiteness(const Options& o) {
    json config = base_config("finiteness", o);
    spectral::SpectralAtoms atoms;
    std::optional<double> alpha = o.alpha_given;
    json alpha_source = alpha ? json("given") : json(nullptr);
    if (!o.atoms_path.empty()) {
        if (!o.input.path.empty()) throw UsageError("give either an input CSV or --atoms, not both");
        if (!alpha) throw UsageError("--atoms needs --alpha");
        std::ifstream f(o.atoms_path);
        if (!f) fail(ErrorCode::InvalidArgument, "cannot open " + o.atoms_path);
        json j;
        try {
            j = json::parse(f);
        } catch (const json::exception& e) {
            fail(ErrorCode::InvalidArgument, std::string("malformed atom JSON: ") + e.what());
        }
        // Accept the output of `hrvkit spectral` as well as bare atoms.
        atoms = io::spectral_atoms_from_json(j.contains("atoms") && j["atoms"].is_object() ? j["atoms"] : j);
        config["atoms"] = o.atoms_path;
    } else {
        if (o.input.path.empty()) throw UsageError("give an input CSV or --atoms");
        if (!o.k.k) throw UsageError("--k is required with an input CSV");
        InputOptions in = o.input;
        const auto sample = load(in);
        if (o.level > sample.cols()) throw UsageError("--level exceeds d");
        const auto mode = detect::mode_from_string(o.mode);
        const std::size_t k = *o.k.k;
        if (mode == detect::Mode::Standard) {
            atoms = spectral::estimate_spectral_standard(sample, o.level, k);
            if (!alpha) alpha = tail::hill_estimate(data::level_values(sample, o.level), k).alpha_hat;
        } else {
            const auto ranks = data::anti_ranks(sample);
            atoms = spectral::estimate_spectral_rank(ranks, o.level, k);
            if (!alpha) alpha = tail::hill_estimate(data::rank_level_values(ranks, o.level), k).alpha_hat;
        }
        if (alpha_source.is_null()) alpha_source = "hill";
        config["input"] = input_echo(o.input, sample);
        config["mode"] = o.mode;
        config["level"] = o.level;
        config["k"] = k;
    }
    config["norm"] = o.norm;
    config["alpha"] = alpha_source;

    const auto norm = finiteness::norm_from_string(o.norm);
    json out{{"config", config},
             {"level", atoms.level},
             {"alpha", *alpha},
             {"moment_mass", io::to_json(finiteness::moment_mass(atoms, *alpha, norm))},
             {"moment_mass_simplex",
              io::to_json(finiteness::moment_mass_simplex(spectral::transform_measure(atoms), *alpha,
                                                          atoms.level))}};
    if (!o.beta.empty()) {
        if (o.beta.size() != 2) throw UsageError("--beta needs two values for the interior check");
        const double a2 = o.alpha2.value_or(*alpha);
        const bool use_atoms = atoms.dim == 2 && atoms.level == 2;
        out["interior_exponent"] = io::to_json(finiteness::interior_exponent_check(
            {o.beta[0], o.beta[1]}, a2, use_atoms ? &atoms : nullptr));
        out["config"]["beta"] = o.beta;
        out["config"]["alpha2"] = a2;
    } else {
        out["interior_exponent"] = nullptr;
    }
    write_json(o.json_out, out);
    return 0;
}

// ---------------------------------------------------------------- main

CLI::App* deepest(CLI::App* app) {
    for (auto* sub : app->get_subcommands()) return deepest(sub);
    return app;
}

} // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"hrvkit: detect hidden regular variation and estimate joint tail risk"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);
    app.add_flag("--parallel", o.parallel,
                 "use OpenMP kernels and parallel k-sweeps (HRVKIT_THREADS caps threads)");

    auto* sim = app.add_subcommand("simulate", "generate a named example as CSV plus a metadata sidecar");
    sim->add_option("--example", o.example, "example name")
        ->required()
        ->check(CLI::IsMember({"sec7_1", "ex2_1", "ex2_2", "ex2_3", "ex2_4", "ex4_1", "ex4_2",
                               "ex4_3", "ex5_2", "polar"}));
    sim->add_option("--n", o.n, "sample size")->required()->check(CLI::PositiveNumber);
    sim->add_option("--seed", o.seed, "64-bit seed")->capture_default_str();
    sim->add_option("--dim", o.dim, "dimension for ex2_1 and ex5_2")
        ->check(CLI::Range(2, 64))
        ->capture_default_str();
    sim->add_option("--alpha", o.alpha, "Pareto index for ex2_1, radial index for polar")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sim->add_option("--atoms", o.atoms_path, "spectral atoms JSON for polar")->check(CLI::ExistingFile);
    sim->add_option("--infinite-levels", o.infinite_levels, "ex5_2 levels with a diverging moment")
        ->delimiter(',');
    sim->add_option("--out", o.out, "output CSV (default stdout)");

    auto* tl = app.add_subcommand("tail", "tail-index series over a k grid as CSV");
    add_input(tl, o);
    add_k(tl, o, true);
    tl->add_option("--method", o.method, "hill, qq or pickands")
        ->check(CLI::IsMember({"hill", "qq", "pickands"}))
        ->capture_default_str();
    tl->add_option("--column", o.column, "use column j (1-based)")->check(CLI::PositiveNumber);
    tl->add_option("--level", o.data_level, "use per-row l-th largest values (default 1)")
        ->check(CLI::PositiveNumber);
    tl->add_option("--rank-level", o.rank_level, "use the rank transform m^(l)")
        ->check(CLI::PositiveNumber);
    tl->add_option("--out", o.out, "output CSV (default stdout)");

    auto* det = app.add_subcommand("detect", "sequential search for hidden regular variation");
    add_input(det, o);
    add_k(det, o, true);
    add_mode(det, o);
    det->add_option("--epsilon", o.epsilon, "values at or below epsilon count as zero")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    det->add_option("--cutoff", o.cutoff, "mass near zero needed for a degenerate verdict")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    det->add_option("--alpha-tolerance", o.alpha_tolerance, "allowed decrease of alpha between levels")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    det->add_option("--json", o.json_out, "report path (default stdout)");
    det->add_option("--density-dir", o.density_dir, "directory for density CSVs (single k only)");
    add_density(det, o);

    auto* spec = app.add_subcommand("spectral", "hidden spectral measure estimate at one level");
    add_input(spec, o);
    add_k(spec, o, false);
    add_mode(spec, o);
    spec->add_option("--level", o.level, "level l")->check(CLI::PositiveNumber)->capture_default_str();
    spec->add_option("--json", o.json_out, "atoms JSON path (default stdout)");
    spec->add_option("--density", o.density_out, "density CSV of the transformed measure (d = 2, 3)");
    add_density(spec, o);

    auto* rk = app.add_subcommand("risk", "tail-risk probabilities");
    rk->require_subcommand(1);
    auto* joint = rk->add_subcommand("joint", "P[Z^i > t^i for every queried i]");
    add_input(joint, o);
    add_k(joint, o, true);
    add_mode(joint, o);
    add_beta(joint, o);
    joint->add_option("--indices", o.indices, "1-based columns (default all)")->delimiter(',');
    joint->add_option("--thresholds", o.thresholds, "one threshold per queried column")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    joint->add_option("--method", o.risk_method, "semiparam or rank_empirical")
        ->check(CLI::IsMember({"semiparam", "rank_empirical"}))
        ->capture_default_str();
    joint->add_option("--json", o.json_out, "estimate JSON (default stdout)");
    joint->add_option("--csv", o.csv_out, "k-sweep CSV");

    auto* nc = rk->add_subcommand("noncompliance", "P[Z^i > t^i for some i]");
    add_input(nc, o);
    add_k(nc, o, true);
    add_mode(nc, o);
    add_beta(nc, o);
    nc->add_option("--thresholds", o.thresholds, "one threshold per column")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    nc->add_option("--epsilon", o.epsilon, "detection epsilon")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    nc->add_option("--cutoff", o.cutoff, "detection cutoff")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    nc->add_option("--alpha-tolerance", o.alpha_tolerance, "detection alpha tolerance")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    nc->add_option("--json", o.json_out, "estimate JSON (default stdout)");
    nc->add_option("--csv", o.csv_out, "k-sweep CSV");

    auto* lin = rk->add_subcommand("linear", "P[gamma1 Z^1 + gamma2 Z^2 > y] for d = 2");
    add_input(lin, o);
    add_k(lin, o, true);
    add_beta(lin, o);
    lin->add_option("--gamma", o.gamma, "positive weights")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    lin->add_option("--y", o.y, "level")->required()->check(CLI::PositiveNumber);
    lin->add_option("--interior", o.interior, "exact_radial or closed_form")
        ->check(CLI::IsMember({"exact_radial", "closed_form"}))
        ->capture_default_str();
    lin->add_option("--json", o.json_out, "estimate JSON (default stdout)");
    lin->add_option("--csv", o.csv_out, "k-sweep CSV");

    auto* fin = app.add_subcommand("finiteness", "moment-condition check of a spectral estimate");
    fin->add_option("input", o.input.path, "CSV sample (or use --atoms)")->check(CLI::ExistingFile);
    fin->add_flag("--no-header", o.input.no_header, "the CSV has no header row");
    fin->add_option("--delimiter", o.input.delimiter, "field delimiter")->capture_default_str();
    fin->add_option("--atoms", o.atoms_path, "atoms JSON (bare or `spectral` output)")
        ->check(CLI::ExistingFile);
    fin->add_option("--k", o.k.k, "number of upper order statistics")->check(CLI::PositiveNumber);
    add_mode(fin, o);
    fin->add_option("--level", o.level, "level l")->check(CLI::PositiveNumber)->capture_default_str();
    fin->add_option("--alpha", o.alpha_given, "tail index (default: Hill at k)")
        ->check(CLI::PositiveNumber);
    fin->add_option("--norm", o.norm, "l1, l2 or linf")
        ->check(CLI::IsMember({"l1", "l2", "linf"}))
        ->capture_default_str();
    fin->add_option("--beta", o.beta, "marginal indices for the interior exponent check")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    fin->add_option("--alpha2", o.alpha2, "alpha^(2) for the interior check (default --alpha)")
        ->check(CLI::PositiveNumber);
    fin->add_option("--json", o.json_out, "verdict JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n\n" << deepest(&app)->help();
        return 2;
    }

    if (o.parallel)
        kernels::set_thread_cap(0);
    else
        kernels::set_thread_cap(1);

    try {
        if (sim->parsed()) return run_simulate(o);
        if (tl->parsed()) return run_tail(o);
        if (det->parsed()) return run_detect(o);
        if (spec->parsed()) return run_spectral(o);
        if (joint->parsed()) return run_risk_joint(o);
        if (nc->parsed()) return run_risk_noncompliance(o);
        if (lin->parsed()) return run_risk_linear(o);
        if (fin->parsed()) return run_finiteness(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << deepest(&app)->help();
        return 2;
    } catch (const Error& e) {
        std::cerr << json{{"error", error_json(e)}}.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"code", "InternalError"}, {"message", e.what()}}}}.dump(2)
                  << "\n";
        return 1;
    }
    return 2;
}
