#pragma once
//
// Flat key-value experiment configuration. Grammar: one `section.key = value`
// per line, `#` starts a comment, blank lines ignored. Unknown keys are
// errors; duplicate keys are errors citing both line numbers; validation
// reports every violation, not just the first.
//

#include <fstream>
#include <map>
#include <sstream>

#include "cnsf/admissibility.hpp"
#include "cnsf/analytic_data.hpp"
#include "cnsf/initial_data.hpp"
#include "cnsf/integrator.hpp"
#include "cnsf/quadrature.hpp"

namespace cnsf {

struct ConfigError : std::runtime_error {
    std::vector<std::string> problems;
    explicit ConfigError(std::vector<std::string> list)
        : std::runtime_error(join(list)), problems(std::move(list)) {}

    static std::string join(const std::vector<std::string>& list) {
        std::string out = "configuration invalid:";
        for (const auto& p : list) out += "\n  - " + p;
        return out;
    }
};

struct ExperimentConfig {
    std::size_t grid_n = 32;
    double box_length = 2.0 * pi;
    double omega = 10.0;
    double dt = 1e-3;
    double t_end = 1.0;
    std::size_t snapshot_stride = 100;
    std::string scheme = "etd2rk";
    bool linear_only = false;

    std::string data_kind = "gaussian-divfree";
    std::uint64_t seed = 1;
    double amplitude = 0.2;
    double length_scale = 0.0; // 0: generator default L/16
    double sobolev_index = 0.7;

    std::vector<std::pair<double, double>> norms = {{0.0, 2.0}, {1.0, 2.0}};

    double fit_t_lo = 10.0;
    double fit_t_hi = 1000.0;
    std::size_t fit_samples = 24;

    int quad_radial = 128;
    int quad_polar = 64;
    int quad_azimuthal = 64;
    double quad_tolerance = 1e-6;

    // Whole-space experiment knobs.
    std::string datum_family = "projected-gaussian";
    double datum_length_scale = 0.02;
    int block = 0;
    double exp_p = 2.0; // experiment exponent (inf allowed via "inf")
    double exp_m = 0.0;

    std::string output_dir = "out";

    IntegratorConfig integrator_config() const {
        IntegratorConfig c;
        c.scheme = scheme_from_string(scheme);
        c.dt = dt;
        c.t_end = t_end;
        c.snapshot_stride = snapshot_stride;
        c.norm_schedule = norms;
        c.linear_only = linear_only;
        return c;
    }

    InitialDataSpec data_spec() const {
        InitialDataSpec s;
        s.kind = data_kind_from_string(data_kind);
        s.seed = seed;
        s.amplitude = amplitude;
        s.length_scale = length_scale;
        s.sobolev_index = sobolev_index;
        return s;
    }

    QuadratureSpec quadrature_spec() const {
        QuadratureSpec q;
        q.radial = quad_radial;
        q.polar = quad_polar;
        q.azimuthal = quad_azimuthal;
        q.tolerance = quad_tolerance;
        return q;
    }

    AnalyticDatum analytic_datum() const {
        AnalyticDatum d;
        d.family = analytic_family_from_string(datum_family);
        d.length_scale = datum_length_scale;
        d.block = block;
        return d;
    }
};

namespace detail {

inline double parse_p(const std::string& v) {
    if (v == "inf" || v == "infinity") return p_infinity;
    return std::stod(v);
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
    std::vector<std::string> problems;
    std::map<std::string, std::pair<std::string, int>> kv; // key -> (value, line)

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = line.substr(0, line.find('#'));
        stripped = detail::trim(stripped);
        if (stripped.empty()) continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) +
                               ": expected 'section.key = value'");
            continue;
        }
        std::string key = detail::trim(stripped.substr(0, eq));
        std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            problems.push_back("line " + std::to_string(lineno) + ": empty key or value");
            continue;
        }
        auto it = kv.find(key);
        if (it != kv.end()) {
            problems.push_back("duplicate key '" + key + "' at lines " +
                               std::to_string(it->second.second) + " and " +
                               std::to_string(lineno));
            continue;
        }
        kv[key] = {value, lineno};
    }

    ExperimentConfig cfg;
    auto take = [&](const std::string& key, auto parse, auto& slot) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        try {
            slot = parse(it->second.first);
        } catch (const std::exception&) {
            problems.push_back("line " + std::to_string(it->second.second) + ": key '" + key +
                               "' has a malformed value '" + it->second.first + "'");
        }
        kv.erase(it);
    };
    auto as_size = [](const std::string& v) { return static_cast<std::size_t>(std::stoull(v)); };
    auto as_u64 = [](const std::string& v) { return std::stoull(v); };
    auto as_double = [](const std::string& v) { return std::stod(v); };
    auto as_int = [](const std::string& v) { return std::stoi(v); };
    auto as_string = [](const std::string& v) { return v; };
    auto as_bool = [](const std::string& v) {
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw std::invalid_argument("not a bool");
    };
    auto as_norms = [](const std::string& v) {
        // space-separated m:p pairs, e.g. "0:2 1:2 0:inf"
        std::vector<std::pair<double, double>> out;
        std::istringstream ss(v);
        std::string tok;
        while (ss >> tok) {
            std::size_t colon = tok.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("norm entry");
            double m = std::stod(tok.substr(0, colon));
            double p = detail::parse_p(tok.substr(colon + 1));
            out.push_back({m, p});
        }
        if (out.empty()) throw std::invalid_argument("empty norm schedule");
        return out;
    };

    take("grid.n", as_size, cfg.grid_n);
    take("grid.box_length", as_double, cfg.box_length);
    take("physics.omega", as_double, cfg.omega);
    take("time.dt", as_double, cfg.dt);
    take("time.t_end", as_double, cfg.t_end);
    take("time.snapshot_stride", as_size, cfg.snapshot_stride);
    take("integrator.scheme", as_string, cfg.scheme);
    take("integrator.linear_only", as_bool, cfg.linear_only);
    take("data.kind", as_string, cfg.data_kind);
    take("data.seed", as_u64, cfg.seed);
    take("data.amplitude", as_double, cfg.amplitude);
    take("data.length_scale", as_double, cfg.length_scale);
    take("data.s", as_double, cfg.sobolev_index);
    take("norms.schedule", as_norms, cfg.norms);
    take("fit.t_lo", as_double, cfg.fit_t_lo);
    take("fit.t_hi", as_double, cfg.fit_t_hi);
    take("fit.samples", as_size, cfg.fit_samples);
    take("quadrature.radial", as_int, cfg.quad_radial);
    take("quadrature.polar", as_int, cfg.quad_polar);
    take("quadrature.azimuthal", as_int, cfg.quad_azimuthal);
    take("quadrature.tolerance", as_double, cfg.quad_tolerance);
    take("experiment.datum", as_string, cfg.datum_family);
    take("experiment.datum_length_scale", as_double, cfg.datum_length_scale);
    take("experiment.block", as_int, cfg.block);
    take("experiment.p", detail::parse_p, cfg.exp_p);
    take("experiment.m", as_double, cfg.exp_m);
    take("output.dir", as_string, cfg.output_dir);

    for (const auto& [key, val] : kv)
        problems.push_back("line " + std::to_string(val.second) + ": unknown key '" + key + "'");

    // Validate every owning-module precondition before any computation.
    if (cfg.grid_n < 8 || !is_power_of_two(cfg.grid_n))
        problems.push_back("grid.n must be a power of two >= 8 (got " +
                           std::to_string(cfg.grid_n) + ")");
    if (!(cfg.box_length > 0)) problems.push_back("grid.box_length must be positive");
    if (!(cfg.dt > 0)) problems.push_back("time.dt must be positive");
    if (!(cfg.t_end >= cfg.dt)) problems.push_back("time.t_end must be >= time.dt");
    if (cfg.snapshot_stride == 0) problems.push_back("time.snapshot_stride must be >= 1");
    try {
        scheme_from_string(cfg.scheme);
    } catch (const std::exception& e) {
        problems.push_back(e.what());
    }
    try {
        DataKind kind = data_kind_from_string(cfg.data_kind);
        if (cfg.grid_n >= 8 && is_power_of_two(cfg.grid_n) && cfg.box_length > 0) {
            InitialDataSpec spec = cfg.data_spec();
            spec.kind = kind;
            spec.validate(GridSpec(cfg.grid_n, cfg.box_length));
        }
    } catch (const std::exception& e) {
        problems.push_back(e.what());
    }
    try {
        analytic_family_from_string(cfg.datum_family);
    } catch (const std::exception& e) {
        problems.push_back(e.what());
    }
    if (!(cfg.datum_length_scale > 0))
        problems.push_back("experiment.datum_length_scale must be positive");
    if (cfg.exp_p < 1.0) problems.push_back("experiment.p must be >= 1");
    if (cfg.exp_m < 0.0) problems.push_back("experiment.m must be >= 0");
    if (!(cfg.fit_t_hi > cfg.fit_t_lo) || !(cfg.fit_t_lo > 0))
        problems.push_back("fit window must satisfy 0 < fit.t_lo < fit.t_hi");
    if (cfg.fit_samples < 10) problems.push_back("fit.samples must be >= 10");
    for (auto [m, p] : cfg.norms) {
        if (m < 0) problems.push_back("norm schedule: m must be >= 0");
        if (p < 1) problems.push_back("norm schedule: p must be >= 1");
    }
    try {
        cfg.quadrature_spec().validate();
    } catch (const std::exception& e) {
        problems.push_back(e.what());
    }
    if (cfg.output_dir.empty()) problems.push_back("output.dir must not be empty");

    if (!problems.empty()) throw ConfigError(problems);
    return cfg;
}

inline ExperimentConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError({"cannot open config file '" + path + "'"});
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

// The documented default configuration, printable by `info`.
inline std::string default_config_text() {
    return R"(# cnsf experiment configuration (flat key-value grammar)
grid.n = 32
grid.box_length = 6.283185307179586
physics.omega = 10.0
time.dt = 0.001
time.t_end = 1.0
time.snapshot_stride = 100
integrator.scheme = etd2rk          # exp-euler | etd2rk
integrator.linear_only = false
data.kind = gaussian-divfree        # gaussian-divfree | moment-zero-divfree | rough-sobolev
data.seed = 1
data.amplitude = 0.2
data.length_scale = 0               # 0 selects the default L/16
data.s = 0.7                        # rough-sobolev regularity index
norms.schedule = 0:2 1:2            # space-separated m:p pairs, p may be inf
fit.t_lo = 10
fit.t_hi = 1000
fit.samples = 24
quadrature.radial = 128
quadrature.polar = 64
quadrature.azimuthal = 64
quadrature.tolerance = 1e-6
experiment.datum = projected-gaussian  # projected-gaussian | curl-gaussian | curl-gaussian-m1 | lp-block
experiment.datum_length_scale = 0.02
experiment.block = 0
experiment.p = 2                    # experiment exponent, inf allowed
experiment.m = 0
output.dir = out
)";
}

} // namespace cnsf
