//
// cnsf command line: simulation runs and decay experiments around the
// rotating Navier-Stokes spectral core. One experiment per invocation;
// outputs land under output.dir as CSV series, JSON reports and CNSF
// snapshots. Exit codes: 0 success, 1 validation error, 2 numerical
// failure, 3 invariant-suite failure. Errors are also emitted as
// single-line JSON on stderr.
//

#include <CLI11.hpp>
#include <json.hpp>

#include "cnsf/matrix_exp.hpp"
#include "cnsf/run_record.hpp"

using namespace cnsf;
using nlohmann::json;

namespace {

struct CliOptions {
    std::string config_path;
    std::string output_override;
    int threads = 0;
    std::int64_t seed_override = -1;
};

ExperimentConfig load_config(const CliOptions& opt) {
    if (opt.config_path.empty())
        throw ConfigError({"--config PATH is required for this subcommand"});
    ExperimentConfig cfg = parse_config(opt.config_path);
    if (!opt.output_override.empty()) cfg.output_dir = opt.output_override;
    if (opt.seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed_override);
    return cfg;
}

void diag(const std::string& kind, const std::string& message) {
    json j;
    j["error"] = message;
    j["kind"] = kind;
    std::cerr << j.dump() << "\n";
}

std::vector<double> experiment_times(const ExperimentConfig& cfg) {
    std::vector<double> times = log_spaced(cfg.fit_t_lo, cfg.fit_t_hi, cfg.fit_samples);
    if (cfg.omega != 0.0) {
        // Early-regime samples below the guard band |Omega| t = 0.3.
        double hi = 0.3 / std::abs(cfg.omega);
        double lo = hi / 15.0;
        if (lo < times.front())
            for (double t : log_spaced(lo, std::min(hi, times.front() * 0.999), 14))
                times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    return times;
}

json decay_result_json(const DecayExperimentResult& r, double tol_early, double tol_late) {
    json j;
    j["m"] = r.m;
    j["p"] = std::isinf(r.p) ? "inf" : format_g17(r.p);
    j["omega"] = r.omega;
    j["moment_index"] = r.moment_index;
    j["datum_l1"] = r.datum_l1;
    if (r.early_fit) j["early"] = fit_json(*r.early_fit, r.expected_early, tol_early);
    if (r.late_fit) j["late"] = fit_json(*r.late_fit, r.expected_late, tol_late);
    return j;
}

double fit_tolerance(double p) { return p == 2.0 ? 0.05 : 0.1; }

int cmd_simulate(const ExperimentConfig& cfg) {
    GridSpec grid(cfg.grid_n, cfg.box_length);
    SpectralVectorField u0 = generate_initial_data(cfg.data_spec(), grid);
    std::optional<SmallnessReport> smallness;
    if (cfg.omega != 0.0 && cfg.sobolev_index > 0.5 && cfg.sobolev_index < 0.9)
        smallness = smallness_check(u0, cfg.sobolev_index, cfg.omega);
    RunRecord rec = simulate(u0, cfg.omega, cfg.integrator_config());
    RunWriter writer(cfg.output_dir);
    emit_run_record(writer, rec, cfg, smallness);
    if (rec.aborted) {
        diag("numerical", rec.abort_reason);
        return 2;
    }
    std::cout << "run complete: " << rec.ledger.time.size() - 1 << " steps, "
              << rec.snapshots.size() << " snapshots, drift "
              << format_g17(energy_audit(rec.ledger)) << "\n";
    return 0;
}

int cmd_linear_decay(const ExperimentConfig& cfg, bool moment) {
    AnalyticDatum datum = cfg.analytic_datum();
    if (moment && !datum.is_curl_type())
        throw ConfigError({"moment-decay requires a curl-family datum "
                           "(experiment.datum = curl-gaussian or curl-gaussian-m1)"});
    std::vector<double> times = experiment_times(cfg);
    RunWriter writer(cfg.output_dir);
    json fits = json::array();
    std::vector<DecaySeriesRow> rows;
    for (auto [m, p] : cfg.norms) {
        DecayExperimentResult r =
            moment ? moment_decay_experiment(datum, cfg.omega, m, p, times)
                   : linear_decay_experiment(datum, cfg.omega, m, p, times);
        rows.insert(rows.end(), r.rows.begin(), r.rows.end());
        fits.push_back(decay_result_json(r, fit_tolerance(p), fit_tolerance(p)));
    }
    emit_decay_csv(writer, moment ? "moment-decay.csv" : "linear-decay.csv", rows);
    json manifest;
    manifest["config"] = config_json(cfg);
    manifest["experiment"] = moment ? "moment-decay" : "linear-decay";
    manifest["fits"] = fits;
    writer.write_text("fits.json", fits.dump(2) + "\n");
    writer.write_manifest(manifest);
    std::cout << fits.dump(2) << "\n";
    return 0;
}

int cmd_dispersive(const ExperimentConfig& cfg) {
    std::vector<double> taus = log_spaced(cfg.fit_t_lo, cfg.fit_t_hi, cfg.fit_samples);
    DispersiveResult res = dispersive_experiment(cfg.block, cfg.exp_p, +1, taus);
    RunWriter writer(cfg.output_dir);
    emit_dispersive_csv(writer, res);
    json j;
    j["block"] = res.block;
    j["p"] = std::isinf(res.p) ? "inf" : format_g17(res.p);
    j["expected_slope"] = res.expected_slope;
    if (res.fit) j["fit"] = fit_json(*res.fit, res.expected_slope, fit_tolerance(res.p));
    j["l2_deviation"] = res.l2_deviation;
    j["k_scaling_defect"] = res.k_scaling_defect;
    j["datum_dual_norm"] = res.datum_dual_norm;
    writer.write_text("fits.json", j.dump(2) + "\n");
    json manifest;
    manifest["config"] = config_json(cfg);
    manifest["experiment"] = "dispersive";
    writer.write_manifest(manifest);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_vanishing(const ExperimentConfig& cfg) {
    AnalyticDatum datum = cfg.analytic_datum();
    std::vector<double> times = log_spaced(cfg.fit_t_lo, cfg.fit_t_hi, cfg.fit_samples);
    LinearFlowEvaluator ev(datum, cfg.omega);
    NormSeries series;
    series.m = cfg.exp_m;
    series.p = cfg.exp_p;
    series.omega = cfg.omega;
    for (double t : times) {
        double v = cfg.exp_p == 2.0 ? ev.l2_norm(t, cfg.exp_m)
                   : std::isinf(cfg.exp_p)
                       ? linear_flow_sup(ev, t, cfg.exp_m).value
                       : linear_flow_lp(ev, t, cfg.exp_p, cfg.exp_m);
        series.push(t, v);
    }
    VanishingTrend trend = vanishing_limit_check(series, cfg.exp_m, cfg.exp_p, cfg.omega);
    RunWriter writer(cfg.output_dir);
    emit_vanishing_csv(writer, trend);
    json j;
    j["decreasing"] = trend.decreasing;
    j["decade_ratio"] = trend.decade_ratio;
    j["datum"] = to_string(datum.family);
    writer.write_text("trend.json", j.dump(2) + "\n");
    json manifest;
    manifest["config"] = config_json(cfg);
    manifest["experiment"] = "vanishing-limit";
    writer.write_manifest(manifest);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_scaling_check(const ExperimentConfig& cfg) {
    GridSpec grid(cfg.grid_n, cfg.box_length);
    SpectralVectorField u0 = generate_initial_data(cfg.data_spec(), grid);
    ScalingCheckResult res = scaling_check(u0, cfg.omega, cfg.integrator_config());
    RunWriter writer(cfg.output_dir);
    json j;
    j["lambda"] = 2.0;
    j["max_relative_diff"] = res.max_relative_diff;
    j["horizon"] = res.horizon;
    j["pass"] = res.max_relative_diff <= 1e-10;
    writer.write_text("scaling.json", j.dump(2) + "\n");
    json manifest;
    manifest["config"] = config_json(cfg);
    manifest["experiment"] = "scaling-check";
    writer.write_manifest(manifest);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_gap(const ExperimentConfig& cfg) {
    GridSpec grid(cfg.grid_n, cfg.box_length);
    SpectralVectorField u0 = generate_initial_data(cfg.data_spec(), grid);
    IntegratorConfig icfg = cfg.integrator_config();
    RunRecord nonlinear = simulate(u0, cfg.omega, icfg);
    IntegratorConfig lcfg = icfg;
    lcfg.linear_only = true;
    RunRecord linear = simulate(u0, cfg.omega, lcfg);
    GapSeries gap = nonlinear_vs_linear_gap(nonlinear, linear);
    RunWriter writer(cfg.output_dir);
    emit_gap_csv(writer, gap);
    json manifest;
    manifest["config"] = config_json(cfg);
    manifest["experiment"] = "gap";
    writer.write_manifest(manifest);
    std::cout << "gap series written (" << gap.time.size() << " samples, final "
              << format_g17(gap.gap.empty() ? 0.0 : gap.gap.back()) << ")\n";
    return 0;
}

int cmd_fit(const ExperimentConfig& cfg, const std::string& input) {
    // Re-fit a norms.csv series offline for the configured (m, p).
    std::ifstream f(input);
    if (!f) throw ConfigError({"cannot open series file '" + input + "'"});
    std::string line;
    std::getline(f, line); // header
    NormSeries series;
    series.m = cfg.exp_m;
    series.p = cfg.exp_p;
    series.omega = cfg.omega;
    while (std::getline(f, line)) {
        std::istringstream ss(line);
        std::string tok;
        std::vector<double> cols;
        while (std::getline(ss, tok, ',')) cols.push_back(std::stod(tok));
        if (cols.size() < 4) continue;
        if (std::abs(cols[1] - cfg.exp_m) > 1e-12) continue;
        bool p_match = std::isinf(cfg.exp_p) ? std::isinf(cols[2])
                                             : std::abs(cols[2] - cfg.exp_p) < 1e-12;
        if (!p_match) continue;
        series.push(cols[0], cols[3]);
    }
    DecayFit fit = fit_rate(series, FitWindow{cfg.fit_t_lo, cfg.fit_t_hi});
    json j = fit_json(fit, 0.0, 0.0);
    j.erase("expected_slope");
    j.erase("tolerance");
    j.erase("pass");
    RunWriter writer(cfg.output_dir);
    writer.write_text("fits.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_gen_data(const ExperimentConfig& cfg) {
    GridSpec grid(cfg.grid_n, cfg.box_length);
    SpectralVectorField u0 = generate_initial_data(cfg.data_spec(), grid);
    RunWriter writer(cfg.output_dir);
    writer.write_snapshot("data.cnsf", u0, 0.0, cfg.omega);
    MomentReport rep = moments(u0);
    json j;
    j["l1_norm"] = rep.l1_norm;
    j["mean_integral"] = {rep.mean_integral.x, rep.mean_integral.y, rep.mean_integral.z};
    j["first_absolute_moment"] = rep.first_absolute_moment;
    j["divergence_defect"] = u0.divergence_defect();

    // Norm-toolkit export: (time, m_or_s, p, r_or_blank, value, truncation_flag).
    std::vector<std::vector<double>> rows;
    for (auto [m, p] : cfg.norms) {
        double v = norm_for_schedule(u0, m, p);
        rows.push_back({0.0, m, p, 0.0, v, 0.0});
    }
    writer.write_csv("norms.csv", {"time", "m_or_s", "p", "r_or_blank", "value",
                                   "truncation_flag"},
                     rows);
    writer.write_text("moments.json", j.dump(2) + "\n");
    json manifest;
    manifest["config"] = config_json(cfg);
    manifest["experiment"] = "gen-data";
    writer.write_manifest(manifest);
    std::cout << j.dump(2) << "\n";
    return 0;
}

// Fast invariant sweep over the core identities; exit 3 on any failure.
int cmd_check_invariants() {
    int passed = 0, failed = 0;
    auto check = [&](const std::string& name, bool ok) {
        if (ok) ++passed;
        else {
            ++failed;
            diag("assertion", "invariant failed: " + name);
        }
    };

    // Closed-form multiplier vs matrix-exponential oracle.
    {
        double worst = 0;
        for (int c = 0; c < 1000; ++c) {
            Vec3 k{8.0 * (uniform01(29, 3 * c) - 0.5), 8.0 * (uniform01(29, 3 * c + 1) - 0.5),
                   8.0 * (uniform01(29, 3 * c + 2) - 0.5)};
            if (k.norm() < 1e-2) continue;
            double t = 10.0 * uniform01(31, c);
            double om = 200.0 * (uniform01(37, c) - 0.5);
            CVec3 z;
            for (int i = 0; i < 3; ++i) {
                auto [a, b] = normal_pair(41, 8 * c + 2 * i);
                z[i] = cplx{a, b};
            }
            cplx dot = (k.x * z[0] + k.y * z[1] + k.z * z[2]) / k.norm2();
            CVec3 v{z[0] - k.x * dot, z[1] - k.y * dot, z[2] - k.z * dot};
            CVec3 closed = coriolis_multiplier(k, t, om, v);
            CVec3 oracle = semigroup_oracle(k, t, om) * v;
            worst = std::max(worst, cnorm(closed - oracle));
        }
        check("semigroup multiplier vs matrix exponential (1000 samples, 1e-12)",
              worst <= 1e-12);
    }

    // Partition of unity on three grids.
    for (std::size_t n : {16u, 32u, 64u})
        check("Littlewood-Paley partition of unity at n = " + std::to_string(n),
              partition_of_unity_defect(make_grid(n, 2.0 * pi)) <= 1e-12);

    // FFT round trip and Leray idempotence on random fields.
    {
        GridSpec g = make_grid(16, 1.3);
        SpectralVectorField u(g);
        for (std::size_t i = 1; i < g.size() && i < 900; ++i)
            u.comp[i % 3][i] = cplx{uniform01(5, i) - 0.5, uniform01(6, i) - 0.5};
        // Symmetrize to a real field by round trip through physical space.
        PhysicalVectorField up = transform_inverse(u);
        SpectralVectorField v = transform_forward(up);
        PhysicalVectorField vp = transform_inverse(v);
        SpectralVectorField w = transform_forward(vp);
        double worst = 0, scale = 1e-300;
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < g.size(); ++i) {
                worst = std::max(worst, std::abs(w.comp[c][i] - v.comp[c][i]));
                scale = std::max(scale, std::abs(v.comp[c][i]));
            }
        check("transform round trip (1e-12 relative)", worst / scale <= 1e-12);

        SpectralVectorField p1 = leray_project(v);
        SpectralVectorField p2 = leray_project(p1);
        double pworst = 0;
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < g.size(); ++i)
                pworst = std::max(pworst, std::abs(p1.comp[c][i] - p2.comp[c][i]));
        check("Leray idempotence", pworst / scale <= 1e-12);
        check("Leray output divergence-free", p1.divergence_defect() <= 1e-12);
    }

    // Energy orthogonality of the nonlinearity.
    {
        GridSpec g = make_grid(16, 1.0);
        InitialDataSpec spec;
        spec.seed = 77;
        spec.amplitude = 0.5;
        SpectralVectorField u = generate_initial_data(spec, g);
        SpectralVectorField nu = nonlinear_term(u);
        double re = 0, uu = 0, nn = 0;
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < g.size(); ++i) {
                re += (nu.comp[c][i] * std::conj(u.comp[c][i])).real();
                uu += std::norm(u.comp[c][i]);
                nn += std::norm(nu.comp[c][i]);
            }
        check("nonlinearity energy orthogonality",
              std::abs(re) / std::max(1e-300, std::sqrt(uu * nn)) <= 1e-10);
    }

    std::cout << "invariants: " << passed << " passed, " << failed << " failed\n";
    return failed == 0 ? 0 : 3;
}

int cmd_info() {
    std::cout << code_version() << "\n";
    std::cout << "build: C++" << (__cplusplus / 100 % 100) << ", FFTW3 backend, "
              << "double precision throughout\n";
    std::cout << "subcommands: simulate linear-decay moment-decay dispersive "
                 "vanishing-limit scaling-check gap fit check-invariants gen-data info\n";
    std::cout << "default configuration:\n" << default_config_text();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotating Navier-Stokes spectral laboratory"};
    app.require_subcommand(1);
    app.fallthrough(); // global options are accepted after the subcommand too

    CliOptions opt;
    app.add_option("--config", opt.config_path, "configuration file (flat key-value)");
    app.add_option("--output", opt.output_override, "override output.dir");
    app.add_option("--threads", opt.threads,
                   "worker thread hint (results are independent of it)");
    app.add_option("--seed", opt.seed_override, "override data.seed");

    auto* s_sim = app.add_subcommand("simulate", "nonlinear (or linear-only) run");
    auto* s_lin = app.add_subcommand("linear-decay", "whole-space linear decay fits");
    auto* s_mom = app.add_subcommand("moment-decay", "first-moment datum decay fits");
    auto* s_dis = app.add_subcommand("dispersive", "wave-operator block decay");
    auto* s_van = app.add_subcommand("vanishing-limit", "compensated-limit trend");
    auto* s_scl = app.add_subcommand("scaling-check", "lambda = 2 paired-run invariance");
    auto* s_gap = app.add_subcommand("gap", "nonlinear vs linear trajectory gap");
    auto* s_fit = app.add_subcommand("fit", "re-fit a stored norm series");
    std::string fit_input;
    s_fit->add_option("--input", fit_input, "norms.csv to fit")->required();
    auto* s_chk = app.add_subcommand("check-invariants", "fast invariant suite");
    auto* s_gen = app.add_subcommand("gen-data", "generate initial data");
    auto* s_nfo = app.add_subcommand("info", "version, build flags, default config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::stringstream out;
        out << e.what();
        diag("validation", out.str());
        app.exit(e);
        return 1;
    }

    if (opt.threads > 0) set_thread_hint(opt.threads);
    else set_thread_hint(static_cast<int>(std::thread::hardware_concurrency()));

    try {
        if (s_nfo->parsed()) return cmd_info();
        if (s_chk->parsed()) return cmd_check_invariants();
        ExperimentConfig cfg = load_config(opt);
        if (s_sim->parsed()) return cmd_simulate(cfg);
        if (s_lin->parsed()) return cmd_linear_decay(cfg, false);
        if (s_mom->parsed()) return cmd_linear_decay(cfg, true);
        if (s_dis->parsed()) return cmd_dispersive(cfg);
        if (s_van->parsed()) return cmd_vanishing(cfg);
        if (s_scl->parsed()) return cmd_scaling_check(cfg);
        if (s_gap->parsed()) return cmd_gap(cfg);
        if (s_fit->parsed()) return cmd_fit(cfg, fit_input);
        if (s_gen->parsed()) return cmd_gen_data(cfg);
        diag("validation", "no subcommand selected");
        return 1;
    } catch (const ConfigError& e) {
        diag("validation", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        diag("validation", e.what());
        return 1;
    } catch (const QuadratureFailure& e) {
        diag("numerical", e.what());
        return 2;
    } catch (const CflViolation& e) {
        diag("numerical", e.what());
        return 2;
    } catch (const std::exception& e) {
        diag("numerical", e.what());
        return 2;
    }
}
