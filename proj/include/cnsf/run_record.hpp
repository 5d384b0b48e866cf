#pragma once
//
// Run persistence: CSV series (RFC-4180, LF endings, '.' decimal, 17
// significant digits), JSON manifest and fit reports, SHA-256 digests of
// every emitted file. A manifest plus the same build reproduces every CSV
// byte for byte.
//

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <json.hpp>

#include "cnsf/config.hpp"
#include "cnsf/experiments.hpp"
#include "cnsf/sha256.hpp"
#include "cnsf/snapshot.hpp"

namespace cnsf {

inline const char* code_version() { return "cnsf 1.0.0"; }

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class RunWriter {
public:
    explicit RunWriter(const std::string& dir) : dir_(dir) {
        std::filesystem::create_directories(dir_);
        start_ = std::chrono::steady_clock::now();
    }

    const std::string& dir() const { return dir_; }

    void write_text(const std::string& name, const std::string& content) {
        std::filesystem::path p = std::filesystem::path(dir_) / name;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw std::runtime_error("partial write to " + p.string());
        digests_[name] = Sha256::of(content);
    }

    void write_csv(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
        std::string out;
        for (std::size_t i = 0; i < header.size(); ++i) {
            out += header[i];
            out += (i + 1 < header.size()) ? ',' : '\n';
        }
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out += format_g17(row[i]);
                out += (i + 1 < row.size()) ? ',' : '\n';
            }
        }
        write_text(name, out);
    }

    void write_snapshot(const std::string& name, const SpectralVectorField& u, double time,
                        double omega) {
        std::string bytes = encode_snapshot(u, time, omega);
        std::filesystem::path p = std::filesystem::path(dir_) / name;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        digests_[name] = Sha256::of(bytes);
    }

    // Manifest with config echo, digests and timings; written last.
    void write_manifest(const nlohmann::json& body) {
        nlohmann::json m = body;
        m["code_version"] = code_version();
        nlohmann::json dig = nlohmann::json::object();
        for (const auto& [name, sha] : digests_) dig[name] = sha;
        m["digests"] = dig;
        m["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::string text = m.dump(2);
        text += "\n";
        std::filesystem::path p = std::filesystem::path(dir_) / "manifest.json";
        std::ofstream f(p, std::ios::binary);
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
    }

    const std::map<std::string, std::string>& digests() const { return digests_; }

private:
    std::string dir_;
    std::map<std::string, std::string> digests_;
    std::chrono::steady_clock::time_point start_;
};

inline nlohmann::json config_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["grid.n"] = cfg.grid_n;
    j["grid.box_length"] = cfg.box_length;
    j["physics.omega"] = cfg.omega;
    j["time.dt"] = cfg.dt;
    j["time.t_end"] = cfg.t_end;
    j["time.snapshot_stride"] = cfg.snapshot_stride;
    j["integrator.scheme"] = cfg.scheme;
    j["integrator.linear_only"] = cfg.linear_only;
    j["data.kind"] = cfg.data_kind;
    j["data.seed"] = cfg.seed;
    j["data.amplitude"] = cfg.amplitude;
    j["data.length_scale"] = cfg.length_scale;
    j["data.s"] = cfg.sobolev_index;
    std::string sched;
    for (auto [m, p] : cfg.norms) {
        if (!sched.empty()) sched += ' ';
        sched += format_g17(m) + ":" + (std::isinf(p) ? "inf" : format_g17(p));
    }
    j["norms.schedule"] = sched;
    j["fit.t_lo"] = cfg.fit_t_lo;
    j["fit.t_hi"] = cfg.fit_t_hi;
    j["fit.samples"] = cfg.fit_samples;
    j["quadrature.radial"] = cfg.quad_radial;
    j["quadrature.polar"] = cfg.quad_polar;
    j["quadrature.azimuthal"] = cfg.quad_azimuthal;
    j["quadrature.tolerance"] = cfg.quad_tolerance;
    j["experiment.datum"] = cfg.datum_family;
    j["experiment.datum_length_scale"] = cfg.datum_length_scale;
    j["experiment.block"] = cfg.block;
    j["experiment.p"] = std::isinf(cfg.exp_p) ? "inf" : format_g17(cfg.exp_p);
    j["experiment.m"] = cfg.exp_m;
    j["output.dir"] = cfg.output_dir;
    return j;
}

inline nlohmann::json fit_json(const DecayFit& fit, double expected, double tolerance) {
    nlohmann::json j;
    j["window_lo"] = fit.window.t_lo;
    j["window_hi"] = fit.window.t_hi;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["residual_rms"] = fit.residual_rms;
    j["samples"] = fit.samples;
    j["regime"] = fit.regime;
    j["expected_slope"] = expected;
    j["tolerance"] = tolerance;
    j["pass"] = std::abs(fit.slope - expected) <= tolerance;
    return j;
}

// Emit the standard run-record files for a completed simulation.
inline void emit_run_record(RunWriter& writer, const RunRecord& rec,
                            const ExperimentConfig& cfg,
                            const std::optional<SmallnessReport>& smallness) {
    std::vector<std::vector<double>> norm_rows;
    for (std::size_t s = 0; s < rec.norms.size(); ++s)
        for (std::size_t i = 0; i < rec.norms[s].size(); ++i)
            norm_rows.push_back({rec.norms[s].time[i], rec.norms[s].m,
                                 rec.norms[s].p, rec.norms[s].value[i]});
    writer.write_csv("norms.csv", {"t", "m", "p", "value"}, norm_rows);

    std::vector<std::vector<double>> energy_rows;
    double e0 = rec.ledger.kinetic.empty() ? 0.0 : rec.ledger.kinetic.front();
    for (std::size_t i = 0; i < rec.ledger.time.size(); ++i) {
        double drift =
            e0 > 0 ? (rec.ledger.kinetic[i] + rec.ledger.dissipated[i] - e0) / e0 : 0.0;
        energy_rows.push_back(
            {rec.ledger.time[i], rec.ledger.kinetic[i], rec.ledger.dissipated[i], drift});
    }
    writer.write_csv("energy.csv", {"t", "kinetic", "dissipated", "drift"}, energy_rows);

    for (std::size_t i = 0; i < rec.snapshots.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshots/%06zu.cnsf", i);
        writer.write_snapshot(name, rec.snapshots[i], rec.snapshot_time[i], rec.omega);
    }

    nlohmann::json manifest;
    manifest["config"] = config_json(cfg);
    manifest["grid"] = {{"n", rec.grid.n()}, {"box_length", rec.grid.box_length()}};
    manifest["integrator"] = {{"scheme", to_string(rec.config.scheme)},
                              {"dt", rec.config.dt},
                              {"t_end", rec.config.t_end},
                              {"linear_only", rec.config.linear_only}};
    manifest["aborted"] = rec.aborted;
    if (rec.aborted) manifest["abort_reason"] = rec.abort_reason;
    manifest["energy_drift"] = rec.ledger.time.empty() ? 0.0 : energy_audit(rec.ledger);
    if (smallness) {
        manifest["smallness"] = {{"value", smallness->value},
                                 {"sobolev_norm", smallness->sobolev_norm},
                                 {"s", smallness->s},
                                 {"omega", smallness->omega},
                                 {"note", smallness->threshold_note}};
    }
    writer.write_manifest(manifest);
}

// Decay-experiment CSV rows per the repo-wide schemas.
inline void emit_decay_csv(RunWriter& writer, const std::string& name,
                           const std::vector<DecaySeriesRow>& rows) {
    std::vector<std::vector<double>> data;
    for (const auto& r : rows)
        data.push_back({r.t, r.m, r.p, r.omega, r.norm, r.envelope, r.ratio});
    writer.write_csv(name, {"t", "m", "p", "omega", "norm", "envelope", "ratio"}, data);
}

inline void emit_dispersive_csv(RunWriter& writer, const DispersiveResult& res) {
    std::vector<std::vector<double>> data;
    for (std::size_t i = 0; i < res.series.size(); ++i)
        data.push_back({res.series.time[i], static_cast<double>(res.block), res.p,
                        res.series.value[i],
                        i < res.bound.size() ? res.bound[i] : 0.0});
    writer.write_csv("dispersive.csv", {"tau", "k", "p", "norm", "bound"}, data);
}

inline void emit_vanishing_csv(RunWriter& writer, const VanishingTrend& trend) {
    std::vector<std::vector<double>> data;
    for (std::size_t i = 0; i < trend.time.size(); ++i)
        data.push_back({trend.time[i], trend.compensated[i]});
    writer.write_csv("vanishing-limit.csv", {"t", "compensated"}, data);
}

inline void emit_gap_csv(RunWriter& writer, const GapSeries& gap) {
    std::vector<std::vector<double>> data;
    for (std::size_t i = 0; i < gap.time.size(); ++i)
        data.push_back({gap.time[i], gap.gap[i]});
    writer.write_csv("gap.csv", {"t", "gap"}, data);
}

} // namespace cnsf
