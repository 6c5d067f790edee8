// Command-line front end: parameter sweeps, invariant suites, ratio suites
// and plot-data emission for the Eisenstein series library.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "eisen/harness.hpp"

namespace hn = eisen::harness;

namespace {

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
    return buf;
}

hn::HarnessConfig load_config(const std::string& config_path, std::uint64_t seed_override,
                              bool seed_set, int workers, double tol, bool tol_set) {
    hn::HarnessConfig cfg =
        config_path.empty() ? hn::default_config() : hn::parse_config(config_path);
    if (seed_set) cfg.sweep.seed = seed_override;
    if (workers > 0) cfg.workers = workers;
    if (tol_set) cfg.tol = tol;
    return cfg;
}

void write_manifest(const hn::HarnessConfig& cfg, const std::string& out,
                    const std::string& started, const std::map<std::string, bool>& pass) {
    hn::RunManifest m;
    m.config_hash = hn::fnv1a64(cfg.raw_text) ^ cfg.sweep.seed;
    m.seed = cfg.sweep.seed;
    m.tool_version = "eisenx 0.1.0";
    m.started_at = started;
    m.finished_at = now_iso8601();
    m.suite_pass = pass;
    std::ofstream f(out + "/manifest.json");
    f << m.to_json() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eisenx: weight-n Eisenstein series on Gamma_0(q)\\SL2(R) - sweeps and verification"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    double tol = 0;
    bool tol_set = false;

    app.add_option("--config", config_path, "config file (key-value with [sweep]/[run] tables)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "override RNG seed")->each([&](const std::string&) { seed_set = true; });
    app.add_option("--workers", workers, "worker thread count");
    app.add_option("--tol", tol, "evaluator tolerance")->each([&](const std::string&) { tol_set = true; });

    auto* sweep = app.add_subcommand("sweep", "sup-norm ratio sweep over the configured grid");
    auto* invariants = app.add_subcommand("invariants", "run the cross-module invariant suite");
    auto* ratios = app.add_subcommand("ratios", "constant-term/lower-bound/lattice ratio suites");
    auto* plotdata = app.add_subcommand("plotdata", "emit per-figure CSVs from sweep records");

    CLI11_PARSE(app, argc, argv);

    try {
        hn::HarnessConfig cfg = load_config(config_path, seed, seed_set, workers, tol, tol_set);
        std::filesystem::create_directories(out_dir);
        std::string started = now_iso8601();

        if (sweep->parsed()) {
            hn::SweepSummary s = hn::run_supnorm_sweep(cfg, out_dir);
            std::printf("rows=%lld accuracy_failures=%lld max_ratio=%.6g q_spread=%.3f block_growth_ok=%d\n",
                        s.rows, s.accuracy_failures, s.max_ratio, s.q_spread, int(s.block_growth_ok));
            write_manifest(cfg, out_dir, started, {{"sweep", s.block_growth_ok}});
            if (s.accuracy_failures > 0) return hn::kExitAccuracyFailure;
            return hn::kExitOk;
        }
        if (invariants->parsed()) {
            auto res = hn::run_invariant_suite(cfg, out_dir);
            bool all = true;
            for (const auto& r : res) {
                std::printf("[%s] %-48s margin=%.3g%s%s\n", r.pass ? "PASS" : "FAIL",
                            r.name.c_str(), r.margin, r.note.empty() ? "" : "  # ",
                            r.note.c_str());
                all = all && r.pass;
            }
            write_manifest(cfg, out_dir, started, {{"invariants", all}});
            return all ? hn::kExitOk : hn::kExitInvariantFailure;
        }
        if (ratios->parsed()) {
            auto s = hn::run_ratio_suite(cfg, out_dir);
            std::printf("ct_ratio_max=%.4g norm_c=%.4g lower_c=%.4g slope=%.3f afe_c=%.4g lattice_c=%.4g phi_c=%.4g\n",
                        s.max_constant_term_ratio, s.norm_bound_fitted_c, s.lower_bound_fitted_c,
                        s.lower_bound_slope, s.afe_fitted_c, s.lattice_count_fitted_c,
                        s.phi_deriv_fitted_c);
            for (const auto& n : s.notes) std::printf("note: %s\n", n.c_str());
            write_manifest(cfg, out_dir, started, {{"ratios", s.pass}});
            return s.pass ? hn::kExitOk : hn::kExitInvariantFailure;
        }
        if (plotdata->parsed()) {
            auto recs = hn::read_records_csv(out_dir + "/sweep_records.csv");
            hn::emit_plot_data(recs, out_dir);
            std::printf("wrote ratio_vs_n.csv ratio_vs_t.csv ratio_vs_y.csv (%zu records)\n",
                        recs.size());
            write_manifest(cfg, out_dir, started, {{"plotdata", true}});
            return hn::kExitOk;
        }
    } catch (const eisen::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return hn::kExitConfigError;
    } catch (const eisen::AccuracyError& e) {
        std::fprintf(stderr, "accuracy error: %s\n", e.what());
        return hn::kExitAccuracyFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return hn::kExitInvariantFailure;
    }
    return hn::kExitOk;
}
