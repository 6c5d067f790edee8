#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eisen/types.hpp"

namespace eisen::harness {

struct SweepSpec {
    std::vector<long long> levels = {1, 2, 3, 6};
    std::vector<int> weights = {0, 2, -2, 8, -8, 20, -20, 40, -40};
    std::vector<double> types = {0.0, 0.3, 1.0, 3.0, 10.0, 25.0};
    int point_count = 64;
    double y_min = 0.8660254037844386;  // sqrt(3)/2
    double y_max = 2142.0;
    std::uint64_t seed = 20240601;
    double epsilon = 0.1;

    void validate() const;
};

struct HarnessConfig {
    SweepSpec sweep;
    double tol = 1e-9;
    int workers = 1;
    double psi_perturbation = 0.0;  // fault injection: perturbs psi in Phi
    std::string raw_text;           // canonical text used for the config hash
};

// Key-value config with [table] sections mirroring SweepSpec fields.
HarnessConfig parse_config(const std::string& path);
HarnessConfig default_config();

struct ResultRecord {
    long long q;
    long long cusp;  // divisor
    int n;
    double t;
    double x, y, theta;
    double value_re, value_im;
    double abs_error;
    double bound_denominator;
    double ratio;
};

std::string csv_header();
std::string csv_row(const ResultRecord& r);
std::vector<ResultRecord> read_records_csv(const std::string& path);

struct RunManifest {
    std::uint64_t config_hash;
    std::uint64_t seed;
    std::string tool_version;
    std::string started_at;
    std::string finished_at;
    std::map<std::string, bool> suite_pass;

    std::string to_json() const;
};

std::uint64_t fnv1a64(const std::string& bytes);

// deterministic low-discrepancy sample of the fundamental domain
struct SamplePoint {
    double x, y, theta;
};
std::vector<SamplePoint> sample_points(const SweepSpec& spec);

struct SweepSummary {
    std::map<int, double> block_max;           // dyadic |n|+|t| block -> max ratio
    std::map<long long, double> fitted_by_q;   // q -> max ratio
    long long rows = 0;
    long long accuracy_failures = 0;
    double max_ratio = 0.0;
    bool block_growth_ok = true;   // block-to-block growth <= 20%
    double q_spread = 1.0;         // max/min of fitted_by_q
};

SweepSummary run_supnorm_sweep(const HarnessConfig& cfg, const std::string& out_dir);

struct InvariantResult {
    std::string name;
    bool pass;
    double margin;     // measured slack (check-specific; see note)
    std::string note;
};

std::vector<InvariantResult> run_invariant_suite(const HarnessConfig& cfg,
                                                 const std::string& out_dir);

struct RatioSuiteSummary {
    double max_constant_term_ratio = 0.0;
    double norm_bound_fitted_c = 0.0;
    double lower_bound_fitted_c = 1e300;
    double lower_bound_slope = 0.0;
    double afe_fitted_c = 0.0;
    double lattice_count_fitted_c = 0.0;
    double phi_deriv_fitted_c = 0.0;
    bool pass = true;
    std::vector<std::string> notes;
};

RatioSuiteSummary run_ratio_suite(const HarnessConfig& cfg, const std::string& out_dir);

void emit_plot_data(const std::vector<ResultRecord>& records, const std::string& out_dir);

enum ExitCode : int {
    kExitOk = 0,
    kExitInvariantFailure = 1,
    kExitConfigError = 2,
    kExitAccuracyFailure = 3,
};

}  // namespace eisen::harness
