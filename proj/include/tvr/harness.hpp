#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvr/models.hpp"
#include "tvr/tournament.hpp"

namespace tvr {

// Net resolution rule: delta(n) = coef * n^exponent (exponent 0 keeps a
// fixed delta across the n grid, so the row-count contract is unchanged).
struct DeltaRule {
    double coef = 0.1;
    double exponent = 0.0;
    double at(std::size_t n) const;
};

struct ExperimentConfig {
    Family family = Family::GaussianLocation;
    nlohmann::json space_spec; // family-specific block, echoed into the CSV header
    DeltaRule delta;
    std::size_t net_budget = 2000;
    std::size_t net_cap = 512;
    std::vector<double> eps_grid;
    std::vector<Contaminant> q_list;
    std::vector<std::size_t> n_grid;
    std::size_t replicates = 1;
    std::vector<std::string> estimators; // tournament|yatracos|naive|median-wavelet|mean-wavelet
    std::uint64_t seed = 1;
    std::string out = "result.csv";
    std::optional<Model> truth;  // fixed truth; empty = drawn per replicate
    double beta = 1.0;           // wavelet estimators' smoothness input
    std::string dump_samples;    // optional path prefix for replicate-0 datasets
    unsigned threads = 0;
    // soft per-replicate budget, checked between estimators: once exceeded,
    // the remaining estimators of that replicate get "timeout" rows; finished
    // work is never discarded.  0 disables the check.
    long replicate_timeout_ms = 0;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

Contaminant contaminant_from_json(const nlohmann::json& j);
// "point_mass:10", "gaussian_shift:8", "cauchy:1"
Contaminant contaminant_from_string(const std::string& text);

ParameterSpace space_from_spec(Family family, const nlohmann::json& spec);
Model truth_from_spec(Family family, const nlohmann::json& spec,
                      const nlohmann::json& truth_spec);

// Family-specific non-robust baseline: project a naive point estimate
// (sample mean / least squares / histogram / truncated coefficient mean)
// onto the nearest net center.
std::size_t naive_estimator_index(const CoveringNet& net, const EmpiricalMeasure& data);

// Runs the full sweep, streaming rows to config.out and a group-by digest to
// <out>.summary.csv.  Deterministic for a fixed config + seed apart from the
// "# generated:" header line.  Per-replicate failures become error rows.
void run_experiment(const ExperimentConfig& config, std::ostream& log);

struct SummaryRow {
    std::string estimator;
    std::string family;
    std::size_t n = 0;
    double eps = 0;
    std::string q;
    double delta = 0;
    std::size_t rows = 0;
    std::size_t errors = 0;
    // median / 0.9-quantile per loss column; NaN when not applicable
    double median_tv = 0, q90_tv = 0;
    double median_l1 = 0, q90_l1 = 0;
    double median_param = 0, q90_param = 0;
    double median_pred = 0, q90_pred = 0;
    double median_sup = 0, q90_sup = 0;
};

// Group-by over a result CSV (the `report` subcommand and the summary file
// both come from here).
std::vector<SummaryRow> summarize_result_csv(const std::string& path);
void write_report(const std::string& csv_path, std::ostream& out);

// Sample dump/load for external audit (test --dump / estimate --data).
void write_samples_csv(const std::string& path, Family family,
                       const EmpiricalMeasure& data);
EmpiricalMeasure read_samples_csv(const std::string& path, Family expected_family);

std::string format_double(double v); // shortest round-trip decimal

} // namespace tvr
