#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iab/analytics.hpp"
#include "iab/load_dist.hpp"
#include "iab/params.hpp"
#include "iab/simulator.hpp"

namespace iab::experiment {

using analytics::CoverageThresholds;
using analytics::PartitionStrategy;

struct ExperimentConfig {
    SystemParams params;
    std::vector<double> etas;
    std::vector<double> bandwidths;
    std::vector<int> m_bars;
    std::vector<double> rhos;
    std::vector<PartitionStrategy> strategies{PartitionStrategy::Equal, PartitionStrategy::LoadBased};
    CoverageThresholds thresholds;
    double eta_step = 0.05;
    bool monte_carlo = true;
    bool check_quadrature = false;
    std::string out_dir = "out";

    void validate() const;
};

// eta in {0, step, ..., 1}.
std::vector<double> eta_grid(double step, bool include_one = true);

ExperimentConfig default_config();
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

// One point of a rate-coverage sweep.
struct SweepRecord {
    PartitionStrategy strategy = PartitionStrategy::Equal;
    double eta = 0.0;
    double W = 0.0;
    int m_bar = 0;
    double rho = 0.0;
    double pr = 0.0;
    double pr_m = 0.0;
    double pr_s = 0.0;
    std::optional<sim::Estimate> mc;
    std::string quad_flag = "ok";
};

// Sweep order: strategy, W, m_bar, rho, eta (eta fastest).
std::vector<SweepRecord> run_sweep(const ExperimentConfig& config);

inline constexpr const char* kSweepCsvHeader =
    "strategy,eta,W_hz,m_bar,rho_bps,pr_analytical,pr_m,pr_s,pr_mc,mc_se,quad_flag";

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out);

struct OptimalRecord {
    PartitionStrategy strategy = PartitionStrategy::Equal;
    double W = 0.0;
    int m_bar = 0;
    double rho = 0.0;
    double eta_star = 0.0;
    double pr_star = 0.0;
    double pr_baseline = 0.0;   // eta = 0, macro-only service
    double iab_gain() const { return pr_star - pr_baseline; }
};

std::vector<OptimalRecord> find_optimal_eta(const ExperimentConfig& config);
void write_optimal_csv(const std::vector<OptimalRecord>& records, std::ostream& out);

// Validation gate: |analytical - MC| <= 3 (SE + kQuadratureSlack).
inline constexpr double kQuadratureSlack = 0.005;
// Below this many trials the MC standard error is too coarse to judge.
inline constexpr std::uint64_t kMinValidationTrials = 2500;
inline constexpr double kMaxLoadTotalVariation = 0.05;

enum class Verdict { Pass, Fail, InsufficientPrecision };
const char* to_string(Verdict verdict);

struct ValidationRow {
    SweepRecord record;
    double abs_diff = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Pass;
};

struct LoadFidelity {
    int m_bar = 0;
    load::Side side = load::Side::ABS;
    double total_variation = 0.0;
    bool pass = true;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    std::vector<LoadFidelity> load;
    bool pass() const;
};

ValidationReport validate(const ExperimentConfig& config);
void write_validation_csv(const ValidationReport& report, std::ostream& out);

// Params for one sweep point.
SystemParams point_params(const ExperimentConfig& config, double W, int m_bar, double eta);

}  // namespace iab::experiment
