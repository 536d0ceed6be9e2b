#ifndef NOMA_HARNESS_HPP
#define NOMA_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noma/assignment.hpp"
#include "noma/channel.hpp"
#include "noma/matching.hpp"
#include "noma/power.hpp"
#include "noma/power_allocation.hpp"
#include "noma/scenario.hpp"

namespace noma {

enum class SweepKind { users, p_max_dbw, p_c_dbw };
const char* sweep_kind_name(SweepKind k);

enum class SchemeId { scheme1, scheme2, scheme3, scheme4, scheme5, baseline };

struct SchemeSpec {
    SchemeId id;
    bool many_to_many;   // false: per-user quota 1 (one-to-many comparison)
    RateEval eval;       // step-14 evaluator inside the matching
    enum class Power { full, joint_gp, greedy_eem } power;
};

const char* scheme_name(SchemeId id);
std::optional<SchemeId> scheme_from_name(const std::string& name);
SchemeSpec scheme_spec(SchemeId id);
std::vector<SchemeId> all_schemes();

struct ExperimentConfig {
    CellConfig cell;

    SweepKind sweep_kind = SweepKind::users;
    std::vector<double> sweep_values = {40};

    int num_users = 40;  // fixed value when the sweep varies another knob
    int num_subchannels = 20;
    int max_users_per_sc = 4;
    double p_max_dbw = 23.0;
    double p_c_dbw = 1.75;
    double ftpa_alpha = -0.4;

    std::vector<SchemeId> schemes = {SchemeId::scheme3, SchemeId::scheme5, SchemeId::baseline};
    int trials = 200;
    std::uint64_t seed = 1;
    double delta = 0.0;  // greedy step; 0 -> p_max/100
    int log_terms = 1;
    bool ideal = false;  // report gap-free rates
    int workers = 0;     // 0 -> hardware concurrency

    std::string out_dir;
    bool dump_trials = false;
    std::string gp_trace_path;  // non-empty: record condensation iterates (serial run)

    void validate() const;
};

struct TrialResult {
    SchemeId scheme = SchemeId::baseline;
    double sweep_value = 0.0;
    int trial = 0;
    bool failed = false;
    std::string error;

    double total_ee = 0.0;          // bits/s/Hz per W
    double total_power_w = 0.0;
    double total_throughput = 0.0;  // bits/s/Hz

    std::vector<long> per_sc_users_hist;  // index = members per subchannel
    std::vector<long> per_user_scs_hist;  // index = subchannels per user
    int matching_passes = 0;
    long solver_iterations = 0;
};

struct DataPoint {
    double sweep_value = 0.0;
    SchemeId scheme = SchemeId::baseline;
    int trials = 0;
    int failures = 0;
    double ee_mean = 0.0, ee_median = 0.0, ee_std = 0.0;
    double power_mean = 0.0, power_median = 0.0, power_std = 0.0;
    double throughput_mean = 0.0, throughput_median = 0.0, throughput_std = 0.0;
};

struct TrialDump {
    double sweep_value = 0.0;
    SchemeId scheme = SchemeId::baseline;
    int trial = 0;
    Assignment assignment;
    PowerAllocation powers;
};

struct ExperimentResults {
    ExperimentConfig config;
    std::vector<TrialResult> trials;  // ordered by (sweep value, scheme, trial)
    std::vector<DataPoint> aggregates;
    std::vector<TrialDump> dumps;  // populated when config.dump_trials
};

/// Deterministic per-trial seed; schemes share it so paired comparisons
/// see identical channels.
std::uint64_t trial_seed(std::uint64_t base, double sweep_value, int trial);

/// Scenario for one (sweep value, trial) cell.
Scenario scenario_for(const ExperimentConfig& cfg, double sweep_value, int trial);

/// One (scheme, sweep value, trial) evaluation.
TrialResult run_trial(const ExperimentConfig& cfg, SchemeId scheme, double sweep_value, int trial,
                      TrialDump* dump = nullptr,
                      std::vector<gp::CondensationTraceRow>* gp_trace = nullptr);

/// Full Monte-Carlo grid with a bounded worker pool. Throws when more
/// than 5% of trials fail.
ExperimentResults run_experiment(const ExperimentConfig& cfg);

/// Figure-data CSVs plus the subchannel/user histogram JSON. All files
/// are created; the ones not matching the sweep kind stay headers-only.
void emit_figures_data(const ExperimentResults& results, const std::string& out_dir);

struct OracleResult {
    Assignment assignment;
    PowerAllocation powers;
    double ee = 0.0;
};

/// Exhaustive search over assignments and grid power splits (gap-free
/// rates). Tiny scales only: M <= 4, N <= 3, K <= 2.
OracleResult brute_force_oracle(const Scenario& scen, double grid_step);

/// JSON config file; flags from the CLI override individual fields.
ExperimentConfig config_from_json_file(const std::string& path);

}  // namespace noma

#endif
