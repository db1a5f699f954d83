#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pfjss/engine.hpp"
#include "pfjss/instance.hpp"
#include "pfjss/rules.hpp"
#include "pfjss/stats.hpp"
#include "pfjss/validate.hpp"

namespace pfjss {

enum class Measure { Makespan, MeanFlow, MeanTardiness, MaxTardiness };
inline constexpr std::array<Measure, 4> kMeasures{Measure::Makespan, Measure::MeanFlow,
                                                  Measure::MeanTardiness, Measure::MaxTardiness};
std::string_view measure_name(Measure m);
double measure_value(const Metrics& m, Measure which);

struct InstanceSource {
  std::string name;   // used in report rows
  std::string path;   // empty for synthetic
  std::optional<SyntheticSpec> synthetic;
  std::uint64_t synthetic_seed = 1;
  std::string sidecar;  // empty: draw extensions from the ranges below
  Range due_range{0, 0};
  Range setup_range{0, 0};
  std::uint64_t extension_seed = 1;
};

struct ScenarioConfig {
  std::vector<InstanceSource> instances;
  std::vector<RuleId> rules;
  std::vector<ArrivalPattern> patterns;
  std::optional<Time> horizon;  // unset: total minimum work / machine count
  std::vector<std::uint64_t> seeds;
  McdmOptions mcdm = default_mcdm_options();
  SimulationOptions sim;

  // Weight sensitivity settings, read by weight_sweep.
  std::string sweep_criterion;
  std::vector<double> sweep_levels;
  RuleId sweep_rule = RuleId::C9;

  void check() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// INI-style text; relative paths resolve against `base_dir`.
ScenarioConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);

// Whitespace-separated lists; "all" expands to C1..C12 / the five patterns.
std::vector<RuleId> parse_rule_list(std::string_view text);
std::vector<ArrivalPattern> parse_pattern_list(std::string_view text);
// Seeds and inclusive ranges such as "1-10".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

ExtendedInstance load_instance(const InstanceSource& src);
/// Total minimum work divided by machine count.
Time default_horizon(const Instance& inst);

struct CellResult {
  std::string instance;
  ArrivalPattern pattern = ArrivalPattern::Static;
  RuleId rule = RuleId::C1;
  std::vector<std::uint64_t> seeds;
  std::vector<Metrics> runs;  // one per seed
  Metrics mean;
  std::array<double, 4> deviation{};  // percent above the best rule, per measure
  std::array<bool, 4> best{};
};

struct ExperimentReport {
  std::vector<CellResult> cells;  // instance-major, then pattern, then rule

  std::string csv() const;       // one row per cell with means, deviations, best flags
  std::string runs_csv() const;  // one row per (cell, seed)
};

/// Thrown when a simulated trace fails validation.
struct InfeasibleTrace : std::runtime_error {
  InfeasibleTrace(const std::string& what, ViolationReport r)
      : std::runtime_error(what), report(std::move(r)) {}
  ViolationReport report;
};

ExperimentReport run_experiment(const ScenarioConfig& config);
/// Rebuilds per-seed cells from runs_csv() output (means recomputed,
/// deviations and best flags left unset).
ExperimentReport parse_runs_csv(std::istream& in);

/// Target criterion gets `level`, the remaining 1 - level is shared equally.
CriteriaWeights equal_split_weights(const CriteriaWeights& base, std::string_view criterion,
                                    double level);

struct SweepRow {
  std::string instance;
  ArrivalPattern pattern = ArrivalPattern::Static;
  double level = 0;
  std::vector<double> weights;
  Metrics mean;
};

struct SweepReport {
  std::string criterion;
  std::vector<std::string> criteria;
  std::vector<SweepRow> rows;

  std::string csv() const;
};

SweepReport weight_sweep(const ScenarioConfig& config, std::string_view criterion,
                         std::span<const double> levels);
std::vector<double> default_sweep_levels();  // 0.1 .. 0.9

enum class Grouping { CdrPoolVsMcdm, PerRule };

struct StatsOutput {
  std::string anova_csv;  // Sum of Squares, df, Mean Square, F, Sig.
  std::string means_csv;  // per group per measure
  std::string ttest_csv;  // each MCDM against the CDR pool
};

StatsOutput compare_rules(const ExperimentReport& report, Grouping grouping = Grouping::CdrPoolVsMcdm);

struct GanttError : std::runtime_error {
  GanttError(const std::string& what, ViolationReport r)
      : std::runtime_error(what), report(std::move(r)) {}
  ViolationReport report;
};

std::string gantt_svg(const ScheduleTrace& trace, int machine_count);
std::string gantt_csv(const ScheduleTrace& trace);
/// Validates, then writes `<path_stem>.svg` and `<path_stem>.csv`.
void export_gantt(const ScheduleTrace& trace, const Instance& inst, const std::string& path_stem);

}  // namespace pfjss
