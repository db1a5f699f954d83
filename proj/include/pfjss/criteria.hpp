#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfjss/instance.hpp"

namespace pfjss {

enum class Direction { Cost, Benefit };

std::string_view direction_name(Direction d);
Direction parse_direction(std::string_view s);

// Job attributes the MCDM rules can rank on.
enum class Criterion { ProcessTime, DueDate, Operations, SetupTime, Strop };

std::string_view criterion_name(Criterion c);
std::optional<Criterion> criterion_from_name(std::string_view s);
// Process time, due date, number of operations, setup time, STROP.
std::vector<Criterion> standard_criteria();

// Estimate of an operation's duration before routing has picked a machine.
enum class WorkEstimate { Min, Mean };

struct JobState {
  JobId job_id = 0;
  Time arrival_time = 0;
  Time due_date = 0;
  int next_op = 0;            // 0-based index of the next unfinished operation
  int total_ops = 0;
  int remaining_ops = 0;
  Time remaining_work = 0;    // estimated work of unfinished operations
  Time next_op_estimate = 0;  // estimated work of the next operation alone
  Time total_work = 0;        // estimated work content of the whole job
  Time next_setup_estimate = 0;
  Time queue_entry_time = 0;
  bool completed = false;
};

JobState initial_job_state(const ExtendedInstance& inst, JobId id, Time arrival,
                           WorkEstimate est = WorkEstimate::Min);

Time estimate(const Operation& op, WorkEstimate est);

// Advances past the job's next operation; throws if already completed.
void complete_operation(JobState& state, const ExtendedInstance& inst,
                        WorkEstimate est = WorkEstimate::Min);

/// Slack per remaining operation, (due - now - remaining work) / remaining ops.
/// Negative for jobs that are already late.
double strop(const JobState& state, Time now);

struct FuzzyTriple {
  double l = 0, m = 0, u = 0;
};

struct CriterionWeight {
  std::string name;
  std::optional<FuzzyTriple> fuzzy;
  double crisp = 0;
  double normalized = 0;
  Direction direction = Direction::Cost;
};

struct CriteriaWeights {
  std::vector<CriterionWeight> items;

  std::size_t size() const { return items.size(); }
  std::vector<double> normalized() const;
  std::vector<Direction> directions() const;
  std::vector<std::string> names() const;
};

/// crisp = l + m + u, normalized = crisp / sum(crisp). Names default to the
/// standard criteria when the count matches, else c1..ck.
CriteriaWeights defuzzify_weights(std::span<const FuzzyTriple> fuzzy,
                                  std::span<const std::string> names = {});
CriteriaWeights crisp_weights(std::span<const double> crisp,
                              std::span<const std::string> names = {});
// Rescales normalized weights to sum to one.
void renormalize(CriteriaWeights& w);

struct DecisionMatrix {
  std::vector<JobId> rows;
  CriteriaWeights weights;  // one entry per column
  std::vector<double> values;  // row-major

  std::size_t row_count() const { return rows.size(); }
  std::size_t col_count() const { return weights.size(); }
  bool empty() const { return rows.empty(); }
  double at(std::size_t i, std::size_t j) const { return values[i * col_count() + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * col_count() + j]; }

  // Rectangular, unique row ids, finite values.
  void check() const;
};

DecisionMatrix make_matrix(std::vector<JobId> rows, const CriteriaWeights& w,
                           std::vector<std::vector<double>> values);

double criterion_value(Criterion c, const JobState& s, Time now);

/// One row per queued job, columns in weight order. An empty queue yields an
/// empty matrix.
DecisionMatrix build_decision_matrix(std::span<const JobState> queue, Time now,
                                     const CriteriaWeights& weights);

}  // namespace pfjss
