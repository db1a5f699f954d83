#include "pfjss/criteria.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "pfjss/text.hpp"

namespace pfjss {

std::string_view direction_name(Direction d) { return d == Direction::Cost ? "cost" : "benefit"; }

Direction parse_direction(std::string_view s) {
  auto v = to_lower(s);
  if (v == "cost" || v == "min") return Direction::Cost;
  if (v == "benefit" || v == "max") return Direction::Benefit;
  throw std::invalid_argument("unknown direction '" + std::string(s) + "'");
}

std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::ProcessTime: return "process_time";
    case Criterion::DueDate: return "due_date";
    case Criterion::Operations: return "operations";
    case Criterion::SetupTime: return "setup_time";
    case Criterion::Strop: return "strop";
  }
  return "?";
}

std::optional<Criterion> criterion_from_name(std::string_view s) {
  for (auto c : standard_criteria())
    if (criterion_name(c) == to_lower(s)) return c;
  return std::nullopt;
}

std::vector<Criterion> standard_criteria() {
  return {Criterion::ProcessTime, Criterion::DueDate, Criterion::Operations, Criterion::SetupTime,
          Criterion::Strop};
}

Time estimate(const Operation& op, WorkEstimate est) {
  return est == WorkEstimate::Min ? op.min_ptime() : op.mean_ptime();
}

JobState initial_job_state(const ExtendedInstance& inst, JobId id, Time arrival, WorkEstimate est) {
  const auto& job = inst.base.job(id);
  const auto& ext = inst.ext(id);
  JobState s;
  s.job_id = id;
  s.arrival_time = arrival;
  s.due_date = ext.due_date;
  s.total_ops = static_cast<int>(job.operations.size());
  s.remaining_ops = s.total_ops;
  for (const auto& op : job.operations) s.total_work += estimate(op, est);
  s.remaining_work = s.total_work;
  s.next_op_estimate = estimate(job.operations.front(), est);
  s.next_setup_estimate = ext.setup.mid();
  s.queue_entry_time = arrival;
  return s;
}

void complete_operation(JobState& s, const ExtendedInstance& inst, WorkEstimate est) {
  if (s.completed || s.remaining_ops == 0)
    throw std::logic_error("complete_operation on a finished job");
  const auto& op = inst.base.job(s.job_id).operations.at(static_cast<std::size_t>(s.next_op));
  s.remaining_work -= estimate(op, est);
  ++s.next_op;
  --s.remaining_ops;
  if (s.remaining_ops == 0) {
    s.remaining_work = 0;  // absorb rounding residue
    s.next_op_estimate = 0;
    s.completed = true;
    return;
  }
  if (s.remaining_work < 0) s.remaining_work = 0;
  s.next_op_estimate = estimate(
      inst.base.job(s.job_id).operations.at(static_cast<std::size_t>(s.next_op)), est);
}

double strop(const JobState& s, Time now) {
  if (s.remaining_ops <= 0) throw std::invalid_argument("strop: job has no remaining operations");
  return (s.due_date - now - s.remaining_work) / s.remaining_ops;
}

std::vector<double> CriteriaWeights::normalized() const {
  std::vector<double> out;
  for (const auto& i : items) out.push_back(i.normalized);
  return out;
}

std::vector<Direction> CriteriaWeights::directions() const {
  std::vector<Direction> out;
  for (const auto& i : items) out.push_back(i.direction);
  return out;
}

std::vector<std::string> CriteriaWeights::names() const {
  std::vector<std::string> out;
  for (const auto& i : items) out.push_back(i.name);
  return out;
}

namespace {

std::string default_name(std::size_t j, std::size_t k, std::span<const std::string> names) {
  if (!names.empty()) return names[j];
  if (k == 5) return std::string(criterion_name(standard_criteria()[j]));
  return "c" + std::to_string(j + 1);
}

}  // namespace

void renormalize(CriteriaWeights& w) {
  double sum = 0;
  for (const auto& i : w.items) sum += i.crisp;
  if (!(sum > 0)) throw std::invalid_argument("criterion weights sum to zero");
  for (auto& i : w.items) i.normalized = i.crisp / sum;
}

CriteriaWeights defuzzify_weights(std::span<const FuzzyTriple> fuzzy,
                                  std::span<const std::string> names) {
  if (!names.empty() && names.size() != fuzzy.size())
    throw std::invalid_argument("weight names do not match triple count");
  CriteriaWeights w;
  for (std::size_t j = 0; j < fuzzy.size(); ++j) {
    const auto& t = fuzzy[j];
    if (!(t.l <= t.m && t.m <= t.u))
      throw std::invalid_argument("fuzzy triple " + std::to_string(j + 1) +
                                  " is not ordered l <= m <= u");
    if (t.l < 0) throw std::invalid_argument("fuzzy triple has a negative bound");
    w.items.push_back({default_name(j, fuzzy.size(), names), t, t.l + t.m + t.u, 0,
                       Direction::Cost});
  }
  renormalize(w);
  return w;
}

CriteriaWeights crisp_weights(std::span<const double> crisp, std::span<const std::string> names) {
  if (!names.empty() && names.size() != crisp.size())
    throw std::invalid_argument("weight names do not match weight count");
  CriteriaWeights w;
  for (std::size_t j = 0; j < crisp.size(); ++j) {
    if (!(crisp[j] >= 0) || !std::isfinite(crisp[j]))
      throw std::invalid_argument("crisp weights must be finite and >= 0");
    w.items.push_back({default_name(j, crisp.size(), names), std::nullopt, crisp[j], 0,
                       Direction::Cost});
  }
  renormalize(w);
  return w;
}

void DecisionMatrix::check() const {
  if (values.size() != rows.size() * col_count())
    throw std::invalid_argument("decision matrix is not rectangular");
  std::set<JobId> ids(rows.begin(), rows.end());
  if (ids.size() != rows.size()) throw std::invalid_argument("decision matrix has duplicate rows");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("decision matrix has a non-finite value");
}

DecisionMatrix make_matrix(std::vector<JobId> rows, const CriteriaWeights& w,
                           std::vector<std::vector<double>> values) {
  DecisionMatrix m;
  m.rows = std::move(rows);
  m.weights = w;
  if (values.size() != m.rows.size()) throw std::invalid_argument("row count mismatch");
  for (const auto& r : values) {
    if (r.size() != w.size()) throw std::invalid_argument("column count mismatch");
    m.values.insert(m.values.end(), r.begin(), r.end());
  }
  m.check();
  return m;
}

double criterion_value(Criterion c, const JobState& s, Time now) {
  switch (c) {
    case Criterion::ProcessTime: return s.remaining_work;
    case Criterion::DueDate: return s.due_date;
    case Criterion::Operations: return s.remaining_ops;
    case Criterion::SetupTime: return s.next_setup_estimate;
    case Criterion::Strop: return strop(s, now);
  }
  return 0;
}

DecisionMatrix build_decision_matrix(std::span<const JobState> queue, Time now,
                                     const CriteriaWeights& weights) {
  std::vector<Criterion> cols;
  for (const auto& item : weights.items) {
    auto c = criterion_from_name(item.name);
    if (!c) throw std::invalid_argument("no job attribute for criterion '" + item.name + "'");
    cols.push_back(*c);
  }
  DecisionMatrix m;
  m.weights = weights;
  for (const auto& s : queue) {
    m.rows.push_back(s.job_id);
    for (auto c : cols) m.values.push_back(criterion_value(c, s, now));
  }
  m.check();
  return m;
}

}  // namespace pfjss
