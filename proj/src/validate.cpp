#include "pfjss/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "pfjss/text.hpp"

namespace pfjss {

std::string_view constraint_name(Constraint c) {
  switch (c) {
    case Constraint::Assignment: return "assignment";
    case Constraint::Duration: return "duration";
    case Constraint::MachineOverlap: return "machine_overlap";
    case Constraint::Precedence: return "precedence";
    case Constraint::NonNegative: return "non_negative";
    case Constraint::Release: return "release";
    case Constraint::MakespanBound: return "makespan_bound";
  }
  return "?";
}

std::string ViolationReport::text() const {
  std::ostringstream out;
  if (violations.empty()) out << "feasible: no violations\n";
  for (const auto& v : violations) {
    out << constraint_name(v.constraint) << ": job " << v.job << " op " << v.op << " machine "
        << v.machine << ": " << v.detail << '\n';
  }
  for (const auto& n : notes) out << "note: " << n << '\n';
  return out.str();
}

std::string ViolationReport::csv() const {
  std::ostringstream out;
  out << "constraint,job,op,machine,detail\n";
  for (const auto& v : violations) {
    std::string d = v.detail;
    std::replace(d.begin(), d.end(), ',', ';');
    out << constraint_name(v.constraint) << ',' << v.job << ',' << v.op << ',' << v.machine << ','
        << d << '\n';
  }
  return out.str();
}

namespace {

bool before(Time a, Time b) {
  // a < b beyond rounding noise
  return a < b - 1e-9 * std::max(1.0, std::abs(b));
}

}  // namespace

ViolationReport validate(const ScheduleTrace& trace, const Instance& inst) {
  ViolationReport rep;
  auto add = [&](Constraint c, const OperationRecord& r, std::string d) {
    rep.violations.push_back({c, r.job, r.op, r.machine, std::move(d)});
  };

  for (const auto& r : trace.ops) {
    if (r.job < 1 || r.job > inst.job_count())
      throw TraceError("trace references unknown job " + std::to_string(r.job));
    if (r.op < 1 || r.op > static_cast<int>(inst.job(r.job).operations.size()))
      throw TraceError("trace references unknown operation " + std::to_string(r.op) + " of job " +
                       std::to_string(r.job));
    if (r.machine < 1 || r.machine > inst.machine_count)
      throw TraceError("trace references unknown machine " + std::to_string(r.machine));
  }
  if (trace.jobs.size() > static_cast<std::size_t>(inst.job_count()))
    throw TraceError("trace lists more jobs than the instance");

  // job -> op -> records
  std::map<std::pair<JobId, int>, std::vector<const OperationRecord*>> by_op;
  for (const auto& r : trace.ops) by_op[{r.job, r.op}].push_back(&r);

  for (const auto& job : inst.jobs)
    for (int k = 1; k <= static_cast<int>(job.operations.size()); ++k) {
      auto it = by_op.find({job.id, k});
      if (it == by_op.end()) {
        rep.violations.push_back({Constraint::Assignment, job.id, k, 0, "operation never executed"});
        continue;
      }
      if (it->second.size() > 1)
        add(Constraint::Assignment, *it->second[1],
            "operation executed " + std::to_string(it->second.size()) + " times");
    }

  Time makespan = 0;
  for (const auto& r : trace.ops) {
    const auto& op = inst.job(r.job).operations[static_cast<std::size_t>(r.op - 1)];
    auto p = op.ptime_on(r.machine);
    if (!p) {
      add(Constraint::Assignment, r, "machine is not in the operation's compatible set");
    } else if (std::abs((r.end - r.start) - *p) > 1e-9 * std::max(1.0, std::abs(r.end))) {
      add(Constraint::Duration, r,
          "processing lasts " + fmt_num(r.end - r.start) + ", expected " + fmt_num(*p));
    }
    if (r.setup_start < 0 || r.start < 0 || r.end < 0)
      add(Constraint::NonNegative, r, "negative time");
    if (before(r.start, r.setup_start)) add(Constraint::NonNegative, r, "start precedes setup start");
    if (before(r.end, r.start)) add(Constraint::NonNegative, r, "end precedes start");
    makespan = std::max(makespan, r.end);
  }

  std::vector<std::vector<const OperationRecord*>> per_machine(
      static_cast<std::size_t>(inst.machine_count));
  for (const auto& r : trace.ops) per_machine[static_cast<std::size_t>(r.machine - 1)].push_back(&r);
  for (auto& lane : per_machine) {
    std::sort(lane.begin(), lane.end(), [](const OperationRecord* a, const OperationRecord* b) {
      if (a->setup_start != b->setup_start) return a->setup_start < b->setup_start;
      return a->end < b->end;
    });
    Time busy_until = 0;
    const OperationRecord* holder = nullptr;
    for (const auto* r : lane) {
      if (holder && before(r->setup_start, busy_until))
        add(Constraint::MachineOverlap, *r,
            "overlaps job " + std::to_string(holder->job) + " op " + std::to_string(holder->op) +
                " until " + fmt_num(busy_until));
      if (!holder || r->end > busy_until) {
        busy_until = r->end;
        holder = r;
      }
    }
  }

  for (const auto& job : inst.jobs) {
    const OperationRecord* prev = nullptr;
    for (int k = 1; k <= static_cast<int>(job.operations.size()); ++k) {
      auto it = by_op.find({job.id, k});
      if (it == by_op.end()) {
        prev = nullptr;
        continue;
      }
      const auto* cur = it->second.front();
      if (prev && before(cur->setup_start, prev->end))
        add(Constraint::Precedence, *cur, "starts before op " + std::to_string(k - 1) +
                                              " ends at " + fmt_num(prev->end));
      if (k == 1 && static_cast<std::size_t>(job.id) <= trace.jobs.size()) {
        Time arrival = trace.jobs[static_cast<std::size_t>(job.id - 1)].arrival;
        if (before(cur->setup_start, arrival))
          add(Constraint::Release, *cur, "starts before arrival at " + fmt_num(arrival));
      }
      prev = cur;
    }
  }

  for (const auto& jr : trace.jobs) {
    if (jr.arrival < 0)
      rep.violations.push_back({Constraint::NonNegative, jr.job, 0, 0, "negative arrival"});
    int last = static_cast<int>(inst.job(jr.job).operations.size());
    auto it = by_op.find({jr.job, last});
    if (it != by_op.end() && std::abs(it->second.front()->end - jr.completion) >
                                 1e-9 * std::max(1.0, std::abs(jr.completion)))
      rep.violations.push_back({Constraint::MakespanBound, jr.job, last, 0,
                                "recorded completion " + fmt_num(jr.completion) +
                                    " differs from last operation end"});
    if (jr.completion > makespan)
      rep.violations.push_back(
          {Constraint::MakespanBound, jr.job, 0, 0, "completion exceeds makespan"});
  }

  auto flex = flexibility_report(inst);
  std::vector<int> used(static_cast<std::size_t>(inst.machine_count), 0);
  for (const auto& r : trace.ops) ++used[static_cast<std::size_t>(r.machine - 1)];
  for (int m = 1; m <= inst.machine_count; ++m)
    rep.notes.push_back("machine " + std::to_string(m) + " ran " +
                        std::to_string(used[static_cast<std::size_t>(m - 1)]) + " of " +
                        std::to_string(flex.machine_usage[static_cast<std::size_t>(m - 1)]) +
                        " compatible operations");
  rep.notes.push_back("flexibility ratio " + fmt_fixed(flex.ratio, 4));
  return rep;
}

Metrics metrics_oracle(const ScheduleTrace& trace, std::span<const Time> arrivals,
                       std::span<const Time> due_dates, std::span<const int> op_counts) {
  const std::size_t n = due_dates.size();
  if (arrivals.size() != n) throw std::invalid_argument("arrival and due-date counts differ");
  if (!op_counts.empty() && op_counts.size() != n)
    throw std::invalid_argument("op-count vector has the wrong length");
  std::vector<Time> completion(n, -1);
  std::vector<int> seen(n, 0);
  for (const auto& r : trace.ops) {
    if (r.job < 1 || static_cast<std::size_t>(r.job) > n)
      throw TraceError("trace references unknown job " + std::to_string(r.job));
    auto i = static_cast<std::size_t>(r.job - 1);
    completion[i] = std::max(completion[i], r.end);
    ++seen[i];
  }
  Metrics m;
  double flow = 0, tard = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i] == 0 || (!op_counts.empty() && seen[i] != op_counts[i]))
      throw std::invalid_argument("job " + std::to_string(i + 1) + " is incomplete in the trace");
    m.makespan = std::max(m.makespan, completion[i]);
    flow += completion[i] - arrivals[i];
    double t = std::max(0.0, completion[i] - due_dates[i]);
    tard += t;
    m.max_tardiness = std::max(m.max_tardiness, t);
    if (t > 0) ++m.late_jobs;
  }
  m.mean_flow = flow / static_cast<double>(n);
  m.mean_tardiness = tard / static_cast<double>(n);
  return m;
}

}  // namespace pfjss
