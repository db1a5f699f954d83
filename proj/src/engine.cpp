#include "pfjss/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pfjss/rng.hpp"
#include "pfjss/text.hpp"

namespace pfjss {

std::string_view pattern_name(ArrivalPattern p) {
  switch (p) {
    case ArrivalPattern::Static: return "static";
    case ArrivalPattern::EqualInterval: return "equal";
    case ArrivalPattern::Increasing: return "increasing";
    case ArrivalPattern::Decreasing: return "decreasing";
    case ArrivalPattern::Random: return "random";
    case ArrivalPattern::Fixed: return "fixed";
  }
  return "?";
}

ArrivalPattern parse_pattern(std::string_view s) {
  auto v = to_lower(trim(s));
  for (auto p : {ArrivalPattern::Static, ArrivalPattern::EqualInterval, ArrivalPattern::Increasing,
                 ArrivalPattern::Decreasing, ArrivalPattern::Random, ArrivalPattern::Fixed})
    if (pattern_name(p) == v) return p;
  if (v == "equal-interval" || v == "equal_interval") return ArrivalPattern::EqualInterval;
  throw std::invalid_argument("unknown arrival pattern '" + std::string(s) + "'");
}

std::vector<ArrivalPattern> all_patterns() {
  return {ArrivalPattern::Static, ArrivalPattern::EqualInterval, ArrivalPattern::Increasing,
          ArrivalPattern::Decreasing, ArrivalPattern::Random};
}

ArrivalPlan arrival_times(ArrivalPattern pattern, int n, Time horizon, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("arrival_times: n must be >= 1");
  if (pattern == ArrivalPattern::Fixed)
    throw std::invalid_argument("arrival_times: fixed plans come from fixed_arrivals()");
  if (pattern != ArrivalPattern::Static && !(horizon > 0))
    throw std::invalid_argument("arrival_times: dynamic patterns need a horizon > 0");
  ArrivalPlan plan;
  plan.pattern = pattern;
  plan.horizon = pattern == ArrivalPattern::Static ? 0 : horizon;
  plan.times.resize(static_cast<std::size_t>(n), 0.0);
  const double nn = n;
  for (int j = 1; j <= n; ++j) {
    double f = j / nn;
    auto& a = plan.times[static_cast<std::size_t>(j - 1)];
    switch (pattern) {
      case ArrivalPattern::EqualInterval: a = j * (horizon / nn); break;
      case ArrivalPattern::Increasing: a = horizon * std::sqrt(f); break;
      case ArrivalPattern::Decreasing: a = horizon * f * f * f; break;
      default: break;
    }
  }
  if (pattern == ArrivalPattern::Random) {
    Rng rng(stream_key(seed, {kArrivalStream}));
    for (auto& a : plan.times) a = rng.uniform(0.0, horizon);
    std::sort(plan.times.begin(), plan.times.end());
  }
  return plan;
}

ArrivalPlan fixed_arrivals(std::vector<Time> times) {
  for (double t : times)
    if (!(t >= 0) || !std::isfinite(t)) throw std::invalid_argument("arrival times must be >= 0");
  ArrivalPlan plan;
  plan.pattern = ArrivalPattern::Fixed;
  if (!times.empty()) plan.horizon = *std::max_element(times.begin(), times.end());
  plan.times = std::move(times);
  return plan;
}

void EventCalendar::schedule(Time t, EventKind kind, JobId job, MachineId machine) {
  heap_.push({t, kind, next_seq_++, job, machine});
}

Event EventCalendar::pop() {
  if (heap_.empty()) throw std::logic_error("pop on empty event calendar");
  Event e = heap_.top();
  heap_.pop();
  return e;
}

Time MachineState::queue_time(Time now) const {
  Time t = std::max(0.0, busy_until - now);
  for (const auto& q : queue) t += q.ptime + q.setup_estimate;
  return t;
}

MachineId route(const Operation& op, std::span<const MachineState> machines, Time now) {
  MachineId best = 0;
  Time best_load = std::numeric_limits<Time>::infinity();
  for (const auto& alt : op.alternatives) {
    const auto& m = machines[static_cast<std::size_t>(alt.machine - 1)];
    Time load = m.queue_time(now);
    if (load < best_load || (load == best_load && alt.machine < best)) {
      best = alt.machine;
      best_load = load;
    }
  }
  if (best == 0) throw std::invalid_argument("route: operation has no alternatives");
  return best;
}

double setup_draw(const ExtendedInstance& inst, std::uint64_t seed, JobId job, int op) {
  const auto& r = inst.ext(job).setup;
  Rng rng(stream_key(seed, {kSetupStream, static_cast<std::uint64_t>(job),
                            static_cast<std::uint64_t>(op)}));
  return rng.uniform(r.lo, r.hi);
}

namespace {

class Simulation {
 public:
  Simulation(const ExtendedInstance& inst, const RuleSpec& rule, const ArrivalPlan& plan,
             std::uint64_t seed, const SimulationOptions& opts)
      : inst_(inst), rule_(rule), seed_(seed), opts_(opts) {
    const int n = inst.base.job_count();
    if (static_cast<int>(plan.times.size()) != n)
      throw std::invalid_argument("arrival plan size does not match job count");
    for (int m = 1; m <= inst.base.machine_count; ++m) {
      MachineState ms;
      ms.id = m;
      machines_.push_back(std::move(ms));
    }
    for (int j = 1; j <= n; ++j) {
      Time a = plan.times[static_cast<std::size_t>(j - 1)];
      if (!(a >= 0)) throw std::invalid_argument("negative arrival time");
      states_.push_back(initial_job_state(inst, j, a, opts.work_estimate));
      trace_.jobs.push_back({j, a, 0});
      calendar_.schedule(a, EventKind::Arrival, j);
    }
  }

  RunResult execute() {
    while (!calendar_.empty()) {
      const Time now = calendar_.peek().time;
      while (!calendar_.empty() && calendar_.peek().time == now) handle(calendar_.pop());
      dispatch(now);
    }
    RunResult r;
    r.trace = std::move(trace_);
    for (const auto& m : machines_) r.machine_busy.push_back(m.busy_time);
    r.metrics = metrics(r.trace);
    return r;
  }

 private:
  JobState& state(JobId j) { return states_[static_cast<std::size_t>(j - 1)]; }
  MachineState& machine(MachineId m) { return machines_[static_cast<std::size_t>(m - 1)]; }

  void handle(const Event& e) {
    if (e.kind == EventKind::Arrival) {
      enqueue(e.job, e.time);
      return;
    }
    auto& m = machine(e.machine);
    m.in_service.reset();
    auto& s = state(e.job);
    complete_operation(s, inst_, opts_.work_estimate);
    if (s.completed)
      trace_.jobs[static_cast<std::size_t>(e.job - 1)].completion = e.time;
    else
      enqueue(e.job, e.time);
  }

  void enqueue(JobId j, Time now) {
    auto& s = state(j);
    const auto& op = inst_.base.job(j).operations[static_cast<std::size_t>(s.next_op)];
    MachineId target = route(op, machines_, now);
    s.queue_entry_time = now;
    machine(target).queue.push_back({j, *op.ptime_on(target), s.next_setup_estimate});
  }

  Ranking rank_queue(std::span<const QueueEntry> entries, Time now) {
    std::vector<JobState> snap;
    std::vector<Time> ptimes;
    for (const auto& q : entries) {
      snap.push_back(state(q.job));
      ptimes.push_back(q.ptime);
    }
    return prioritize(rule_, snap, ptimes, now);
  }

  void dispatch(Time now) {
    if (opts_.scope == RerankScope::Global) {
      std::vector<QueueEntry> all;
      for (const auto& m : machines_)
        if (m.idle()) all.insert(all.end(), m.queue.begin(), m.queue.end());
      if (all.empty()) return;
      auto global = rank_queue(all, now);
      for (auto& m : machines_) {
        if (!m.idle() || m.queue.empty()) continue;
        auto best = std::min_element(m.queue.begin(), m.queue.end(),
                                     [&](const QueueEntry& a, const QueueEntry& b) {
                                       return global.rank_of(a.job) < global.rank_of(b.job);
                                     });
        start(m, best, now);
      }
      return;
    }
    for (auto& m : machines_) {
      if (!m.idle() || m.queue.empty()) continue;
      JobId pick = rank_queue(m.queue, now).top();
      auto it = std::find_if(m.queue.begin(), m.queue.end(),
                             [pick](const QueueEntry& q) { return q.job == pick; });
      start(m, it, now);
    }
  }

  void start(MachineState& m, std::vector<QueueEntry>::iterator it, Time now) {
    QueueEntry q = *it;
    m.queue.erase(it);
    auto& s = state(q.job);
    Time setup = setup_draw(inst_, seed_, q.job, s.next_op);
    OperationRecord rec{q.job, s.next_op + 1, m.id, now, now + setup, 0};
    rec.end = rec.start + q.ptime;
    trace_.ops.push_back(rec);
    m.in_service = {q.job, s.next_op};
    m.busy_until = rec.end;
    m.busy_time += rec.end - rec.setup_start;
    calendar_.schedule(rec.end, EventKind::OperationComplete, q.job, m.id);
  }

  Metrics metrics(const ScheduleTrace& t) const {
    Metrics mt;
    double flow = 0, tard = 0;
    for (const auto& j : t.jobs) {
      mt.makespan = std::max(mt.makespan, j.completion);
      flow += j.completion - j.arrival;
      double late = std::max(0.0, j.completion - inst_.ext(j.job).due_date);
      tard += late;
      mt.max_tardiness = std::max(mt.max_tardiness, late);
      if (late > 0) ++mt.late_jobs;
    }
    const double n = static_cast<double>(t.jobs.size());
    mt.mean_flow = flow / n;
    mt.mean_tardiness = tard / n;
    return mt;
  }

  const ExtendedInstance& inst_;
  const RuleSpec& rule_;
  std::uint64_t seed_;
  SimulationOptions opts_;
  std::vector<MachineState> machines_;
  std::vector<JobState> states_;
  EventCalendar calendar_;
  ScheduleTrace trace_;
};

}  // namespace

RunResult run(const ExtendedInstance& inst, const RuleSpec& rule, const ArrivalPlan& plan,
              std::uint64_t seed, const SimulationOptions& opts) {
  return Simulation(inst, rule, plan, seed, opts).execute();
}

std::vector<Metrics> replicate(const ExtendedInstance& inst, const RuleSpec& rule,
                               const PlanSpec& plan, std::span<const std::uint64_t> seeds,
                               const SimulationOptions& opts) {
  if (seeds.empty()) throw std::invalid_argument("replicate: need at least one seed");
  std::vector<Metrics> out;
  for (auto seed : seeds) {
    ArrivalPlan p;
    if (plan.pattern == ArrivalPattern::Fixed) {
      if (!inst.fixed_arrivals) throw std::invalid_argument("instance has no fixed arrivals");
      p = fixed_arrivals(*inst.fixed_arrivals);
    } else {
      p = arrival_times(plan.pattern, inst.base.job_count(), plan.horizon, seed);
    }
    out.push_back(run(inst, rule, p, seed, opts).metrics);
  }
  return out;
}

std::string trace_csv(const ScheduleTrace& trace) {
  std::ostringstream out;
  out << "job,op,machine,setup_start,start,end\n";
  for (const auto& r : trace.ops)
    out << r.job << ',' << r.op << ',' << r.machine << ',' << fmt_num(r.setup_start) << ','
        << fmt_num(r.start) << ',' << fmt_num(r.end) << '\n';
  return out.str();
}

ScheduleTrace parse_trace_csv(std::istream& in) {
  ScheduleTrace t;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (trim(raw).empty()) continue;
    auto cells = split_csv_line(raw);
    if (lineno == 1 && !cells.empty() && to_lower(cells[0]) == "job") continue;
    if (cells.size() != 6) throw ParseError(lineno, "trace row needs 6 columns");
    try {
      OperationRecord r{parse_int(cells[0]),        parse_int(cells[1]),
                        parse_int(cells[2]),        parse_double(cells[3]),
                        parse_double(cells[4]),     parse_double(cells[5])};
      if (r.job < 1) throw ParseError(lineno, "job id must be >= 1");
      t.ops.push_back(r);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
  }
  int n = 0;
  for (const auto& r : t.ops) n = std::max(n, r.job);
  for (int j = 1; j <= n; ++j) t.jobs.push_back({j, 0, 0});
  for (const auto& r : t.ops) {
    auto& jr = t.jobs[static_cast<std::size_t>(r.job - 1)];
    jr.completion = std::max(jr.completion, r.end);
  }
  return t;
}

std::string arrival_csv(const ArrivalPlan& plan) {
  std::ostringstream out;
  out << "job,arrival\n";
  for (std::size_t i = 0; i < plan.times.size(); ++i)
    out << i + 1 << ',' << fmt_num(plan.times[i]) << '\n';
  return out.str();
}

std::vector<Time> parse_arrival_csv(std::istream& in) {
  std::vector<std::pair<int, Time>> rows;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (trim(raw).empty()) continue;
    auto cells = split_csv_line(raw);
    if (lineno == 1 && !cells.empty() && to_lower(cells[0]) == "job") continue;
    if (cells.size() != 2) throw ParseError(lineno, "arrival row needs 2 columns");
    try {
      rows.emplace_back(parse_int(cells[0]), parse_double(cells[1]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
  }
  std::vector<Time> out(rows.size(), -1);
  for (auto [j, a] : rows) {
    if (j < 1 || j > static_cast<int>(rows.size()) || out[static_cast<std::size_t>(j - 1)] >= 0)
      throw std::invalid_argument("arrival file must list jobs 1..n exactly once");
    out[static_cast<std::size_t>(j - 1)] = a;
  }
  return out;
}

}  // namespace pfjss
