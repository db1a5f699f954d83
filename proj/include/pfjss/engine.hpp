#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfjss/criteria.hpp"
#include "pfjss/instance.hpp"
#include "pfjss/rules.hpp"

namespace pfjss {

enum class ArrivalPattern { Static, EqualInterval, Increasing, Decreasing, Random, Fixed };

std::string_view pattern_name(ArrivalPattern p);
ArrivalPattern parse_pattern(std::string_view s);
// The five generated patterns (excludes Fixed).
std::vector<ArrivalPattern> all_patterns();

struct ArrivalPlan {
  ArrivalPattern pattern = ArrivalPattern::Static;
  Time horizon = 0;
  std::vector<Time> times;  // times[j - 1] is job j's arrival
};

/// static: 0; equal: j t/n; increasing: t sqrt(j/n); decreasing: t (j/n)^3;
/// random: sorted Uniform[0, t] draws.
ArrivalPlan arrival_times(ArrivalPattern pattern, int n, Time horizon, std::uint64_t seed);
ArrivalPlan fixed_arrivals(std::vector<Time> times);

enum class EventKind { Arrival = 0, OperationComplete = 1 };

struct Event {
  Time time = 0;
  EventKind kind = EventKind::Arrival;
  std::uint64_t seq = 0;
  JobId job = 0;
  MachineId machine = 0;
};

/// Future-event list ordered by (time, kind, insertion sequence): arrivals
/// precede completions at equal times, FIFO within a kind.
class EventCalendar {
 public:
  void schedule(Time t, EventKind kind, JobId job, MachineId machine = 0);
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& peek() const { return heap_.top(); }
  Event pop();

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.kind != b.kind) return a.kind > b.kind;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

struct QueueEntry {
  JobId job = 0;
  Time ptime = 0;           // imminent operation time on this machine
  Time setup_estimate = 0;  // mean of the job's setup range
};

struct MachineState {
  MachineId id = 0;
  Time busy_until = 0;
  std::optional<std::pair<JobId, int>> in_service;  // (job, 0-based op)
  std::vector<QueueEntry> queue;
  Time busy_time = 0;

  bool idle() const { return !in_service.has_value(); }
  // Remaining in-service time plus queued work with mean setups.
  Time queue_time(Time now) const;
};

/// Compatible machine with the least estimated queue time; ties to the
/// lowest machine id.
MachineId route(const Operation& op, std::span<const MachineState> machines, Time now);

struct OperationRecord {
  JobId job = 0;
  int op = 0;  // 1-based
  MachineId machine = 0;
  Time setup_start = 0;
  Time start = 0;
  Time end = 0;

  friend bool operator==(const OperationRecord&, const OperationRecord&) = default;
};

struct JobRecord {
  JobId job = 0;
  Time arrival = 0;
  Time completion = 0;
};

struct ScheduleTrace {
  std::vector<OperationRecord> ops;  // in dispatch order
  std::vector<JobRecord> jobs;       // indexed by job id - 1
};

struct Metrics {
  Time makespan = 0;
  Time mean_flow = 0;
  Time mean_tardiness = 0;
  Time max_tardiness = 0;
  int late_jobs = 0;
};

enum class RerankScope { Machine, Global };

struct SimulationOptions {
  WorkEstimate work_estimate = WorkEstimate::Min;
  RerankScope scope = RerankScope::Machine;
};

struct RunResult {
  ScheduleTrace trace;
  Metrics metrics;
  std::vector<Time> machine_busy;  // per machine, setup + processing
};

double setup_draw(const ExtendedInstance& inst, std::uint64_t seed, JobId job, int op);

/// Non-delay simulation until the last operation completes.
RunResult run(const ExtendedInstance& inst, const RuleSpec& rule, const ArrivalPlan& plan,
              std::uint64_t seed, const SimulationOptions& opts = {});

struct PlanSpec {
  ArrivalPattern pattern = ArrivalPattern::Static;
  Time horizon = 0;
};

/// One run per seed; the seed drives both arrivals and setups, so different
/// rules see common random numbers.
std::vector<Metrics> replicate(const ExtendedInstance& inst, const RuleSpec& rule,
                               const PlanSpec& plan, std::span<const std::uint64_t> seeds,
                               const SimulationOptions& opts = {});

std::string trace_csv(const ScheduleTrace& trace);
ScheduleTrace parse_trace_csv(std::istream& in);
std::string arrival_csv(const ArrivalPlan& plan);
std::vector<Time> parse_arrival_csv(std::istream& in);

}  // namespace pfjss
