#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pfjss/engine.hpp"
#include "pfjss/instance.hpp"

namespace pfjss {

enum class Constraint {
  Assignment,     // each operation exactly once, on a compatible machine
  Duration,       // end - start equals the chosen alternative's time
  MachineOverlap, // one operation per machine at a time
  Precedence,     // operation k starts after operation k-1 ends
  NonNegative,    // all times >= 0, setup start <= start
  Release,        // no work before the job arrives
  MakespanBound,  // every end <= makespan; completions match last ends
};

std::string_view constraint_name(Constraint c);

struct Violation {
  Constraint constraint;
  JobId job = 0;
  int op = 0;
  MachineId machine = 0;
  std::string detail;
};

struct ViolationReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes;  // informational, e.g. machine flexibility usage

  bool feasible() const { return violations.empty(); }
  std::string text() const;
  std::string csv() const;
};

// Trace references a job, operation or machine the instance lacks.
struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Checks a trace against the shop model directly on realized times.
ViolationReport validate(const ScheduleTrace& trace, const Instance& inst);

/// Aggregate measures computed from the trace alone. `op_counts`, when
/// given, lets the oracle reject traces missing operations.
Metrics metrics_oracle(const ScheduleTrace& trace, std::span<const Time> arrivals,
                       std::span<const Time> due_dates, std::span<const int> op_counts = {});

}  // namespace pfjss
