#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pfjss {

// Jobs and machines are 1-based everywhere.
using JobId = int;
using MachineId = int;
using Time = double;

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

struct Alternative {
  MachineId machine = 0;
  Time ptime = 0;

  friend bool operator==(const Alternative&, const Alternative&) = default;
};

struct Operation {
  std::vector<Alternative> alternatives;

  // nullopt when the machine cannot process this operation.
  std::optional<Time> ptime_on(MachineId m) const;
  Time min_ptime() const;
  Time mean_ptime() const;
  bool allows(MachineId m) const { return ptime_on(m).has_value(); }

  friend bool operator==(const Operation&, const Operation&) = default;
};

struct Job {
  JobId id = 0;
  std::vector<Operation> operations;

  friend bool operator==(const Job&, const Job&) = default;
};

struct Instance {
  int machine_count = 0;
  std::vector<Job> jobs;

  int job_count() const { return static_cast<int>(jobs.size()); }
  int operation_count() const;
  const Job& job(JobId id) const { return jobs.at(static_cast<std::size_t>(id - 1)); }

  // Throws std::invalid_argument describing the first broken invariant.
  void check() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Range {
  double lo = 0;
  double hi = 0;

  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }

  friend bool operator==(const Range&, const Range&) = default;
};

struct JobExtension {
  Time due_date = 0;
  Range setup;

  friend bool operator==(const JobExtension&, const JobExtension&) = default;
};

struct ExtendedInstance {
  Instance base;
  std::vector<JobExtension> extensions;  // indexed by job id - 1
  std::optional<std::vector<Time>> fixed_arrivals;

  const JobExtension& ext(JobId id) const {
    return extensions.at(static_cast<std::size_t>(id - 1));
  }
  void check() const;

  friend bool operator==(const ExtendedInstance&, const ExtendedInstance&) = default;
};

struct FlexibilityReport {
  std::vector<int> machine_usage;  // per machine: operations listing it
  double mean_alternatives = 0;
  double ratio = 0;                // mean_alternatives / m
};

/// Reads the flexible job-shop text format:
///   n m [avg-flex]
///   per job: op-count, then per op: alt-count (machine ptime)*
Instance parse_fjs(std::istream& in);
Instance parse_fjs(std::string_view text);
Instance load_fjs(const std::string& path);

std::string serialize_fjs(const Instance& inst);

ExtendedInstance attach_extensions(const Instance& inst, Range due_range, Range setup_range,
                                   std::uint64_t seed);

/// Sidecar CSV with header `job_id,due_date,setup_lo,setup_hi`.
ExtendedInstance attach_sidecar(const Instance& inst, std::istream& csv);
ExtendedInstance load_sidecar(const Instance& inst, const std::string& path);
std::string serialize_sidecar(const ExtendedInstance& inst);

struct IntRange {
  int lo = 1;
  int hi = 1;
};

struct SyntheticSpec {
  int jobs = 1;
  int machines = 1;
  IntRange ops{1, 1};
  IntRange alternatives{1, 1};
  IntRange ptime{1, 1};
  Range due_range{1, 1};
  Range setup_range{0, 0};
  // When set, per-job operation counts are drawn inside `ops` and then
  // nudged (still inside `ops`) until they sum to this total.
  std::optional<int> total_ops;
};

ExtendedInstance generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

FlexibilityReport flexibility_report(const Instance& inst);

struct NamedSpec {
  std::string name;
  SyntheticSpec spec;
};

/// Generator settings for synthetic stand-ins of the ten MK benchmark
/// instances: same n, m, operation total, processing-time range and
/// due-date/setup ranges; alternatives drawn from 1..min(m, flexibility).
std::vector<NamedSpec> mk_standin_specs();

}  // namespace pfjss
