#include "pfjss/instance.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "pfjss/rng.hpp"
#include "pfjss/text.hpp"

namespace pfjss {

std::optional<Time> Operation::ptime_on(MachineId m) const {
  for (const auto& a : alternatives)
    if (a.machine == m) return a.ptime;
  return std::nullopt;
}

Time Operation::min_ptime() const {
  Time best = alternatives.at(0).ptime;
  for (const auto& a : alternatives) best = std::min(best, a.ptime);
  return best;
}

Time Operation::mean_ptime() const {
  Time s = 0;
  for (const auto& a : alternatives) s += a.ptime;
  return s / static_cast<Time>(alternatives.size());
}

int Instance::operation_count() const {
  int n = 0;
  for (const auto& j : jobs) n += static_cast<int>(j.operations.size());
  return n;
}

void Instance::check() const {
  if (jobs.empty()) throw std::invalid_argument("instance has no jobs");
  if (machine_count < 1) throw std::invalid_argument("instance has no machines");
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    auto tag = "job " + std::to_string(i + 1);
    if (job.id != static_cast<JobId>(i + 1)) throw std::invalid_argument(tag + ": id out of order");
    if (job.operations.empty()) throw std::invalid_argument(tag + ": no operations");
    for (std::size_t k = 0; k < job.operations.size(); ++k) {
      const auto& op = job.operations[k];
      auto otag = tag + " op " + std::to_string(k + 1);
      if (op.alternatives.empty()) throw std::invalid_argument(otag + ": no alternatives");
      std::set<MachineId> seen;
      for (const auto& a : op.alternatives) {
        if (a.machine < 1 || a.machine > machine_count)
          throw std::invalid_argument(otag + ": machine " + std::to_string(a.machine) +
                                      " out of range");
        if (!seen.insert(a.machine).second)
          throw std::invalid_argument(otag + ": duplicate machine " + std::to_string(a.machine));
        if (!(a.ptime > 0)) throw std::invalid_argument(otag + ": processing time must be > 0");
      }
    }
  }
}

void ExtendedInstance::check() const {
  base.check();
  if (extensions.size() != base.jobs.size())
    throw std::invalid_argument("extension count does not match job count");
  for (std::size_t i = 0; i < extensions.size(); ++i) {
    const auto& e = extensions[i];
    auto tag = "job " + std::to_string(i + 1);
    if (!(e.due_date > 0)) throw std::invalid_argument(tag + ": due date must be > 0");
    if (!(e.setup.lo >= 0 && e.setup.lo <= e.setup.hi))
      throw std::invalid_argument(tag + ": setup range must satisfy 0 <= lo <= hi");
  }
  if (fixed_arrivals && fixed_arrivals->size() != base.jobs.size())
    throw std::invalid_argument("fixed arrival count does not match job count");
}

namespace {

struct LineCursor {
  int line;
  std::vector<std::string> tokens;
  std::size_t pos = 0;

  bool done() const { return pos >= tokens.size(); }

  const std::string& next(const char* what) {
    if (done()) throw ParseError(line, std::string("unexpected end of line, expected ") + what);
    return tokens[pos++];
  }

  int next_int(const char* what) {
    const auto& tok = next(what);
    try {
      return parse_int(tok);
    } catch (const std::invalid_argument&) {
      throw ParseError(line, std::string("malformed ") + what + " '" + tok + "'");
    }
  }

  double next_double(const char* what) {
    const auto& tok = next(what);
    try {
      return parse_double(tok);
    } catch (const std::invalid_argument&) {
      throw ParseError(line, std::string("malformed ") + what + " '" + tok + "'");
    }
  }
};

}  // namespace

Instance parse_fjs(std::istream& in) {
  std::vector<LineCursor> lines;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto toks = split_ws(raw);
    if (!toks.empty()) lines.push_back({lineno, std::move(toks)});
  }
  if (lines.empty()) throw ParseError(1, "empty instance");

  auto& header = lines.front();
  Instance inst;
  int n = header.next_int("job count");
  inst.machine_count = header.next_int("machine count");
  if (n < 1) throw ParseError(header.line, "job count must be >= 1");
  if (inst.machine_count < 1) throw ParseError(header.line, "machine count must be >= 1");
  if (!header.done()) header.next_double("average flexibility");
  if (!header.done()) throw ParseError(header.line, "trailing tokens in header");

  if (static_cast<int>(lines.size()) - 1 < n)
    throw ParseError(lineno + 1, "expected " + std::to_string(n) + " job lines, found " +
                                     std::to_string(lines.size() - 1));
  if (static_cast<int>(lines.size()) - 1 > n)
    throw ParseError(lines[static_cast<std::size_t>(n) + 1].line,
                     "more job lines than the declared " + std::to_string(n));

  for (int j = 1; j <= n; ++j) {
    auto& cur = lines[static_cast<std::size_t>(j)];
    Job job;
    job.id = j;
    int ops = cur.next_int("operation count");
    if (ops < 1) throw ParseError(cur.line, "job " + std::to_string(j) + " has no operations");
    for (int k = 0; k < ops; ++k) {
      Operation op;
      int alts = cur.next_int("alternative count");
      if (alts < 1)
        throw ParseError(cur.line, "job " + std::to_string(j) + " op " + std::to_string(k + 1) +
                                       " has zero alternatives");
      for (int a = 0; a < alts; ++a) {
        Alternative alt;
        alt.machine = cur.next_int("machine index");
        alt.ptime = cur.next_double("processing time");
        if (alt.machine < 1 || alt.machine > inst.machine_count)
          throw ParseError(cur.line, "machine index " + std::to_string(alt.machine) +
                                         " out of range [1, " +
                                         std::to_string(inst.machine_count) + "]");
        if (!(alt.ptime > 0)) throw ParseError(cur.line, "processing time must be > 0");
        if (op.ptime_on(alt.machine))
          throw ParseError(cur.line, "duplicate machine " + std::to_string(alt.machine));
        op.alternatives.push_back(alt);
      }
      job.operations.push_back(std::move(op));
    }
    if (!cur.done())
      throw ParseError(cur.line, "job " + std::to_string(j) + " declares " + std::to_string(ops) +
                                     " operations but the line has " +
                                     std::to_string(cur.tokens.size() - cur.pos) +
                                     " extra tokens");
    inst.jobs.push_back(std::move(job));
  }
  return inst;
}

Instance parse_fjs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_fjs(in);
}

Instance load_fjs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance: " + path);
  return parse_fjs(in);
}

std::string serialize_fjs(const Instance& inst) {
  std::ostringstream out;
  auto flex = flexibility_report(inst);
  out << inst.job_count() << ' ' << inst.machine_count << ' ' << fmt_num(flex.mean_alternatives)
      << '\n';
  for (const auto& job : inst.jobs) {
    out << job.operations.size();
    for (const auto& op : job.operations) {
      out << "  " << op.alternatives.size();
      for (const auto& a : op.alternatives) out << ' ' << a.machine << ' ' << fmt_num(a.ptime);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

void check_range(Range r, const char* what) {
  if (r.lo < 0 || r.hi < 0) throw std::invalid_argument(std::string(what) + ": negative bound");
  if (r.lo > r.hi) throw std::invalid_argument(std::string(what) + ": lo > hi");
}

}  // namespace

ExtendedInstance attach_extensions(const Instance& inst, Range due_range, Range setup_range,
                                   std::uint64_t seed) {
  check_range(due_range, "due range");
  check_range(setup_range, "setup range");
  ExtendedInstance ext;
  ext.base = inst;
  Rng rng(stream_key(seed, {kDueDateStream}));
  for (std::size_t i = 0; i < inst.jobs.size(); ++i)
    ext.extensions.push_back({rng.uniform(due_range.lo, due_range.hi), setup_range});
  ext.check();
  return ext;
}

ExtendedInstance attach_sidecar(const Instance& inst, std::istream& csv) {
  ExtendedInstance ext;
  ext.base = inst;
  ext.extensions.resize(inst.jobs.size());
  std::vector<bool> seen(inst.jobs.size(), false);
  std::string raw;
  int lineno = 0;
  bool header = true;
  while (std::getline(csv, raw)) {
    ++lineno;
    if (trim(raw).empty()) continue;
    auto cells = split_csv_line(raw);
    if (header) {
      header = false;
      if (!cells.empty() && to_lower(cells[0]) == "job_id") continue;
    }
    if (cells.size() != 4) throw ParseError(lineno, "expected 4 columns");
    try {
      int id = parse_int(cells[0]);
      if (id < 1 || id > inst.job_count())
        throw ParseError(lineno, "job id " + cells[0] + " out of range");
      auto& e = ext.extensions[static_cast<std::size_t>(id - 1)];
      e.due_date = parse_double(cells[1]);
      e.setup = {parse_double(cells[2]), parse_double(cells[3])};
      if (seen[static_cast<std::size_t>(id - 1)]) throw ParseError(lineno, "duplicate job id");
      seen[static_cast<std::size_t>(id - 1)] = true;
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ParseError(lineno, "sidecar lacks job " + std::to_string(i + 1));
  ext.check();
  return ext;
}

ExtendedInstance load_sidecar(const Instance& inst, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sidecar: " + path);
  return attach_sidecar(inst, in);
}

std::string serialize_sidecar(const ExtendedInstance& inst) {
  std::ostringstream out;
  out << "job_id,due_date,setup_lo,setup_hi\n";
  for (std::size_t i = 0; i < inst.extensions.size(); ++i) {
    const auto& e = inst.extensions[i];
    out << i + 1 << ',' << fmt_num(e.due_date) << ',' << fmt_num(e.setup.lo) << ','
        << fmt_num(e.setup.hi) << '\n';
  }
  return out.str();
}

ExtendedInstance generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  auto bad = [](const std::string& w) { throw std::invalid_argument("synthetic spec: " + w); };
  if (spec.jobs < 1 || spec.machines < 1) bad("jobs and machines must be >= 1");
  if (spec.ops.lo < 1 || spec.ops.lo > spec.ops.hi) bad("invalid ops range");
  if (spec.alternatives.lo < 1 || spec.alternatives.lo > spec.alternatives.hi)
    bad("invalid alternatives range");
  if (spec.alternatives.hi > spec.machines) bad("alternatives upper bound exceeds machine count");
  if (spec.ptime.lo < 1 || spec.ptime.lo > spec.ptime.hi) bad("invalid ptime range");
  check_range(spec.due_range, "due range");
  check_range(spec.setup_range, "setup range");
  if (spec.total_ops && (*spec.total_ops < spec.jobs * spec.ops.lo ||
                         *spec.total_ops > spec.jobs * spec.ops.hi))
    bad("total_ops unreachable inside the ops range");

  Rng rng(stream_key(seed, {kGeneratorStream}));
  std::vector<int> op_counts(static_cast<std::size_t>(spec.jobs));
  for (auto& c : op_counts) c = rng.uniform_int(spec.ops.lo, spec.ops.hi);
  if (spec.total_ops) {
    int total = std::accumulate(op_counts.begin(), op_counts.end(), 0);
    while (total != *spec.total_ops) {
      auto j = static_cast<std::size_t>(rng.uniform_int(0, spec.jobs - 1));
      if (total < *spec.total_ops && op_counts[j] < spec.ops.hi) {
        ++op_counts[j];
        ++total;
      } else if (total > *spec.total_ops && op_counts[j] > spec.ops.lo) {
        --op_counts[j];
        --total;
      }
    }
  }

  Instance inst;
  inst.machine_count = spec.machines;
  std::vector<MachineId> pool(static_cast<std::size_t>(spec.machines));
  for (int j = 1; j <= spec.jobs; ++j) {
    Job job;
    job.id = j;
    for (int k = 0; k < op_counts[static_cast<std::size_t>(j - 1)]; ++k) {
      std::iota(pool.begin(), pool.end(), 1);
      int alts = rng.uniform_int(spec.alternatives.lo, spec.alternatives.hi);
      Operation op;
      // Partial Fisher-Yates picks `alts` distinct machines.
      for (int a = 0; a < alts; ++a) {
        auto pick = static_cast<std::size_t>(rng.uniform_int(a, spec.machines - 1));
        std::swap(pool[static_cast<std::size_t>(a)], pool[pick]);
        op.alternatives.push_back(
            {pool[static_cast<std::size_t>(a)], static_cast<Time>(rng.uniform_int(
                                                    spec.ptime.lo, spec.ptime.hi))});
      }
      std::sort(op.alternatives.begin(), op.alternatives.end(),
                [](const Alternative& x, const Alternative& y) { return x.machine < y.machine; });
      job.operations.push_back(std::move(op));
    }
    inst.jobs.push_back(std::move(job));
  }
  return attach_extensions(inst, spec.due_range, spec.setup_range, seed);
}

FlexibilityReport flexibility_report(const Instance& inst) {
  FlexibilityReport r;
  r.machine_usage.assign(static_cast<std::size_t>(inst.machine_count), 0);
  std::size_t ops = 0, alts = 0;
  for (const auto& job : inst.jobs)
    for (const auto& op : job.operations) {
      ++ops;
      alts += op.alternatives.size();
      for (const auto& a : op.alternatives) ++r.machine_usage[static_cast<std::size_t>(a.machine - 1)];
    }
  r.mean_alternatives = ops ? static_cast<double>(alts) / static_cast<double>(ops) : 0.0;
  r.ratio = r.mean_alternatives / inst.machine_count;
  return r;
}

std::vector<NamedSpec> mk_standin_specs() {
  struct Row {
    int n, m, total, ops_lo, ops_hi, flex, p_lo, p_hi;
    double d_lo, d_hi, s_lo, s_hi;
  };
  // MK8 lists 5-10 operations per job but 225 in total; 20 jobs need 10-14.
  const Row rows[] = {
      {10, 6, 55, 5, 7, 3, 1, 7, 16, 42, 0.35, 1.14},
      {10, 6, 58, 5, 7, 6, 1, 7, 20, 48, 0.54, 1.68},
      {15, 8, 150, 10, 10, 5, 1, 20, 42, 84, 6.24, 10.23},
      {15, 8, 90, 3, 10, 3, 1, 10, 21, 93, 3.42, 10.55},
      {15, 4, 106, 5, 10, 2, 5, 10, 53, 107, 8.71, 17.74},
      {10, 15, 150, 15, 15, 5, 1, 10, 64, 116, 5.92, 12.48},
      {20, 5, 100, 5, 5, 5, 1, 20, 80, 130, 3.62, 13.27},
      {20, 10, 225, 10, 14, 2, 5, 20, 76, 148, 6.45, 16.34},
      {20, 10, 240, 10, 15, 5, 5, 20, 80, 154, 5.78, 18.62},
      {20, 15, 240, 10, 15, 5, 5, 20, 84, 162, 8.74, 20.45},
  };
  std::vector<NamedSpec> out;
  int k = 1;
  for (const auto& r : rows) {
    SyntheticSpec s;
    s.jobs = r.n;
    s.machines = r.m;
    s.ops = {r.ops_lo, r.ops_hi};
    s.alternatives = {1, std::min(r.m, r.flex)};
    s.ptime = {r.p_lo, r.p_hi};
    s.due_range = {r.d_lo, r.d_hi};
    s.setup_range = {r.s_lo, r.s_hi};
    s.total_ops = r.total;
    out.push_back({(k < 10 ? "mk0" : "mk") + std::to_string(k), s});
    ++k;
  }
  return out;
}

}  // namespace pfjss
