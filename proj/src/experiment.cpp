#include "pfjss/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pfjss/text.hpp"

namespace pfjss {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::Makespan: return "makespan";
    case Measure::MeanFlow: return "mean_flow";
    case Measure::MeanTardiness: return "mean_tardiness";
    case Measure::MaxTardiness: return "max_tardiness";
  }
  return "?";
}

double measure_value(const Metrics& m, Measure which) {
  switch (which) {
    case Measure::Makespan: return m.makespan;
    case Measure::MeanFlow: return m.mean_flow;
    case Measure::MeanTardiness: return m.mean_tardiness;
    case Measure::MaxTardiness: return m.max_tardiness;
  }
  return 0;
}

void ScenarioConfig::check() const {
  if (instances.empty()) throw ConfigError("config names no instance");
  if (rules.empty()) throw ConfigError("config names no rule");
  if (patterns.empty()) throw ConfigError("config names no arrival pattern");
  if (seeds.empty()) throw ConfigError("config names no seed");
  if (horizon && !(*horizon > 0)) throw ConfigError("horizon must be positive");
  if (mcdm.weights.size() == 0) throw ConfigError("config has no criteria weights");
}

namespace {

std::vector<double> numbers(std::string_view text) {
  std::vector<double> out;
  for (auto& tok : split_ws(text)) out.push_back(parse_double(tok));
  return out;
}

Range range_value(const std::string& key, std::string_view text) {
  auto v = numbers(text);
  if (v.size() != 2 || v[0] > v[1]) throw ConfigError(key + ": expected 'lo hi'");
  return {v[0], v[1]};
}

IntRange int_range_value(const std::string& key, std::string_view text) {
  auto toks = split_ws(text);
  if (toks.size() == 1) toks.push_back(toks[0]);
  if (toks.size() != 2) throw ConfigError(key + ": expected 'lo hi'");
  IntRange r{parse_int(toks[0]), parse_int(toks[1])};
  if (r.lo > r.hi) throw ConfigError(key + ": lo exceeds hi");
  return r;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (auto& tok : split_ws(text)) {
    auto dash = tok.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(static_cast<std::uint64_t>(std::stoull(tok)));
      continue;
    }
    auto lo = std::stoull(tok.substr(0, dash)), hi = std::stoull(tok.substr(dash + 1));
    if (lo > hi) throw ConfigError("seed range '" + tok + "' is reversed");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

std::vector<RuleId> parse_rule_list(std::string_view text) {
  std::vector<RuleId> out;
  for (auto& tok : split_ws(text)) {
    auto low = to_lower(tok);
    if (low == "all") {
      auto r = study_rules();
      out.insert(out.end(), r.begin(), r.end());
    } else if (low == "baselines") {
      out.insert(out.end(), {RuleId::SPT, RuleId::EDD, RuleId::FIFO});
    } else if (auto id = rule_from_name(tok)) {
      out.push_back(*id);
    } else {
      throw ConfigError("unknown rule '" + tok + "'");
    }
  }
  return out;
}

std::vector<ArrivalPattern> parse_pattern_list(std::string_view text) {
  std::vector<ArrivalPattern> out;
  for (auto& tok : split_ws(text)) {
    if (to_lower(tok) == "all") {
      auto p = all_patterns();
      out.insert(out.end(), p.begin(), p.end());
    } else {
      out.push_back(parse_pattern(tok));
    }
  }
  return out;
}

namespace {

std::string resolve(const std::string& base_dir, const std::string& p) {
  fs::path path(p);
  if (path.is_absolute()) return p;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

std::string sidecar_for(const std::string& path) {
  fs::path p(path);
  p.replace_extension(".ext.csv");
  return p.string();
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    std::string sidecar = "none";
    Range due{0, 0}, setup{0, 0};
    std::uint64_t ext_seed = 1;
    if (auto sec = tree.get_child_optional("instance")) {
      sidecar = sec->get<std::string>("sidecar", "none");
      if (auto v = sec->get_optional<std::string>("due_range")) due = range_value("due_range", *v);
      if (auto v = sec->get_optional<std::string>("setup_range"))
        setup = range_value("setup_range", *v);
      ext_seed = sec->get<std::uint64_t>("extension_seed", 1);
      for (auto& p : split_ws(sec->get<std::string>("paths", ""))) {
        InstanceSource src;
        src.path = resolve(base_dir, p);
        src.name = fs::path(p).stem().string();
        if (to_lower(sidecar) == "auto") src.sidecar = sidecar_for(src.path);
        else if (to_lower(sidecar) != "none") src.sidecar = resolve(base_dir, sidecar);
        src.due_range = due;
        src.setup_range = setup;
        src.extension_seed = ext_seed;
        cfg.instances.push_back(std::move(src));
      }
    }
    if (auto sec = tree.get_child_optional("synthetic")) {
      SyntheticSpec s;
      s.jobs = sec->get<int>("jobs");
      s.machines = sec->get<int>("machines");
      s.ops = int_range_value("ops", sec->get<std::string>("ops", "1 1"));
      s.alternatives = int_range_value("alternatives", sec->get<std::string>("alternatives", "1 1"));
      s.ptime = int_range_value("ptime", sec->get<std::string>("ptime", "1 10"));
      s.due_range = range_value("due_range", sec->get<std::string>("due_range", "1 1"));
      s.setup_range = range_value("setup_range", sec->get<std::string>("setup_range", "0 0"));
      if (auto t = sec->get_optional<int>("total_ops")) s.total_ops = *t;
      InstanceSource src;
      src.name = sec->get<std::string>("name", "synthetic");
      src.synthetic = s;
      src.synthetic_seed = sec->get<std::uint64_t>("seed", 1);
      cfg.instances.push_back(std::move(src));
    }

    const pt::ptree ex = tree.get_child("experiment", pt::ptree{});
    cfg.rules = parse_rule_list(ex.get<std::string>("rules", "all"));
    cfg.patterns = parse_pattern_list(ex.get<std::string>("patterns", "static"));
    auto horizon = ex.get<std::string>("horizon", "auto");
    if (to_lower(horizon) != "auto") cfg.horizon = parse_double(horizon);
    cfg.seeds = parse_seed_list(ex.get<std::string>("seeds", "1"));
    auto est = to_lower(ex.get<std::string>("work_estimate", "min"));
    if (est == "min") cfg.sim.work_estimate = WorkEstimate::Min;
    else if (est == "mean") cfg.sim.work_estimate = WorkEstimate::Mean;
    else throw ConfigError("work_estimate must be min or mean");
    auto scope = to_lower(ex.get<std::string>("rerank", "machine"));
    if (scope == "machine") cfg.sim.scope = RerankScope::Machine;
    else if (scope == "global") cfg.sim.scope = RerankScope::Global;
    else throw ConfigError("rerank must be machine or global");

    if (auto sec = tree.get_child_optional("weights")) {
      std::vector<std::string> names;
      std::vector<FuzzyTriple> fuzzy;
      std::vector<double> crisp;
      for (const auto& [key, node] : *sec) {
        auto v = numbers(node.data());
        names.push_back(key);
        if (v.size() == 3) fuzzy.push_back({v[0], v[1], v[2]});
        else if (v.size() == 1) crisp.push_back(v[0]);
        else throw ConfigError("weight '" + key + "' needs one crisp value or a fuzzy triple");
      }
      if (!fuzzy.empty() && !crisp.empty())
        throw ConfigError("weights mix fuzzy triples and crisp values");
      cfg.mcdm.weights = fuzzy.empty() ? crisp_weights(crisp, names) : defuzzify_weights(fuzzy, names);
    }
    if (auto sec = tree.get_child_optional("directions")) {
      for (const auto& [key, node] : *sec) {
        auto it = std::find_if(cfg.mcdm.weights.items.begin(), cfg.mcdm.weights.items.end(),
                               [&](const CriterionWeight& w) { return w.name == key; });
        if (it == cfg.mcdm.weights.items.end())
          throw ConfigError("direction given for unknown criterion '" + key + "'");
        it->direction = parse_direction(node.data());
      }
    }
    for (const auto& item : cfg.mcdm.weights.items)
      if (!criterion_from_name(item.name))
        throw ConfigError("criterion '" + item.name + "' has no job attribute");
    if (auto sec = tree.get_child_optional("mcdm")) {
      auto p = to_lower(sec->get<std::string>("cp_p", "2"));
      cfg.mcdm.cp_p = (p == "inf" || p == "infinity") ? kInfinityNorm : parse_double(p);
      auto edas = to_lower(sec->get<std::string>("edas", "standard"));
      if (edas == "standard") cfg.mcdm.edas = EdasAppraisal::Standard;
      else if (edas == "literal") cfg.mcdm.edas = EdasAppraisal::Literal;
      else throw ConfigError("edas must be standard or literal");
      cfg.mcdm.preferences.clear();
      for (auto& tok : split_ws(sec->get<std::string>("promethee", "usual")))
        cfg.mcdm.preferences.push_back(PreferenceFunction::parse(tok));
    }
    if (auto sec = tree.get_child_optional("sweep")) {
      cfg.sweep_criterion = sec->get<std::string>("criterion", "");
      cfg.sweep_levels = numbers(sec->get<std::string>("levels", ""));
      auto rule = sec->get<std::string>("rule", "C9");
      auto id = rule_from_name(rule);
      if (!id) throw ConfigError("unknown sweep rule '" + rule + "'");
      cfg.sweep_rule = *id;
    }
  } catch (const pt::ptree_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.check();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  return parse_config(read_file(path), fs::path(path).parent_path().string());
}

ExtendedInstance load_instance(const InstanceSource& src) {
  if (src.synthetic) return generate_synthetic(*src.synthetic, src.synthetic_seed);
  auto inst = load_fjs(src.path);
  if (!src.sidecar.empty()) return load_sidecar(inst, src.sidecar);
  return attach_extensions(inst, src.due_range, src.setup_range, src.extension_seed);
}

Time default_horizon(const Instance& inst) {
  double total = 0;
  for (const auto& j : inst.jobs)
    for (const auto& op : j.operations) total += op.min_ptime();
  return total / inst.machine_count;
}

namespace {

// Runs fn(i) for i in [0, n) on a few threads; results land by index.
template <class Fn>
void parallel_for(std::size_t n, Fn fn) {
  unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8));
  if (n < 2 || workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Metrics average(std::span<const Metrics> runs) {
  Metrics m;
  double late = 0;
  for (const auto& r : runs) {
    m.makespan += r.makespan;
    m.mean_flow += r.mean_flow;
    m.mean_tardiness += r.mean_tardiness;
    m.max_tardiness += r.max_tardiness;
    late += r.late_jobs;
  }
  double n = static_cast<double>(runs.size());
  m.makespan /= n;
  m.mean_flow /= n;
  m.mean_tardiness /= n;
  m.max_tardiness /= n;
  m.late_jobs = static_cast<int>(std::lround(late / n));
  return m;
}

Metrics validated_run(const ExtendedInstance& inst, const RuleSpec& rule, ArrivalPattern pattern,
                      Time horizon, std::uint64_t seed, const SimulationOptions& sim,
                      const std::string& label) {
  ArrivalPlan plan = pattern == ArrivalPattern::Fixed
                         ? fixed_arrivals(inst.fixed_arrivals.value())
                         : arrival_times(pattern, inst.base.job_count(), horizon, seed);
  auto result = run(inst, rule, plan, seed, sim);
  auto report = validate(result.trace, inst.base);
  if (!report.feasible())
    throw InfeasibleTrace(label + " " + rule.name() + " " + std::string(pattern_name(pattern)) +
                              " seed " + std::to_string(seed) + " produced an infeasible trace",
                          std::move(report));
  return result.metrics;
}

}  // namespace

ExperimentReport run_experiment(const ScenarioConfig& config) {
  config.check();
  std::vector<ExtendedInstance> insts;
  for (const auto& src : config.instances) insts.push_back(load_instance(src));

  ExperimentReport report;
  struct Task {
    std::size_t inst;
    std::size_t cell;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < insts.size(); ++i)
    for (auto p : config.patterns)
      for (auto r : config.rules) {
        CellResult c;
        c.instance = config.instances[i].name;
        c.pattern = p;
        c.rule = r;
        c.seeds = config.seeds;
        tasks.push_back({i, report.cells.size()});
        report.cells.push_back(std::move(c));
      }

  parallel_for(tasks.size(), [&](std::size_t t) {
    const auto& inst = insts[tasks[t].inst];
    auto& cell = report.cells[tasks[t].cell];
    auto rule = make_rule(cell.rule, config.mcdm);
    Time horizon = config.horizon.value_or(default_horizon(inst.base));
    for (auto seed : config.seeds)
      cell.runs.push_back(
          validated_run(inst, rule, cell.pattern, horizon, seed, config.sim, cell.instance));
    cell.mean = average(cell.runs);
  });

  // Best rule per (instance, pattern, measure).
  const std::size_t block = config.rules.size();
  for (std::size_t b = 0; b < report.cells.size(); b += block) {
    for (std::size_t k = 0; k < kMeasures.size(); ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = b; c < b + block; ++c)
        best = std::min(best, measure_value(report.cells[c].mean, kMeasures[k]));
      for (std::size_t c = b; c < b + block; ++c) {
        double v = measure_value(report.cells[c].mean, kMeasures[k]);
        report.cells[c].best[k] = v == best;
        report.cells[c].deviation[k] = best > 0 ? (v - best) / best * 100 : (v == best ? 0 :
            std::numeric_limits<double>::infinity());
      }
    }
  }
  return report;
}

std::string ExperimentReport::csv() const {
  std::ostringstream out;
  out << "instance,pattern,rule,replications";
  for (auto m : kMeasures) out << ',' << measure_name(m);
  for (auto m : kMeasures) out << ",dev_" << measure_name(m) << "_pct";
  out << ",best\n";
  for (const auto& c : cells) {
    out << c.instance << ',' << pattern_name(c.pattern) << ',' << rule_name(c.rule) << ','
        << c.runs.size();
    for (auto m : kMeasures) out << ',' << fmt_fixed(measure_value(c.mean, m), 4);
    for (std::size_t k = 0; k < kMeasures.size(); ++k) out << ',' << fmt_fixed(c.deviation[k], 2);
    std::string best;
    for (std::size_t k = 0; k < kMeasures.size(); ++k)
      if (c.best[k]) best += (best.empty() ? "" : ";") + std::string(measure_name(kMeasures[k]));
    out << ',' << best << '\n';
  }
  return out.str();
}

ExperimentReport parse_runs_csv(std::istream& in) {
  ExperimentReport rep;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> where;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (lineno == 1 || trim(raw).empty()) continue;
    auto f = split_csv_line(raw);
    if (f.size() != 9) throw std::invalid_argument("runs csv line " + std::to_string(lineno) +
                                                   ": expected 9 fields");
    auto rule = rule_from_name(f[2]);
    if (!rule) throw std::invalid_argument("runs csv: unknown rule '" + f[2] + "'");
    auto key = std::make_tuple(f[0], f[1], f[2]);
    auto it = where.find(key);
    if (it == where.end()) {
      CellResult c;
      c.instance = f[0];
      c.pattern = parse_pattern(f[1]);
      c.rule = *rule;
      it = where.emplace(key, rep.cells.size()).first;
      rep.cells.push_back(std::move(c));
    }
    auto& c = rep.cells[it->second];
    c.seeds.push_back(std::stoull(f[3]));
    Metrics m;
    m.makespan = parse_double(f[4]);
    m.mean_flow = parse_double(f[5]);
    m.mean_tardiness = parse_double(f[6]);
    m.max_tardiness = parse_double(f[7]);
    m.late_jobs = parse_int(f[8]);
    c.runs.push_back(m);
  }
  for (auto& c : rep.cells) c.mean = average(c.runs);
  return rep;
}

std::string ExperimentReport::runs_csv() const {
  std::ostringstream out;
  out << "instance,pattern,rule,seed,makespan,mean_flow,mean_tardiness,max_tardiness,late_jobs\n";
  for (const auto& c : cells)
    for (std::size_t s = 0; s < c.runs.size(); ++s) {
      const auto& r = c.runs[s];
      out << c.instance << ',' << pattern_name(c.pattern) << ',' << rule_name(c.rule) << ','
          << c.seeds[s] << ',' << fmt_num(r.makespan) << ',' << fmt_num(r.mean_flow) << ','
          << fmt_num(r.mean_tardiness) << ',' << fmt_num(r.max_tardiness) << ',' << r.late_jobs
          << '\n';
    }
  return out.str();
}

CriteriaWeights equal_split_weights(const CriteriaWeights& base, std::string_view criterion,
                                    double level) {
  if (!(level > 0 && level < 1)) throw std::invalid_argument("sweep level must lie in (0, 1)");
  if (base.size() < 2) throw std::invalid_argument("weight sweep needs at least two criteria");
  auto out = base;
  auto it = std::find_if(out.items.begin(), out.items.end(),
                         [&](const CriterionWeight& w) { return w.name == criterion; });
  if (it == out.items.end())
    throw std::invalid_argument("criterion '" + std::string(criterion) + "' is not configured");
  double other = (1 - level) / static_cast<double>(out.size() - 1);
  for (auto& w : out.items) {
    w.fuzzy.reset();
    w.crisp = w.normalized = (&w == &*it) ? level : other;
  }
  return out;
}

std::vector<double> default_sweep_levels() {
  std::vector<double> out;
  for (int i = 1; i <= 9; ++i) out.push_back(i / 10.0);
  return out;
}

SweepReport weight_sweep(const ScenarioConfig& config, std::string_view criterion,
                         std::span<const double> levels) {
  config.check();
  if (config.mcdm.weights.size() < 2)
    throw std::invalid_argument("weight sweep needs at least two criteria");
  if (levels.empty()) throw std::invalid_argument("weight sweep needs at least one level");
  for (double l : levels)
    if (!(l > 0 && l < 1)) throw std::invalid_argument("sweep level must lie in (0, 1)");
  SweepReport rep;
  rep.criterion = std::string(criterion);
  rep.criteria = config.mcdm.weights.names();
  if (std::find(rep.criteria.begin(), rep.criteria.end(), rep.criterion) == rep.criteria.end())
    throw std::invalid_argument("criterion '" + rep.criterion + "' is not configured");

  for (const auto& src : config.instances) {
    auto inst = load_instance(src);
    Time horizon = config.horizon.value_or(default_horizon(inst.base));
    for (auto p : config.patterns)
      for (double level : levels) {
        auto opts = config.mcdm;
        opts.weights = equal_split_weights(config.mcdm.weights, criterion, level);
        auto rule = make_rule(config.sweep_rule, opts);
        std::vector<Metrics> runs;
        for (auto seed : config.seeds)
          runs.push_back(validated_run(inst, rule, p, horizon, seed, config.sim, src.name));
        rep.rows.push_back({src.name, p, level, opts.weights.normalized(), average(runs)});
      }
  }
  return rep;
}

std::string SweepReport::csv() const {
  std::ostringstream out;
  out << "instance,pattern,target,level";
  for (const auto& c : criteria) out << ",w_" << c;
  for (auto m : kMeasures) out << ',' << measure_name(m);
  out << '\n';
  for (const auto& r : rows) {
    out << r.instance << ',' << pattern_name(r.pattern) << ',' << criterion << ','
        << fmt_fixed(r.level, 2);
    for (double w : r.weights) out << ',' << fmt_fixed(w, 4);
    for (auto m : kMeasures) out << ',' << fmt_fixed(measure_value(r.mean, m), 4);
    out << '\n';
  }
  return out.str();
}

StatsOutput compare_rules(const ExperimentReport& report, Grouping grouping) {
  // Group order: CDR pool first (or rules in report order), then each MCDM.
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  auto group_of = [&](RuleId r) -> std::string {
    if (grouping == Grouping::PerRule) return std::string(rule_name(r));
    return make_rule(r).is_mcdm() ? std::string(rule_name(r)) : "CDR";
  };
  for (const auto& c : report.cells) {
    auto g = group_of(c.rule);
    if (!index.count(g)) {
      index[g] = names.size();
      names.push_back(g);
    }
  }
  if (grouping == Grouping::CdrPoolVsMcdm && index.count("CDR") && index["CDR"] != 0) {
    names.erase(names.begin() + static_cast<std::ptrdiff_t>(index["CDR"]));
    names.insert(names.begin(), "CDR");
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
  }
  if (names.size() < 2) throw std::invalid_argument("comparison needs at least two rule groups");

  StatsOutput out;
  std::ostringstream anova, means, tt;
  anova << anova_csv_header();
  means << "group";
  for (auto m : kMeasures) means << ',' << measure_name(m);
  means << '\n';
  tt << ttest_csv_header();

  std::vector<std::array<std::vector<double>, 4>> samples(names.size());
  for (const auto& c : report.cells) {
    auto& s = samples[index[group_of(c.rule)]];
    for (const auto& r : c.runs)
      for (std::size_t k = 0; k < kMeasures.size(); ++k) s[k].push_back(measure_value(r, kMeasures[k]));
  }
  for (std::size_t g = 0; g < names.size(); ++g) {
    means << names[g];
    for (std::size_t k = 0; k < kMeasures.size(); ++k) means << ',' << fmt_fixed(mean(samples[g][k]), 4);
    means << '\n';
  }
  for (std::size_t k = 0; k < kMeasures.size(); ++k) {
    std::string mname(measure_name(kMeasures[k]));
    std::vector<std::vector<double>> groups;
    for (auto& s : samples) groups.push_back(s[k]);
    anova << anova_csv_rows(mname, one_way_anova(groups));
    for (std::size_t g = 1; g < names.size(); ++g)
      for (bool eq : {true, false})
        tt << ttest_csv_row(mname, names[g], names[0],
                            independent_t_test(samples[g][k], samples[0][k], eq));
  }
  out.anova_csv = anova.str();
  out.means_csv = means.str();
  out.ttest_csv = tt.str();
  return out;
}

}  // namespace pfjss
