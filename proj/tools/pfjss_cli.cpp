#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pfjss/engine.hpp"
#include "pfjss/experiment.hpp"
#include "pfjss/instance.hpp"
#include "pfjss/rules.hpp"
#include "pfjss/text.hpp"
#include "pfjss/validate.hpp"

namespace fs = std::filesystem;
using namespace pfjss;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> instances;
  std::string sidecar;
  std::vector<std::uint64_t> seeds;
  std::string rules;
  std::string patterns;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Scenario config file");
  cmd->add_option("--instance", c.instances, "Instance file(s); overrides the config");
  cmd->add_option("--sidecar", c.sidecar, "Due-date/setup sidecar CSV, or 'auto'");
  cmd->add_option("--seed", c.seeds, "Replication seed(s); overrides the config");
  cmd->add_option("--rules", c.rules, "Rule names, e.g. \"C1 C9\" or all");
  cmd->add_option("--pattern", c.patterns, "Arrival patterns, e.g. \"static random\" or all");
  cmd->add_option("--out-dir", c.out_dir, "Output directory");
}

// Config file first, command-line flags patch it.
ScenarioConfig scenario(const Common& c) {
  ScenarioConfig cfg;
  if (!c.config.empty()) {
    cfg = load_config(c.config);
  } else {
    cfg.rules = study_rules();
    cfg.patterns = {ArrivalPattern::Static};
    cfg.seeds = {1};
  }
  if (!c.instances.empty()) {
    InstanceSource tmpl = cfg.instances.empty() ? InstanceSource{} : cfg.instances.front();
    cfg.instances.clear();
    for (const auto& p : c.instances) {
      InstanceSource src = tmpl;
      src.synthetic.reset();
      src.path = p;
      src.name = fs::path(p).stem().string();
      if (c.sidecar.empty() || c.sidecar == "auto")
        src.sidecar = fs::path(p).replace_extension(".ext.csv").string();
      else if (c.sidecar == "none")
        src.sidecar.clear();
      else
        src.sidecar = c.sidecar;
      cfg.instances.push_back(std::move(src));
    }
  }
  if (!c.seeds.empty()) cfg.seeds = c.seeds;
  if (!c.rules.empty()) cfg.rules = parse_rule_list(c.rules);
  if (!c.patterns.empty()) cfg.patterns = parse_pattern_list(c.patterns);
  cfg.check();
  return cfg;
}

void write_out(const std::string& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  write_file((fs::path(dir) / name).string(), content);
  std::cout << "wrote " << (fs::path(dir) / name).string() << '\n';
}

int cmd_run(const Common& c) {
  auto cfg = scenario(c);
  auto report = run_experiment(cfg);
  write_out(c.out_dir, "report.csv", report.csv());
  write_out(c.out_dir, "runs.csv", report.runs_csv());
  return 0;
}

int cmd_sweep(const Common& c, std::string criterion, std::vector<double> levels) {
  auto cfg = scenario(c);
  if (criterion.empty()) criterion = cfg.sweep_criterion;
  if (criterion.empty()) throw std::invalid_argument("sweep-weights needs --criterion");
  if (levels.empty()) levels = cfg.sweep_levels;
  if (levels.empty()) levels = default_sweep_levels();
  auto rep = weight_sweep(cfg, criterion, levels);
  write_out(c.out_dir, "sweep_" + criterion + ".csv", rep.csv());
  return 0;
}

ExtendedInstance instance_from(const std::string& path, const std::string& sidecar) {
  auto inst = load_fjs(path);
  std::string sc = sidecar;
  if (sc.empty() || sc == "auto") sc = fs::path(path).replace_extension(".ext.csv").string();
  if (!fs::exists(sc)) throw std::invalid_argument("no sidecar at " + sc);
  return load_sidecar(inst, sc);
}

int cmd_validate(const std::string& instance, const std::string& trace_path,
                 const std::string& arrivals_path, const std::string& out_dir) {
  auto inst = load_fjs(instance);
  std::ifstream tin(trace_path);
  if (!tin) throw std::invalid_argument("cannot open " + trace_path);
  auto trace = parse_trace_csv(tin);
  if (!arrivals_path.empty()) {
    std::ifstream ain(arrivals_path);
    if (!ain) throw std::invalid_argument("cannot open " + arrivals_path);
    auto a = parse_arrival_csv(ain);
    trace.jobs.clear();
    for (std::size_t j = 0; j < a.size(); ++j) trace.jobs.push_back({static_cast<JobId>(j + 1), a[j], 0});
    for (const auto& r : trace.ops)
      if (r.op == static_cast<int>(inst.job(r.job).operations.size()) &&
          static_cast<std::size_t>(r.job) <= trace.jobs.size())
        trace.jobs[static_cast<std::size_t>(r.job - 1)].completion = r.end;
  }
  ViolationReport rep;
  try {
    rep = validate(trace, inst);
  } catch (const TraceError& e) {
    std::cerr << "structural error: " << e.what() << '\n';
    return 3;
  }
  std::cout << rep.text();
  if (!out_dir.empty()) write_out(out_dir, "violations.csv", rep.csv());
  return rep.feasible() ? 0 : 1;
}

int cmd_gantt(const Common& c, const std::string& trace_path, const std::string& rule_name_,
              const std::string& stem) {
  auto cfg = scenario(c);
  if (cfg.instances.size() != 1) throw std::invalid_argument("gantt needs exactly one instance");
  auto inst = load_instance(cfg.instances.front());
  ScheduleTrace trace;
  if (!trace_path.empty()) {
    std::ifstream tin(trace_path);
    if (!tin) throw std::invalid_argument("cannot open " + trace_path);
    trace = parse_trace_csv(tin);
  } else {
    auto id = rule_from_name(rule_name_);
    if (!id) throw std::invalid_argument("unknown rule '" + rule_name_ + "'");
    auto pattern = cfg.patterns.front();
    std::uint64_t seed = cfg.seeds.front();
    Time horizon = cfg.horizon.value_or(default_horizon(inst.base));
    auto plan = pattern == ArrivalPattern::Static
                    ? arrival_times(pattern, inst.base.job_count(), 0, seed)
                    : arrival_times(pattern, inst.base.job_count(), horizon, seed);
    trace = run(inst, make_rule(*id, cfg.mcdm), plan, seed, cfg.sim).trace;
    fs::create_directories(c.out_dir);
    write_out(c.out_dir, stem + "_trace.csv", trace_csv(trace));
  }
  fs::create_directories(c.out_dir);
  try {
    export_gantt(trace, inst.base, (fs::path(c.out_dir) / stem).string());
  } catch (const GanttError& e) {
    std::cerr << e.what() << '\n' << e.report.text();
    return 1;
  }
  std::cout << "wrote " << (fs::path(c.out_dir) / stem).string() << ".svg and .csv\n";
  return 0;
}

int cmd_compare(const Common& c, const std::string& runs_path, bool per_rule) {
  ExperimentReport report;
  if (!runs_path.empty()) {
    std::ifstream in(runs_path);
    if (!in) throw std::invalid_argument("cannot open " + runs_path);
    report = parse_runs_csv(in);
  } else {
    report = run_experiment(scenario(c));
    write_out(c.out_dir, "runs.csv", report.runs_csv());
  }
  auto out = compare_rules(report, per_rule ? Grouping::PerRule : Grouping::CdrPoolVsMcdm);
  write_out(c.out_dir, "anova.csv", out.anova_csv);
  write_out(c.out_dir, "means.csv", out.means_csv);
  write_out(c.out_dir, "ttest.csv", out.ttest_csv);
  return 0;
}

int cmd_list_rules() {
  for (auto id : all_rules()) std::cout << rule_name(id) << '\t' << rule_formula(id) << '\n';
  return 0;
}

int cmd_generate(const std::string& out_dir, std::uint64_t seed) {
  for (const auto& [name, spec] : mk_standin_specs()) {
    auto inst = generate_synthetic(spec, seed);
    write_out(out_dir, name + ".fjs", serialize_fjs(inst.base));
    write_out(out_dir, name + ".ext.csv", serialize_sidecar(inst));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flexible job-shop dispatching simulator with MCDM rules"};
  app.require_subcommand(1);

  Common run_c, sweep_c, gantt_c, cmp_c;
  auto* run_cmd = app.add_subcommand("run", "Rule x pattern x seed sweep; writes report.csv and runs.csv");
  add_common(run_cmd, run_c);

  auto* sweep_cmd = app.add_subcommand("sweep-weights", "Vary one criterion weight, split the rest equally");
  add_common(sweep_cmd, sweep_c);
  std::string criterion;
  std::vector<double> levels;
  sweep_cmd->add_option("--criterion", criterion, "Criterion to sweep");
  sweep_cmd->add_option("--levels", levels, "Weight levels in (0, 1); default 0.1..0.9");

  auto* val_cmd = app.add_subcommand("validate", "Check a trace CSV against an instance");
  std::string v_instance, v_trace, v_arrivals, v_out;
  val_cmd->add_option("--instance", v_instance, "Instance file")->required();
  val_cmd->add_option("--trace", v_trace, "Trace CSV (job,op,machine,setup_start,start,end)")->required();
  val_cmd->add_option("--arrivals", v_arrivals, "Arrival CSV (job,arrival)");
  val_cmd->add_option("--out-dir", v_out, "Also write violations.csv here");

  auto* gantt_cmd = app.add_subcommand("gantt", "Draw a validated schedule as SVG plus CSV");
  add_common(gantt_cmd, gantt_c);
  std::string g_trace, g_rule = "C9", g_stem = "gantt";
  gantt_cmd->add_option("--trace", g_trace, "Existing trace CSV; otherwise simulate");
  gantt_cmd->add_option("--rule", g_rule, "Rule to simulate when no trace is given");
  gantt_cmd->add_option("--name", g_stem, "Output file stem");

  auto* cmp_cmd = app.add_subcommand("compare", "ANOVA and t-tests: CDR pool vs each MCDM rule");
  add_common(cmp_cmd, cmp_c);
  std::string runs_path;
  bool per_rule = false;
  cmp_cmd->add_option("--runs", runs_path, "runs.csv from a previous run");
  cmp_cmd->add_flag("--per-rule", per_rule, "One group per rule instead of pooling CDRs");

  app.add_subcommand("list-rules", "Print rule names and priority formulas");

  auto* gen_cmd = app.add_subcommand("generate", "Write synthetic MK stand-in instances and sidecars");
  std::string gen_out = "data";
  std::uint64_t gen_seed = 2024;
  gen_cmd->add_option("--out-dir", gen_out, "Output directory");
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run_c);
    if (*sweep_cmd) return cmd_sweep(sweep_c, criterion, levels);
    if (*val_cmd) return cmd_validate(v_instance, v_trace, v_arrivals, v_out);
    if (*gantt_cmd) return cmd_gantt(gantt_c, g_trace, g_rule, g_stem);
    if (*cmp_cmd) return cmd_compare(cmp_c, runs_path, per_rule);
    if (app.got_subcommand("list-rules")) return cmd_list_rules();
    if (*gen_cmd) return cmd_generate(gen_out, gen_seed);
  } catch (const InfeasibleTrace& e) {
    std::cerr << e.what() << '\n' << e.report.text();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
