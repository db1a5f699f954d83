#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pfjss/experiment.hpp"

using namespace pfjss;

namespace {

const char* kConfig = R"(
[synthetic]
name = tiny
jobs = 6
machines = 3
ops = 1 3
alternatives = 1 2
ptime = 1 9
due_range = 10 40
setup_range = 0.5 1
seed = 3

[experiment]
rules = C1 C9 C12 SPT
patterns = static random
seeds = 1-3
)";

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

RunResult single_run(const ExtendedInstance& inst, RuleId rule, ArrivalPattern pat,
                     std::uint64_t seed) {
  auto plan = arrival_times(pat, inst.base.job_count(), default_horizon(inst.base), seed);
  return run(inst, make_rule(rule), plan, seed);
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config parsing") {
  auto cfg = parse_config(kConfig);
  REQUIRE(cfg.instances.size() == 1);
  CHECK(cfg.instances[0].name == "tiny");
  CHECK(cfg.instances[0].synthetic->jobs == 6);
  CHECK(cfg.rules == std::vector<RuleId>{RuleId::C1, RuleId::C9, RuleId::C12, RuleId::SPT});
  CHECK(cfg.patterns == std::vector<ArrivalPattern>{ArrivalPattern::Static, ArrivalPattern::Random});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK_FALSE(cfg.horizon.has_value());
  CHECK(cfg.mcdm.weights.size() == 5);

  auto extra = std::string(kConfig) +
               "[weights]\nprocess_time = 0.2 0.3 0.4\nstrop = 0.1 0.2 0.3\n"
               "[directions]\nstrop = benefit\n[mcdm]\ncp_p = inf\nedas = literal\n"
               "promethee = linear:1:5 quasi:2\n";
  auto c2 = parse_config(extra);
  CHECK(c2.mcdm.weights.size() == 2);
  CHECK(c2.mcdm.weights.items[1].direction == Direction::Benefit);
  CHECK(c2.mcdm.weights.items[0].normalized == doctest::Approx(0.9 / 1.5));
  CHECK(std::isinf(c2.mcdm.cp_p));
  CHECK(c2.mcdm.edas == EdasAppraisal::Literal);
  CHECK(c2.mcdm.preferences.size() == 2);

  CHECK(parse_rule_list("all").size() == 12);
  CHECK(parse_pattern_list("all").size() == 5);
  CHECK(parse_seed_list("4 1-3") == std::vector<std::uint64_t>{4, 1, 2, 3});
  CHECK_THROWS_AS(parse_config(std::string(kConfig) + "[weights]\nprocess_time = 1\nstrop = 1 2 3\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kConfig) + "[weights]\ncolour = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nrules = C1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kConfig) + "[mcdm]\nedas = odd\n"), ConfigError);
  CHECK_THROWS(parse_rule_list("C1 C99"));
}

TEST_CASE("instances load from disk with a sidecar") {
  auto dir = std::filesystem::temp_directory_path() / "pfjss_exp_test";
  std::filesystem::create_directories(dir);
  auto inst = generate_synthetic({.jobs = 4, .machines = 2, .ops = {1, 3}, .alternatives = {1, 2},
                                  .ptime = {1, 5}, .due_range = {5, 9}, .setup_range = {0, 1}},
                                 2);
  std::ofstream(dir / "a.fjs") << serialize_fjs(inst.base);
  std::ofstream(dir / "a.ext.csv") << serialize_sidecar(inst);
  std::ofstream(dir / "cfg.ini") << "[instance]\npaths = a.fjs\nsidecar = auto\n";
  auto cfg = load_config((dir / "cfg.ini").string());
  REQUIRE(cfg.instances.size() == 1);
  CHECK(load_instance(cfg.instances[0]) == inst);
  CHECK(cfg.instances[0].name == "a");
  std::filesystem::remove_all(dir);
}

TEST_CASE("default horizon") {
  auto inst = parse_fjs(std::string_view("2 2\n1 2 1 4 2 6\n2 1 1 3 1 2 5\n"));
  CHECK(default_horizon(inst) == doctest::Approx((4 + 3 + 5) / 2.0));
}

TEST_CASE("report cells, best annotation and deviations") {
  auto cfg = parse_config(kConfig);
  auto rep = run_experiment(cfg);
  REQUIRE(rep.cells.size() == 2 * 4);
  for (std::size_t start = 0; start < rep.cells.size(); start += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      double best = 1e300;
      for (std::size_t i = start; i < start + 4; ++i)
        best = std::min(best, measure_value(rep.cells[i].mean, kMeasures[k]));
      for (std::size_t i = start; i < start + 4; ++i) {
        const auto& c = rep.cells[i];
        double v = measure_value(c.mean, kMeasures[k]);
        CHECK(c.best[k] == (v == best));
        if (best > 0) CHECK(c.deviation[k] == doctest::Approx((v - best) / best * 100));
        CHECK(c.deviation[k] >= 0);
      }
    }
  }
  CHECK(lines(rep.csv()).size() == 1 + 8);
  CHECK(lines(rep.runs_csv()).size() == 1 + 8 * 3);
  CHECK(lines(rep.runs_csv())[0] ==
        "instance,pattern,rule,seed,makespan,mean_flow,mean_tardiness,max_tardiness,late_jobs");

  // Reruns are byte-identical despite the parallel cell schedule.
  auto again = run_experiment(cfg);
  CHECK(again.csv() == rep.csv());
  CHECK(again.runs_csv() == rep.runs_csv());

  std::istringstream in(rep.runs_csv());
  auto back = parse_runs_csv(in);
  REQUIRE(back.cells.size() == rep.cells.size());
  for (std::size_t i = 0; i < back.cells.size(); ++i) {
    CHECK(back.cells[i].rule == rep.cells[i].rule);
    CHECK(back.cells[i].mean.makespan == doctest::Approx(rep.cells[i].mean.makespan));
  }
}

TEST_CASE("a one-rule one-seed experiment equals a single run") {
  auto cfg = parse_config(kConfig);
  cfg.rules = {RuleId::C12};
  cfg.patterns = {ArrivalPattern::Random};
  cfg.seeds = {2};
  auto rep = run_experiment(cfg);
  REQUIRE(rep.cells.size() == 1);
  auto inst = load_instance(cfg.instances[0]);
  auto r = single_run(inst, RuleId::C12, ArrivalPattern::Random, 2);
  CHECK(rep.cells[0].mean.makespan == r.metrics.makespan);
  CHECK(rep.cells[0].mean.mean_flow == r.metrics.mean_flow);
  CHECK(rep.cells[0].deviation[0] == 0);
  CHECK(rep.cells[0].best[0]);
}

TEST_CASE("equal-split weights") {
  std::vector<double> ones(6, 1.0);
  auto six = crisp_weights(ones);
  auto low = equal_split_weights(six, "c3", 0.10);
  for (std::size_t j = 0; j < 6; ++j)
    CHECK(low.items[j].normalized == doctest::Approx(j == 2 ? 0.10 : 0.18));
  auto high = equal_split_weights(six, "c3", 0.90);
  CHECK(high.items[0].normalized == doctest::Approx(0.02));
  double sum = 0;
  for (double w : high.normalized()) sum += w;
  CHECK(sum == doctest::Approx(1));
  std::vector<double> single{1.0};
  CHECK_THROWS(equal_split_weights(crisp_weights(single), "c1", 0.5));
  CHECK_THROWS(equal_split_weights(six, "c9", 0.5));
  CHECK_THROWS(equal_split_weights(six, "c1", 1.0));
  CHECK(default_sweep_levels().size() == 9);
}

TEST_CASE("weight sweep report") {
  auto cfg = parse_config(kConfig);
  cfg.patterns = {ArrivalPattern::Static};
  cfg.seeds = {1};
  std::vector<double> levels{0.2, 0.8};
  auto sw = weight_sweep(cfg, "strop", levels);
  REQUIRE(sw.rows.size() == 2);
  CHECK(sw.rows[0].weights[4] == doctest::Approx(0.2));
  CHECK(sw.rows[1].weights[0] == doctest::Approx(0.05));
  CHECK(lines(sw.csv()).size() == 3);
  CHECK_THROWS(weight_sweep(cfg, "colour", levels));
}

TEST_CASE("rule comparison output") {
  auto cfg = parse_config(kConfig);
  auto rep = run_experiment(cfg);
  auto pooled = compare_rules(rep);
  auto means = lines(pooled.means_csv);
  REQUIRE(means.size() == 4);
  CHECK(means[1].rfind("CDR,", 0) == 0);
  CHECK(means[2].rfind("C9,", 0) == 0);
  CHECK(count(pooled.anova_csv, "Between Groups") == 4);
  // Two MCDM rules, two variance assumptions, four measures.
  CHECK(lines(pooled.ttest_csv).size() == 1 + 2 * 2 * 4);
  auto per = compare_rules(rep, Grouping::PerRule);
  CHECK(lines(per.means_csv).size() == 5);

  // Identical columns across groups: no between-group variation.
  ExperimentReport same;
  for (auto id : {RuleId::C1, RuleId::C9}) {
    CellResult c;
    c.rule = id;
    for (double v : {3.0, 5.0, 8.0}) {
      Metrics m;
      m.makespan = m.mean_flow = m.mean_tardiness = m.max_tardiness = v;
      c.runs.push_back(m);
    }
    same.cells.push_back(c);
  }
  auto flat = compare_rules(same);
  CHECK(flat.anova_csv.find("makespan,Between Groups,0.000,1,0.000,0.000,1.000") != std::string::npos);
  ExperimentReport lonely;
  lonely.cells.push_back(same.cells[0]);
  CHECK_THROWS(compare_rules(lonely));
}

TEST_CASE("gantt export") {
  auto inst = generate_synthetic(mk_standin_specs()[0].spec, 2024);
  auto r = single_run(inst, RuleId::C9, ArrivalPattern::Static, 1);
  auto svg = gantt_svg(r.trace, inst.base.machine_count);
  CHECK(count(svg, "class=\"lane\"") == 6);
  CHECK(count(svg, "class=\"op\"") == r.trace.ops.size());
  auto csv = lines(gantt_csv(r.trace));
  REQUIRE(csv.size() == 1 + r.trace.ops.size());
  for (std::size_t i = 1; i < csv.size(); ++i) {
    std::istringstream row(csv[i]);
    std::vector<double> v;
    for (std::string cell; std::getline(row, cell, ',');) v.push_back(std::stod(cell));
    auto job = static_cast<JobId>(v[1]);
    auto op = static_cast<std::size_t>(v[2]) - 1;
    auto ptime = inst.base.job(job).operations[op].ptime_on(static_cast<MachineId>(v[0]));
    REQUIRE(ptime.has_value());
    CHECK(v[6] == doctest::Approx(*ptime));
  }

  auto broken = r.trace;
  broken.ops[0].end += 100;
  auto stem = (std::filesystem::temp_directory_path() / "pfjss_gantt_test").string();
  CHECK_THROWS_AS(export_gantt(broken, inst.base, stem), GanttError);
  CHECK_FALSE(std::filesystem::exists(stem + ".svg"));
  export_gantt(r.trace, inst.base, stem);
  CHECK(std::filesystem::exists(stem + ".svg"));
  std::filesystem::remove(stem + ".svg");
  std::filesystem::remove(stem + ".csv");
}

}  // TEST_SUITE
