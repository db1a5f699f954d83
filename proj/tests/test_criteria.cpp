#include <array>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "pfjss/criteria.hpp"
#include "pfjss/rules.hpp"

using namespace pfjss;

namespace {

JobState state(JobId id, Time due, Time work, int ops, Time setup_mid = 0) {
  JobState s;
  s.job_id = id;
  s.due_date = due;
  s.total_ops = s.remaining_ops = ops;
  s.total_work = s.remaining_work = work;
  s.next_op_estimate = work / ops;
  s.next_setup_estimate = setup_mid;
  return s;
}

ExtendedInstance three_op_job() {
  ExtendedInstance inst;
  inst.base = parse_fjs(std::string_view("1 2\n3  2 1 4 2 6  1 2 3  2 1 5 2 2\n"));
  inst.extensions = {{30, {1, 2}}};
  return inst;
}

}  // namespace

TEST_SUITE("criteria") {

TEST_CASE("defuzzified standard weights") {
  auto w = default_weights();
  REQUIRE(w.size() == 5);
  const double crisp[] = {0.33, 0.86, 0.47, 0.13, 1.48};
  for (std::size_t j = 0; j < 5; ++j) CHECK(w.items[j].crisp == doctest::Approx(crisp[j]));
  double sum = 0;
  for (double v : w.normalized()) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.items[4].normalized == doctest::Approx(1.48 / 3.27));
  CHECK(w.names()[0] == "process_time");
  CHECK(w.names()[4] == "strop");
  for (auto d : w.directions()) CHECK(d == Direction::Cost);
}

TEST_CASE("defuzzify edge cases") {
  std::array<FuzzyTriple, 1> one{{{1, 1, 1}}};
  auto w = defuzzify_weights(one);
  CHECK(w.items[0].normalized == 1.0);
  CHECK(w.items[0].name == "c1");
  std::array<FuzzyTriple, 2> unordered{{{0.2, 0.1, 0.3}, {0.1, 0.2, 0.3}}};
  CHECK_THROWS(defuzzify_weights(unordered));
  std::array<FuzzyTriple, 2> zero{{{0, 0, 0}, {0, 0, 0}}};
  CHECK_THROWS(defuzzify_weights(zero));
}

TEST_CASE("normalized weights are scale invariant") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.01, 1.0), c(0.1, 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FuzzyTriple> t(4), scaled(4);
    double k = c(gen);
    for (std::size_t j = 0; j < 4; ++j) {
      std::array<double, 3> v{u(gen), u(gen), u(gen)};
      std::sort(v.begin(), v.end());
      t[j] = {v[0], v[1], v[2]};
      scaled[j] = {k * v[0], k * v[1], k * v[2]};
    }
    auto a = defuzzify_weights(t), b = defuzzify_weights(scaled);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(b.items[j].crisp == doctest::Approx(k * a.items[j].crisp));
      CHECK(b.items[j].normalized == doctest::Approx(a.items[j].normalized));
    }
  }
}

TEST_CASE("slack per remaining operation") {
  auto s = state(1, 20, 10, 5);
  CHECK(strop(s, 0) == doctest::Approx(2.0));
  auto z = state(1, 17, 10, 3);
  CHECK(strop(z, 7) == doctest::Approx(0.0));
  auto late = state(1, 10, 6, 2);
  CHECK(strop(late, 8) == doctest::Approx(-2.0));
  late.remaining_ops = 0;
  CHECK_THROWS(strop(late, 8));
}

TEST_CASE("decision matrix row for a fixture job") {
  std::vector<JobState> q{state(1, 49.5, 27, 6, 1.3), state(7, 33, 17, 5, 1.2)};
  auto m = build_decision_matrix(q, 0, default_weights());
  REQUIRE(m.row_count() == 2);
  CHECK(m.at(0, 0) == 27);
  CHECK(m.at(0, 1) == 49.5);
  CHECK(m.at(0, 2) == 6);
  CHECK(m.at(0, 3) == 1.3);
  CHECK(m.at(0, 4) == doctest::Approx(3.8).epsilon(0.02));
  CHECK(m.rows == std::vector<JobId>{1, 7});
  auto again = build_decision_matrix(q, 0, default_weights());
  CHECK(again.values == m.values);

  auto empty = build_decision_matrix(std::span<const JobState>{}, 0, default_weights());
  CHECK(empty.empty());
  std::vector<JobState> single{state(3, 10, 4, 2)};
  CHECK(build_decision_matrix(single, 0, default_weights()).row_count() == 1);
}

TEST_CASE("job state refresh after an operation completes") {
  auto inst = three_op_job();
  auto s = initial_job_state(inst, 1, 0);
  CHECK(s.total_work == 4 + 3 + 2);
  CHECK(s.remaining_ops == 3);
  CHECK(s.next_setup_estimate == 1.5);
  std::vector<JobState> before_q{s};
  auto before = build_decision_matrix(before_q, 0, default_weights());
  complete_operation(s, inst);
  std::vector<JobState> after_q{s};
  auto after = build_decision_matrix(after_q, 5, default_weights());
  CHECK(after.at(0, 0) == before.at(0, 0) - 4);
  CHECK(after.at(0, 2) == before.at(0, 2) - 1);
  CHECK(s.next_op == 1);
  CHECK(s.next_op_estimate == 3);
  complete_operation(s, inst);
  complete_operation(s, inst);
  CHECK(s.completed);
  CHECK(s.remaining_work == 0);
  CHECK_THROWS(complete_operation(s, inst));

  auto mean_state = initial_job_state(inst, 1, 0, WorkEstimate::Mean);
  CHECK(mean_state.total_work == doctest::Approx(5 + 3 + 3.5));
}

TEST_CASE("matrix validation") {
  auto w = default_weights();
  CHECK_THROWS(make_matrix({1, 1}, w, {{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}}));
  CHECK_THROWS(make_matrix({1}, w, {{1, 2, 3, 4}}));
  CHECK_THROWS(make_matrix({1}, w, {{1, 2, 3, 4, std::nan("")}}));
  CHECK_NOTHROW(fixtures::matrix(fixtures::kQueueFixture));
}

TEST_CASE("direction and criterion names") {
  CHECK(parse_direction("cost") == Direction::Cost);
  CHECK(parse_direction("MAX") == Direction::Benefit);
  CHECK_THROWS(parse_direction("sideways"));
  CHECK(criterion_from_name("STROP") == Criterion::Strop);
  CHECK_FALSE(criterion_from_name("colour").has_value());
}

}  // TEST_SUITE
