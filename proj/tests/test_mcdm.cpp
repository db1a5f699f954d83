#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pfjss/mcdm.hpp"
#include "pfjss/rules.hpp"

using namespace pfjss;

namespace {

CriteriaWeights equal_weights(std::size_t k, std::vector<Direction> dirs = {}) {
  std::vector<double> c(k, 1.0);
  auto w = crisp_weights(c);
  for (std::size_t j = 0; j < dirs.size(); ++j) w.items[j].direction = dirs[j];
  return w;
}

DecisionMatrix random_matrix(std::mt19937_64& gen, std::size_t n, std::size_t k, bool mixed) {
  std::uniform_real_distribution<double> val(1, 100), wt(0.05, 1);
  std::vector<double> c(k);
  for (auto& v : c) v = wt(gen);
  auto w = crisp_weights(c);
  if (mixed)
    for (auto& it : w.items) it.direction = gen() % 2 ? Direction::Benefit : Direction::Cost;
  std::vector<std::vector<double>> rows(n, std::vector<double>(k));
  for (auto& r : rows)
    for (auto& v : r) v = val(gen);
  return make_matrix(fixtures::job_ids(n), w, rows);
}

using Ranker = std::function<Ranking(const DecisionMatrix&)>;

std::vector<std::pair<const char*, Ranker>> rankers() {
  return {{"TOPSIS", [](const DecisionMatrix& m) { return topsis_rank(m).first; }},
          {"EDAS", [](const DecisionMatrix& m) { return edas_rank(m).first; }},
          {"CP", [](const DecisionMatrix& m) { return cp_rank(m).first; }},
          {"PROMETHEE", [](const DecisionMatrix& m) { return promethee_rank(m).first; }}};
}

// Every pair the oracle separates by more than `gap` must be ordered the same way.
void check_order(const Ranking& r, const std::vector<double>& scores, bool ascending,
                 double gap = 1e-9) {
  for (std::size_t i = 0; i < scores.size(); ++i)
    for (std::size_t j = 0; j < scores.size(); ++j) {
      double diff = ascending ? scores[j] - scores[i] : scores[i] - scores[j];
      if (diff > gap) CHECK(r.rank_of(JobId(i + 1)) < r.rank_of(JobId(j + 1)));
    }
}

bool valid_permutation(const Ranking& r) {
  std::set<int> ranks;
  for (const auto& e : r.entries) ranks.insert(e.rank);
  return ranks.size() == r.size() && *ranks.begin() == 1 && *ranks.rbegin() == int(r.size());
}

}  // namespace

TEST_SUITE("mcdm") {

TEST_CASE("rank_from_scores orientation and ties") {
  std::vector<std::pair<JobId, double>> s{{1, 0.3}, {2, 0.7}};
  auto r = rank_from_scores(s, Orientation::Descending);
  CHECK(r.top() == 2);
  CHECK(r.rank_of(1) == 2);
  std::vector<std::pair<JobId, double>> tie{{2, 0.5}, {1, 0.5}};
  auto t = rank_from_scores(tie, Orientation::Descending);
  CHECK(t.rank_of(1) == 1);
  CHECK(t.rank_of(2) == 2);
  CHECK_FALSE(t.notes.empty());
  std::vector<std::pair<JobId, double>> bad{{1, std::nan("")}};
  CHECK_THROWS(rank_from_scores(bad, Orientation::Ascending));

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<JobId, double>> xs;
    std::vector<double> raw;
    for (JobId j = 1; j <= 5; ++j) {
      raw.push_back(u(gen));
      xs.emplace_back(j, raw.back());
    }
    auto asc = rank_from_scores(xs, Orientation::Ascending);
    auto expect = oracle::ranks(raw, true);
    for (JobId j = 1; j <= 5; ++j) CHECK(asc.rank_of(j) == expect[std::size_t(j - 1)]);
  }
}

TEST_CASE("TOPSIS small cases") {
  auto same = make_matrix({1, 2, 3}, equal_weights(2), {{4, 4}, {4, 4}, {4, 4}});
  auto r = topsis_rank(same).first;
  CHECK(r.entries[0].job == 1);
  CHECK(r.entries[2].job == 3);

  auto sym = make_matrix({1, 2}, equal_weights(2), {{1, 2}, {2, 1}});
  auto [rs, ts] = topsis_rank(sym);
  CHECK(ts.closeness[0] == doctest::Approx(ts.closeness[1]));
  CHECK(rs.top() == 1);

  auto single = make_matrix({5}, equal_weights(2), {{3, 4}});
  auto [r1, t1] = topsis_rank(single);
  CHECK(r1.top() == 5);
  CHECK(t1.closeness[0] == 1.0);

  auto zero = make_matrix({1, 2}, equal_weights(2), {{0, 1}, {0, 2}});
  auto [rz, tz] = topsis_rank(zero);
  CHECK(tz.zero_norm_columns == std::vector<std::size_t>{0});
  CHECK(rz.top() == 1);
  CHECK_THROWS(topsis_rank(DecisionMatrix{}));
}

TEST_CASE("TOPSIS closeness bounds and column scale invariance") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_matrix(gen, 2 + gen() % 9, 1 + gen() % 6, true);
    auto [r, t] = topsis_rank(m);
    for (double c : t.closeness) {
      CHECK(c >= 0);
      CHECK(c <= 1);
    }
    for (double s : t.s_plus) CHECK(s >= 0);
    auto scaled = m;
    std::size_t col = gen() % m.col_count();
    for (std::size_t i = 0; i < m.row_count(); ++i) scaled.at(i, col) *= 7.25;
    auto rs = topsis_rank(scaled).first;
    check_order(rs, t.closeness, false, 1e-9);
  }
}

TEST_CASE("EDAS small cases") {
  auto m = make_matrix({1, 2, 3}, equal_weights(2), {{1, 1}, {2, 2}, {3, 3}});
  auto [r, t] = edas_rank(m);
  CHECK(r.rank_of(1) == 1);
  CHECK(r.rank_of(2) == 2);
  CHECK(r.rank_of(3) == 3);
  // Row 2 sits on the average: no distance in either direction.
  CHECK(t.pda[2] == 0);
  CHECK(t.nda[2] == 0);
  CHECK(t.pda[3] == 0);
  CHECK(t.nda[3] == 0);
  CHECK(t.appraisal[1] == doctest::Approx(0.5 * t.nsn[1]));

  auto zero_avg = make_matrix({1, 2}, equal_weights(1), {{-1}, {1}});
  CHECK_THROWS_WITH(edas_rank(zero_avg), doctest::Contains("c1"));

  auto flat = make_matrix({1, 2}, equal_weights(2), {{0, 5}, {0, 5}});
  auto [rf, tf] = edas_rank(flat);
  CHECK(tf.constant_columns.size() == 2);
  CHECK(rf.notes.size() >= 2);

  auto [rl, tl] = edas_rank(m, EdasAppraisal::Literal);
  CHECK(tl.appraisal[0] == doctest::Approx(0.5 * (tl.nsp[0] - tl.nsn[0])));
}

TEST_CASE("EDAS distance invariants") {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_matrix(gen, 2 + gen() % 9, 1 + gen() % 6, true);
    auto [r, t] = edas_rank(m);
    for (std::size_t i = 0; i < t.pda.size(); ++i) {
      CHECK(t.pda[i] >= 0);
      CHECK(t.nda[i] >= 0);
      CHECK(t.pda[i] * t.nda[i] == 0);
    }
    for (std::size_t i = 0; i < t.appraisal.size(); ++i) {
      CHECK(t.nsp[i] >= 0);
      CHECK(t.nsp[i] <= 1);
      CHECK(t.nsn[i] >= 0);
      CHECK(t.nsn[i] <= 1);
      CHECK(t.appraisal[i] >= 0);
      CHECK(t.appraisal[i] <= 1);
    }
  }
}

TEST_CASE("CP small cases") {
  auto m = make_matrix({1, 2}, equal_weights(1), {{1}, {3}});
  auto [r, t] = cp_rank(m, 1);
  CHECK(t.distance[0] == 0);
  CHECK(t.distance[1] == doctest::Approx(1));
  CHECK(r.rank_of(1) == 1);
  CHECK_THROWS(cp_rank(m, 0.5));

  auto ideal = make_matrix({1, 2, 3}, equal_weights(2), {{1, 1}, {2, 3}, {3, 2}});
  auto [ri, ti] = cp_rank(ideal);
  CHECK(ti.distance[0] == 0);
  CHECK(ri.top() == 1);

  auto [rinf, tinf] = cp_rank(ideal, kInfinityNorm);
  CHECK(tinf.distance[1] == doctest::Approx(0.5));  // max(0.5 * 0.5, 0.5 * 1)
  CHECK(tinf.distance[2] == doctest::Approx(0.5));
}

TEST_CASE("PROMETHEE small cases") {
  auto m = make_matrix({1, 2, 3}, equal_weights(1), {{1}, {2}, {3}});
  auto [r, t] = promethee_rank(m);
  CHECK(t.phi[0] == doctest::Approx(2));
  CHECK(t.phi[1] == doctest::Approx(0));
  CHECK(t.phi[2] == doctest::Approx(-2));
  CHECK(r.rank_of(1) == 1);

  auto twin = make_matrix({1, 2}, equal_weights(2), {{3, 4}, {3, 4}});
  auto [rt, tt] = promethee_rank(twin);
  CHECK(tt.phi[0] == 0);
  CHECK(tt.phi[1] == 0);
  CHECK(rt.top() == 1);

  auto single = make_matrix({4}, equal_weights(2), {{3, 4}});
  auto [r1, t1] = promethee_rank(single);
  CHECK(t1.phi[0] == 0);
  CHECK(r1.top() == 4);

  CHECK_THROWS(PreferenceFunction::parse("gaussian:1"));
  CHECK_THROWS(PreferenceFunction::parse("linear:2:1"));
  std::vector<PreferenceFunction> three(3);
  CHECK_THROWS(promethee_rank(twin, three));
}

TEST_CASE("preference functions") {
  auto usual = PreferenceFunction::parse("usual");
  CHECK(usual(0) == 0);
  CHECK(usual(1e-9) == 1);
  auto quasi = PreferenceFunction::parse("quasi:2");
  CHECK(quasi(2) == 0);
  CHECK(quasi(2.1) == 1);
  auto lin = PreferenceFunction::parse("linear:1:3");
  CHECK(lin(1) == 0);
  CHECK(lin(2) == doctest::Approx(0.5));
  CHECK(lin(4) == 1);
  CHECK(lin.describe() == "linear:1:3");
}

TEST_CASE("PROMETHEE flows sum to zero and swap antisymmetrically") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_matrix(gen, 2 + gen() % 9, 1 + gen() % 6, true);
    std::vector<PreferenceFunction> pref{PreferenceFunction::parse("linear:2:30")};
    auto t = promethee_rank(m, pref).second;
    double sum = std::accumulate(t.phi.begin(), t.phi.end(), 0.0);
    CHECK(std::abs(sum) < 1e-9);
    for (double pi : t.index) {
      CHECK(pi >= 0);
      CHECK(pi <= 1 + 1e-12);
    }
  }
  auto two = make_matrix({1, 2}, equal_weights(3), {{1, 5, 2}, {2, 3, 2}});
  auto swapped = make_matrix({1, 2}, equal_weights(3), {{2, 3, 2}, {1, 5, 2}});
  auto a = promethee_rank(two).second, b = promethee_rank(swapped).second;
  CHECK(a.phi[0] == doctest::Approx(b.phi[1]));
  CHECK(a.phi[0] == doctest::Approx(-a.phi[1]));
}

TEST_CASE("rankers agree with naive re-derivations") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 300; ++trial) {
    auto m = random_matrix(gen, 1 + gen() % 10, 1 + gen() % 6, true);
    auto p = oracle::from(m);
    auto tops = topsis_rank(m);
    auto ed = edas_rank(m);
    auto cp2 = cp_rank(m, 2);
    auto cp1 = cp_rank(m, 1);
    auto cpi = cp_rank(m, kInfinityNorm);
    auto pr = promethee_rank(m);
    auto o_t = oracle::topsis(p), o_e = oracle::edas(p), o_c2 = oracle::cp(p, 2),
         o_c1 = oracle::cp(p, 1), o_ci = oracle::cp(p, INFINITY), o_p = oracle::promethee(p);
    for (std::size_t i = 0; i < m.row_count(); ++i) {
      CHECK(tops.second.closeness[i] == doctest::Approx(o_t[i]).epsilon(1e-12));
      CHECK(ed.second.appraisal[i] == doctest::Approx(o_e[i]).epsilon(1e-12));
      CHECK(cp2.second.distance[i] == doctest::Approx(o_c2[i]).epsilon(1e-12));
      CHECK(cp1.second.distance[i] == doctest::Approx(o_c1[i]).epsilon(1e-12));
      CHECK(cpi.second.distance[i] == doctest::Approx(o_ci[i]).epsilon(1e-12));
      CHECK(pr.second.phi[i] == doctest::Approx(o_p[i]).epsilon(1e-12));
    }
    check_order(tops.first, o_t, false);
    check_order(ed.first, o_e, false);
    check_order(cp2.first, o_c2, true);
    check_order(pr.first, o_p, false);
    CHECK(valid_permutation(pr.first));
  }
}

TEST_CASE("row permutations permute the ranking identically") {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2 + gen() % 5;
    auto m = random_matrix(gen, n, 1 + gen() % 5, true);
    // Discrete values make ties likely, exercising the tie-break.
    for (auto& v : m.values) v = std::round(v / 25);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (const auto& [name, rank] : rankers()) {
      auto base = rank(m);
      auto p = perm;
      do {
        DecisionMatrix q;
        q.weights = m.weights;
        for (auto i : p) {
          q.rows.push_back(m.rows[i]);
          for (std::size_t j = 0; j < m.col_count(); ++j) q.values.push_back(m.at(i, j));
        }
        auto r = rank(q);
        for (const auto& e : base.entries) {
          CHECK_MESSAGE(r.rank_of(e.job) == e.rank, name);
          CHECK(r.score_of(e.job) == e.score);
        }
      } while (std::next_permutation(p.begin(), p.end()));
    }
  }
}

TEST_CASE("dominated alternatives never outrank their dominator") {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> worse(0, 5);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 2 + gen() % 8, k = 1 + gen() % 6;
    auto m = random_matrix(gen, n, k, true);
    std::size_t a = gen() % n, b = (a + 1 + gen() % (n - 1)) % n;
    std::size_t strict = gen() % k;
    for (std::size_t j = 0; j < k; ++j) {
      double d = j == strict ? 0.5 + worse(gen) : (gen() % 2 ? 0 : worse(gen));
      bool cost = m.weights.items[j].direction == Direction::Cost;
      m.at(b, j) = m.at(a, j) + (cost ? d : -d);
    }
    for (const auto& [name, rank] : rankers()) {
      auto r = rank(m);
      CHECK_MESSAGE(r.rank_of(m.rows[a]) < r.rank_of(m.rows[b]), name);
    }
  }
}

TEST_CASE("trace export lists every intermediate") {
  auto m = fixtures::matrix(fixtures::kQueueFixture);
  auto cols = m.weights.names();
  auto t = trace_csv(topsis_rank(m).second, cols);
  CHECK(t.find("normalized,process_time") != std::string::npos);
  CHECK(t.find("closeness") != std::string::npos);
  CHECK(trace_csv(edas_rank(m).second, cols).find("pda") != std::string::npos);
  CHECK(trace_csv(cp_rank(m).second, cols).find("lp") != std::string::npos);
  auto p = trace_csv(promethee_rank(m).second, cols);
  CHECK(p.find("J1,J2") != std::string::npos);
  CHECK(p.find("phi_plus") != std::string::npos);
}

TEST_CASE("fixture rankings favour J7") {
  auto m = fixtures::matrix(fixtures::kQueueFixture);
  for (const auto& [name, rank] : rankers()) CHECK_MESSAGE(rank(m).top() == 7, name);
  auto worked = fixtures::matrix(fixtures::kWorkedFixture);
  CHECK(promethee_rank(worked).first.top() == 7);
  auto o = oracle::topsis(oracle::from(m));
  check_order(topsis_rank(m).first, o, false);
}

}  // TEST_SUITE
