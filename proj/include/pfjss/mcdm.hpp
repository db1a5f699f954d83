#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfjss/criteria.hpp"

namespace pfjss {

enum class Orientation { Ascending, Descending };

struct RankEntry {
  JobId job = 0;
  double score = 0;
  int rank = 0;
};

/// Total order over alternatives, best first. Ties go to the lower job id.
struct Ranking {
  std::string method;
  std::vector<RankEntry> entries;  // sorted by rank
  std::vector<std::string> notes;  // tie-breaks and degenerate-input flags

  std::size_t size() const { return entries.size(); }
  JobId top() const { return entries.at(0).job; }
  int rank_of(JobId job) const;
  double score_of(JobId job) const;
};

Ranking rank_from_scores(std::span<const std::pair<JobId, double>> scores, Orientation o,
                         std::string method = "scores");

struct TopsisTrace {
  std::vector<JobId> rows;
  std::vector<double> normalized;  // r_ij, row-major
  std::vector<double> weighted;    // V_ij
  std::vector<double> ideal, anti_ideal;
  std::vector<double> s_plus, s_minus, closeness;
  std::vector<std::size_t> zero_norm_columns;
};

struct EdasTrace {
  std::vector<JobId> rows;
  std::vector<double> average;
  std::vector<double> pda, nda;  // row-major
  std::vector<double> sp, sn, nsp, nsn, appraisal;
  std::vector<std::size_t> constant_columns;
};

struct CpTrace {
  std::vector<JobId> rows;
  std::vector<double> ideal, anti_ideal;
  double p = 2;
  std::vector<double> distance;
};

struct PrometheeTrace {
  std::vector<JobId> rows;
  std::size_t criteria = 0;
  // Indexed [(a * n + b) * k + j] for deviations and preferences,
  // [a * n + b] for the aggregated index.
  std::vector<double> deviation, preference, index;
  std::vector<double> phi_plus, phi_minus, phi;
};

/// r_ij = x_ij / ||x_j||, V = w r, closeness S- / (S+ + S-), higher first.
std::pair<Ranking, TopsisTrace> topsis_rank(const DecisionMatrix& m);

enum class EdasAppraisal {
  Standard,  // (NSP + NSN) / 2
  Literal,   // (NSP - NSN) / 2, as some pseudocode prints it
};

std::pair<Ranking, EdasTrace> edas_rank(const DecisionMatrix& m,
                                        EdasAppraisal as = EdasAppraisal::Standard);

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// Weighted L_p distance to the per-criterion ideal, lower first.
std::pair<Ranking, CpTrace> cp_rank(const DecisionMatrix& m, double p = 2.0);

struct PreferenceFunction {
  enum class Shape { Usual, Quasi, Linear };
  Shape shape = Shape::Usual;
  double q = 0;  // indifference threshold
  double s = 0;  // strict-preference threshold (Linear)

  double operator()(double d) const;
  std::string describe() const;
  // "usual", "quasi:<q>", "linear:<q>:<s>"
  static PreferenceFunction parse(const std::string& spec);
};

/// PROMETHEE II net flow, highest first. `prefs` holds one function per
/// criterion or a single function applied to all of them.
std::pair<Ranking, PrometheeTrace> promethee_rank(const DecisionMatrix& m,
                                                  std::span<const PreferenceFunction> prefs = {});

// Section-per-matrix CSV of every intermediate, for audit by hand.
std::string trace_csv(const TopsisTrace& t, std::span<const std::string> cols);
std::string trace_csv(const EdasTrace& t, std::span<const std::string> cols);
std::string trace_csv(const CpTrace& t, std::span<const std::string> cols);
std::string trace_csv(const PrometheeTrace& t, std::span<const std::string> cols);

}  // namespace pfjss
