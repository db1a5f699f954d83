#pragma once

#include <array>
#include <vector>

#include "pfjss/criteria.hpp"
#include "pfjss/rules.hpp"

namespace fixtures {

// Ten queued jobs J1..J10; columns: process time, due date, operations,
// setup time, STROP.
inline const std::vector<std::vector<double>> kQueueFixture = {
    {27, 49.5, 6, 1.3, 3.8}, {20, 37.5, 5, 1.2, 3.5}, {27, 48, 5, 1.6, 4.2},
    {22, 40.5, 5, 1.3, 3.7}, {34, 60, 6, 1.7, 4.3},   {26, 45, 6, 1.3, 3.2},
    {17, 33, 5, 1.2, 3.2},   {33, 49.5, 5, 1.6, 3.3}, {24, 45, 6, 1.2, 3.5},
    {25, 46.5, 6, 1.2, 3.6}};

// Same jobs as printed in the worked PROMETHEE example.
inline const std::vector<std::vector<double>> kWorkedFixture = {
    {27, 50, 6, 1.4, 3.8}, {20, 38, 5, 1.2, 3.5}, {27, 48, 5, 1.6, 4.2}, {22, 41, 5, 1.3, 3.7},
    {34, 60, 6, 1.7, 4.3}, {26, 45, 6, 1.4, 3.2}, {17, 33, 5, 1.0, 3.2}, {33, 50, 5, 1.7, 3.3},
    {24, 45, 6, 1.2, 3.5}, {25, 47, 6, 1.3, 3.6}};

// Published ranks per job J1..J10.
inline constexpr std::array<int, 10> kTopsisRanks{9, 2, 8, 3, 10, 4, 1, 7, 5, 6};
inline constexpr std::array<int, 10> kEdasRanks{9, 7, 10, 4, 3, 5, 1, 2, 8, 6};
inline constexpr std::array<int, 10> kCpRanks{8, 4, 10, 7, 9, 2, 1, 3, 5, 6};
inline constexpr std::array<int, 10> kPrometheeRanks{10, 4, 3, 2, 9, 6, 1, 8, 6, 5};
// Final ranks of the worked PROMETHEE example.
inline constexpr std::array<int, 10> kWorkedPrometheeRanks{8, 2, 7, 3, 10, 5, 1, 9, 4, 6};

inline std::vector<pfjss::JobId> job_ids(std::size_t n) {
  std::vector<pfjss::JobId> ids;
  for (std::size_t i = 1; i <= n; ++i) ids.push_back(static_cast<pfjss::JobId>(i));
  return ids;
}

inline pfjss::DecisionMatrix matrix(const std::vector<std::vector<double>>& rows,
                                    const pfjss::CriteriaWeights& w = pfjss::default_weights()) {
  return pfjss::make_matrix(job_ids(rows.size()), w, rows);
}

// Rank of J1..Jn in job order.
inline std::vector<double> ranks_of(const pfjss::Ranking& r) {
  std::vector<double> out;
  for (std::size_t j = 1; j <= r.size(); ++j)
    out.push_back(r.rank_of(static_cast<pfjss::JobId>(j)));
  return out;
}

template <std::size_t N>
std::vector<double> as_doubles(const std::array<int, N>& a) {
  return std::vector<double>(a.begin(), a.end());
}

}  // namespace fixtures
