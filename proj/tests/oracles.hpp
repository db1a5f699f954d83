#pragma once

// Straight-line re-derivations of the ranking formulas, kept deliberately
// naive (no canonical row order, no shared helpers) so they can check the
// library implementations.

#include <algorithm>
#include <cmath>
#include <vector>

#include "pfjss/criteria.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

struct Problem {
  Matrix x;
  std::vector<double> w;     // normalized
  std::vector<bool> benefit;
};

inline Problem from(const pfjss::DecisionMatrix& m) {
  Problem p;
  for (std::size_t i = 0; i < m.row_count(); ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < m.col_count(); ++j) row.push_back(m.at(i, j));
    p.x.push_back(row);
  }
  p.w = m.weights.normalized();
  for (auto d : m.weights.directions()) p.benefit.push_back(d == pfjss::Direction::Benefit);
  return p;
}

inline std::vector<double> topsis(const Problem& p) {
  std::size_t n = p.x.size(), k = p.w.size();
  Matrix v(n, std::vector<double>(k, 0));
  for (std::size_t j = 0; j < k; ++j) {
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) norm += p.x[i][j] * p.x[i][j];
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) v[i][j] = norm > 0 ? p.w[j] * p.x[i][j] / norm : 0;
  }
  std::vector<double> best(k), worst(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> col;
    for (std::size_t i = 0; i < n; ++i) col.push_back(v[i][j]);
    double lo = *std::min_element(col.begin(), col.end());
    double hi = *std::max_element(col.begin(), col.end());
    best[j] = p.benefit[j] ? hi : lo;
    worst[j] = p.benefit[j] ? lo : hi;
  }
  std::vector<double> cc;
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0, b = 0;
    for (std::size_t j = 0; j < k; ++j) {
      a += std::pow(v[i][j] - best[j], 2);
      b += std::pow(v[i][j] - worst[j], 2);
    }
    a = std::sqrt(a);
    b = std::sqrt(b);
    cc.push_back(a + b == 0 ? 1 : b / (a + b));
  }
  return cc;
}

inline std::vector<double> edas(const Problem& p) {
  std::size_t n = p.x.size(), k = p.w.size();
  std::vector<double> sp(n, 0), sn(n, 0);
  for (std::size_t j = 0; j < k; ++j) {
    double av = 0;
    for (std::size_t i = 0; i < n; ++i) av += p.x[i][j] / static_cast<double>(n);
    bool constant = true;
    for (std::size_t i = 0; i < n; ++i) constant = constant && p.x[i][j] == p.x[0][j];
    if (constant) continue;
    for (std::size_t i = 0; i < n; ++i) {
      double diff = p.benefit[j] ? p.x[i][j] - av : av - p.x[i][j];
      if (diff > 0) sp[i] += p.w[j] * diff / std::abs(av);
      if (diff < 0) sn[i] += p.w[j] * -diff / std::abs(av);
    }
  }
  double msp = *std::max_element(sp.begin(), sp.end());
  double msn = *std::max_element(sn.begin(), sn.end());
  std::vector<double> as;
  for (std::size_t i = 0; i < n; ++i) {
    double a = msp > 0 ? sp[i] / msp : 0;
    double b = msn > 0 ? 1 - sn[i] / msn : 1;
    as.push_back((a + b) / 2);
  }
  return as;
}

inline std::vector<double> cp(const Problem& p, double power) {
  std::size_t n = p.x.size(), k = p.w.size();
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0;
    for (std::size_t j = 0; j < k; ++j) {
      double lo = p.x[0][j], hi = p.x[0][j];
      for (std::size_t r = 0; r < n; ++r) {
        lo = std::min(lo, p.x[r][j]);
        hi = std::max(hi, p.x[r][j]);
      }
      if (lo == hi) continue;
      double ideal = p.benefit[j] ? hi : lo;
      double dev = std::abs(ideal - p.x[i][j]) / (hi - lo);
      if (std::isinf(power))
        acc = std::max(acc, p.w[j] * dev);
      else
        acc += p.w[j] * std::pow(dev, power);
    }
    out.push_back(std::isinf(power) ? acc : std::pow(acc, 1 / power));
  }
  return out;
}

// Usual criterion only.
inline std::vector<double> promethee(const Problem& p) {
  std::size_t n = p.x.size(), k = p.w.size();
  std::vector<double> phi(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      double pi_ab = 0, pi_ba = 0;
      for (std::size_t j = 0; j < k; ++j) {
        double d = p.x[a][j] - p.x[b][j];
        if (!p.benefit[j]) d = -d;
        if (d > 0) pi_ab += p.w[j];
        if (d < 0) pi_ba += p.w[j];
      }
      phi[a] += pi_ab - pi_ba;
    }
  return phi;
}

// 1-based ranks, higher score first unless `ascending`, ties to lower index.
inline std::vector<int> ranks(const std::vector<double>& s, bool ascending) {
  std::vector<int> r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    int better = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      bool ahead = ascending ? s[j] < s[i] : s[j] > s[i];
      if (ahead || (s[j] == s[i] && j < i)) ++better;
    }
    r[i] = better + 1;
  }
  return r;
}

}  // namespace oracle
