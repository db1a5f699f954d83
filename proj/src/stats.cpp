#include "pfjss/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pfjss/text.hpp"

namespace pfjss {

namespace {

// Lentz's method for the incomplete beta continued fraction.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1) < kEps) return h;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw std::invalid_argument("incomplete_beta: a and b must be positive");
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                    b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1) / (a + b + 2)) return front * beta_cf(a, b, x) / a;
  return 1 - front * beta_cf(b, a, 1 - x) / b;
}

double f_sf(double f, double d1, double d2) {
  if (!(f > 0)) return 1;
  if (std::isinf(f)) return 0;
  return incomplete_beta(d2 / 2, d1 / 2, d2 / (d2 + d1 * f));
}

double t_two_tailed(double t, double df) {
  if (std::isnan(t)) return 1;
  if (std::isinf(t)) return 0;
  double p = incomplete_beta(df / 2, 0.5, df / (df + t * t));
  return std::clamp(p, 0.0, 1.0);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("variance needs at least two points");
  double m = mean(xs), ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

AnovaResult one_way_anova(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw std::invalid_argument("ANOVA needs at least two groups");
  for (const auto& g : groups)
    if (g.size() < 2) throw std::invalid_argument("ANOVA needs at least two samples per group");
  std::size_t n = 0;
  double total = 0;
  for (const auto& g : groups) {
    n += g.size();
    total += std::accumulate(g.begin(), g.end(), 0.0);
  }
  double grand = total / static_cast<double>(n);
  AnovaResult r;
  for (const auto& g : groups) {
    double gm = mean(g);
    r.ss_between += static_cast<double>(g.size()) * (gm - grand) * (gm - grand);
    for (double x : g) r.ss_within += (x - gm) * (x - gm);
  }
  r.ss_total = r.ss_between + r.ss_within;
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(n - groups.size());
  r.ms_between = r.ss_between / r.df_between;
  r.ms_within = r.ss_within / r.df_within;
  // Relative cutoff keeps shifted-but-identical groups at exactly zero.
  double scale = std::max(1.0, grand * grand) * static_cast<double>(n);
  if (r.ss_between <= 1e-24 * scale) r.ss_between = r.ms_between = 0;
  if (r.ms_between == 0) {
    r.f = 0;
    r.p = 1;
  } else if (r.ms_within == 0) {
    r.f = std::numeric_limits<double>::infinity();
    r.p = 0;
  } else {
    r.f = r.ms_between / r.ms_within;
    r.p = f_sf(r.f, r.df_between, r.df_within);
  }
  return r;
}

TTestResult independent_t_test(std::span<const double> a, std::span<const double> b,
                               bool equal_variance) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t-test needs two points per sample");
  TTestResult r;
  r.equal_variance = equal_variance;
  r.mean_a = mean(a);
  r.mean_b = mean(b);
  double va = sample_variance(a), vb = sample_variance(b);
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double se;
  if (equal_variance) {
    r.df = na + nb - 2;
    double sp2 = ((na - 1) * va + (nb - 1) * vb) / r.df;
    se = std::sqrt(sp2 * (1 / na + 1 / nb));
  } else {
    double qa = va / na, qb = vb / nb;
    se = std::sqrt(qa + qb);
    double denom = qa * qa / (na - 1) + qb * qb / (nb - 1);
    r.df = denom > 0 ? (qa + qb) * (qa + qb) / denom : na + nb - 2;
  }
  double diff = r.mean_a - r.mean_b;
  if (se == 0) {
    r.t = diff == 0 ? 0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  } else {
    r.t = diff / se;
  }
  r.p = r.t == 0 ? 1 : t_two_tailed(r.t, r.df);
  return r;
}

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> idx(xs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return xs[i] < xs[j]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && xs[idx[j + 1]] == xs[idx[i]]) ++j;
    double r = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("spearman needs two equal-length vectors of length >= 2");
  auto ra = average_ranks(a), rb = average_ranks(b);
  double ma = mean(ra), mb = mean(rb), sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0;
  return sab / std::sqrt(saa * sbb);
}

std::string anova_csv_header() { return "measure,Source,Sum of Squares,df,Mean Square,F,Sig.\n"; }

std::string anova_csv_rows(const std::string& measure, const AnovaResult& r) {
  std::ostringstream out;
  out << measure << ",Between Groups," << fmt_fixed(r.ss_between, 3) << ',' << r.df_between << ','
      << fmt_fixed(r.ms_between, 3) << ',' << fmt_fixed(r.f, 3) << ',' << fmt_fixed(r.p, 3) << '\n';
  out << measure << ",Within Groups," << fmt_fixed(r.ss_within, 3) << ',' << r.df_within << ','
      << fmt_fixed(r.ms_within, 3) << ",,\n";
  out << measure << ",Total," << fmt_fixed(r.ss_total, 3) << ',' << r.df_between + r.df_within
      << ",,,\n";
  return out.str();
}

std::string ttest_csv_header() {
  return "measure,group_a,group_b,variances,mean_a,mean_b,t,df,Sig. (2-tailed)\n";
}

std::string ttest_csv_row(const std::string& measure, const std::string& a_name,
                          const std::string& b_name, const TTestResult& r) {
  std::ostringstream out;
  out << measure << ',' << a_name << ',' << b_name << ','
      << (r.equal_variance ? "equal assumed" : "equal not assumed") << ','
      << fmt_fixed(r.mean_a, 3) << ',' << fmt_fixed(r.mean_b, 3) << ',' << fmt_fixed(r.t, 3) << ','
      << fmt_fixed(r.df, 3) << ',' << fmt_fixed(r.p, 3) << '\n';
  return out.str();
}

}  // namespace pfjss
