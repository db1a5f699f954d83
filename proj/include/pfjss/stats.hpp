#pragma once

#include <span>
#include <string>
#include <vector>

namespace pfjss {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);
/// Upper tail P(F > f) for F(d1, d2).
double f_sf(double f, double d1, double d2);
/// Two-tailed P(|T| > |t|) for Student t with `df` degrees of freedom.
double t_two_tailed(double t, double df);

struct AnovaResult {
  double ss_between = 0, ss_within = 0, ss_total = 0;
  int df_between = 0, df_within = 0;
  double ms_between = 0, ms_within = 0;
  double f = 0;
  double p = 1;
};

AnovaResult one_way_anova(std::span<const std::vector<double>> groups);

struct TTestResult {
  double mean_a = 0, mean_b = 0;
  double t = 0;
  double df = 0;
  double p = 1;
  bool equal_variance = true;
};

TTestResult independent_t_test(std::span<const double> a, std::span<const double> b,
                               bool equal_variance);

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
/// Average ranks, 1-based, ties share the mean rank.
std::vector<double> average_ranks(std::span<const double> xs);
/// Pearson correlation of average ranks; handles ties.
double spearman(std::span<const double> a, std::span<const double> b);

/// "measure,Source,Sum of Squares,df,Mean Square,F,Sig." rows for a single result.
std::string anova_csv_header();
std::string anova_csv_rows(const std::string& measure, const AnovaResult& r);
std::string ttest_csv_header();
std::string ttest_csv_row(const std::string& measure, const std::string& a_name,
                          const std::string& b_name, const TTestResult& r);

}  // namespace pfjss
