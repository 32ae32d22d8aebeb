#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace latvit {

struct Group {
  std::string label;
  std::vector<double> values;
};

struct GroupedSamples {
  std::vector<Group> groups;
};

struct AnovaResult {
  double f = 0.0;
  int df1 = 0;
  int df2 = 0;
  double p = 1.0;
  bool degenerate_within = false;  // zero within-group variance, unequal means
};

AnovaResult anova_oneway(const GroupedSamples& data);

struct TukeyPair {
  std::string a;  // condition x
  std::string b;  // condition y; diff = mean(x) - mean(y)
  double diff = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  char sign = 'n';  // '+', '-', or 'n'
};

struct TukeyResult {
  double q_critical = 0.0;
  int df = 0;
  std::vector<TukeyPair> pairs;  // ordered (y ascending, then x ascending)
};

/// Tukey HSD family-wise intervals at the given confidence level. Unbalanced
/// groups fall back to the Tukey-Kramer half-width.
TukeyResult tukey_hsd(const GroupedSamples& data, double level = 0.95);

// -- special functions ------------------------------------------------------

double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail of the F distribution.
double f_survival(double f, int df1, int df2);

/// Inverse CDF of Student's t.
double student_t_quantile(double p, int df);

double normal_cdf(double z);
double normal_pdf(double z);

/// CDF of the range of k iid standard normals.
double normal_range_cdf(double w, int k);

/// CDF and quantile of the studentized range, evaluated by nested adaptive
/// quadrature (relative tolerance 1e-6).
double studentized_range_cdf(double q, int k, int df);
double studentized_range_quantile(double p, int k, int df);

/// Linear-interpolation sample quantile (R type 7). `sorted` must be sorted.
double quantile_type7(std::span<const double> sorted, double p);

// -- condition summaries ----------------------------------------------------

struct ConditionSlice {
  std::string condition;
  GroupedSamples by_level;  // one group per look-ahead value, ascending
};

struct ConditionSummary {
  std::string condition;
  std::vector<double> group_means;
  AnovaResult anova;
  TukeyResult tukey;
  bool skipped = false;
  std::string skip_reason;
};

std::vector<ConditionSummary> summarize_conditions(
    const std::vector<ConditionSlice>& slices, double level = 0.95);

/// Text grid of +/-/n signs, one row per condition, one column per pair.
void write_sign_grid(std::ostream& os, const std::string& condition_header,
                     const std::vector<ConditionSummary>& rows);

}  // namespace latvit
