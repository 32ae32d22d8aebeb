#include "latvit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace latvit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_groups(const GroupedSamples& data) {
  if (data.groups.size() < 2)
    throw std::invalid_argument("need at least two groups");
  for (const Group& g : data.groups)
    if (g.values.size() < 2)
      throw std::invalid_argument("group '" + g.label +
                                  "' needs at least two samples");
}

double mean_of(const std::vector<double>& values) {
  double m = 0.0;
  for (double v : values) m += v;
  return m / static_cast<double>(values.size());
}

// Continued-fraction evaluation of the regularized incomplete beta (Lentz).
double betacf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 3e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

// Recursive adaptive Simpson with Richardson correction.
struct AdaptiveQuad {
  const std::function<double(double)>& f;
  double tol;
  int max_depth;

  double run(double a, double b) const {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    return refine(a, fa, m, fm, b, fb, simpson(a, fa, fm, fb, b), tol,
                  max_depth);
  }

  static double simpson(double a, double fa, double fm, double fb, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double refine(double a, double fa, double m, double fm, double b, double fb,
                double whole, double eps, int depth) const {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, flm, fm, m);
    double right = simpson(m, fm, frm, fb, b);
    double err = left + right - whole;
    if (std::fabs(err) <= 15.0 * eps) return left + right + err / 15.0;
    if (depth <= 0)
      throw std::runtime_error(
          "adaptive quadrature failed to converge on [" + std::to_string(a) +
          ", " + std::to_string(b) + "], residual " + std::to_string(err));
    return refine(a, fa, lm, flm, m, fm, left, 0.5 * eps, depth - 1) +
           refine(m, fm, rm, frm, b, fb, right, 0.5 * eps, depth - 1);
  }
};

double integrate(const std::function<double(double)>& f,
                 const std::vector<double>& knots, double tol) {
  AdaptiveQuad quad{f, tol, 48};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    total += quad.run(knots[i], knots[i + 1]);
  return total;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0)
    throw std::invalid_argument("incomplete beta: parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(ln_front) * betacf(a, b, x) / a;
  return 1.0 - std::exp(ln_front) * betacf(b, a, 1.0 - x) / b;
}

double f_survival(double f, int df1, int df2) {
  if (df1 < 1 || df2 < 1)
    throw std::invalid_argument("F distribution: degrees of freedom must be >= 1");
  if (!(f > 0.0)) return 1.0;
  if (std::isinf(f)) return 0.0;
  double x = df2 / (df2 + df1 * f);
  return regularized_incomplete_beta(0.5 * df2, 0.5 * df1, x);
}

double student_t_quantile(double p, int df) {
  if (df < 1) throw std::invalid_argument("t quantile: df must be >= 1");
  if (p <= 0.0 || p >= 1.0)
    throw std::invalid_argument("t quantile: p must lie in (0,1)");
  if (p == 0.5) return 0.0;
  bool upper = p > 0.5;
  double target = upper ? p : 1.0 - p;
  // CDF(x) = 1 - I_{df/(df+x^2)}(df/2, 1/2) / 2 for x >= 0
  auto cdf = [df](double x) {
    double ib =
        regularized_incomplete_beta(0.5 * df, 0.5, df / (df + x * x));
    return 1.0 - 0.5 * ib;
  };
  double lo = 0.0, hi = 1.0;
  while (cdf(hi) < target) {
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("t quantile bracket failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (cdf(mid) < target ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  return upper ? x : -x;
}

double normal_pdf(double z) {
  static const double kInvSqrt2Pi = 0.3989422804014327;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_range_cdf(double w, int k) {
  if (k < 2) throw std::invalid_argument("range CDF: need k >= 2");
  if (!(w > 0.0)) return 0.0;
  std::function<double(double)> integrand = [w, k](double z) {
    double window = normal_cdf(z) - normal_cdf(z - w);
    return k * normal_pdf(z) * std::pow(window, k - 1);
  };
  return integrate(integrand, {-9.0, -3.0, -1.0, 0.0, 1.0, 3.0, 9.0}, 1e-10);
}

double studentized_range_cdf(double q, int k, int df) {
  if (df < 1)
    throw std::invalid_argument("studentized range: df must be >= 1");
  if (!(q > 0.0)) return 0.0;
  const double nu = df;
  const double ln_norm =
      std::log(2.0) + 0.5 * nu * (std::log(nu) - std::log(2.0)) -
      std::lgamma(0.5 * nu);
  std::function<double(double)> outer = [&](double s) {
    if (s <= 0.0) return 0.0;
    double ln_density = ln_norm + (nu - 1.0) * std::log(s) - 0.5 * nu * s * s;
    if (ln_density < -700.0) return 0.0;
    return std::exp(ln_density) * normal_range_cdf(q * s, k);
  };
  double s_max = std::sqrt(100.0 / nu) + 4.0;
  std::vector<double> knots{1e-10, 0.3, 0.6, 0.8, 0.9, 1.0, 1.1, 1.2, 1.5, 2.0};
  knots.erase(std::remove_if(knots.begin(), knots.end(),
                             [s_max](double s) { return s >= s_max; }),
              knots.end());
  knots.push_back(s_max);
  return integrate(outer, knots, 1e-8);
}

double studentized_range_quantile(double p, int k, int df) {
  if (p <= 0.0 || p >= 1.0)
    throw std::invalid_argument("studentized range quantile: p in (0,1)");
  double lo = 1e-3, hi = 2.0;
  while (studentized_range_cdf(hi, k, df) < p) {
    hi *= 2.0;
    if (hi > 1e4)
      throw std::runtime_error("studentized range quantile bracket failed");
  }
  for (int it = 0; it < 80 && hi - lo > 1e-9 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (studentized_range_cdf(mid, k, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

AnovaResult anova_oneway(const GroupedSamples& data) {
  check_groups(data);
  const int k = static_cast<int>(data.groups.size());
  int total_n = 0;
  double grand_sum = 0.0;
  for (const Group& g : data.groups) {
    total_n += static_cast<int>(g.values.size());
    for (double v : g.values) grand_sum += v;
  }
  const double grand_mean = grand_sum / total_n;

  double ssb = 0.0, ssw = 0.0;
  for (const Group& g : data.groups) {
    double m = mean_of(g.values);
    double d = m - grand_mean;
    ssb += static_cast<double>(g.values.size()) * d * d;
    for (double v : g.values) ssw += (v - m) * (v - m);
  }

  AnovaResult result;
  result.df1 = k - 1;
  result.df2 = total_n - k;
  if (ssw == 0.0) {
    if (ssb == 0.0) {
      result.f = 0.0;
      result.p = 1.0;
    } else {
      result.f = kInf;
      result.p = 0.0;
      result.degenerate_within = true;
    }
    return result;
  }
  result.f = (ssb / result.df1) / (ssw / result.df2);
  result.p = f_survival(result.f, result.df1, result.df2);
  return result;
}

TukeyResult tukey_hsd(const GroupedSamples& data, double level) {
  check_groups(data);
  const int k = static_cast<int>(data.groups.size());
  int total_n = 0;
  double ssw = 0.0;
  std::vector<double> means(k);
  for (int i = 0; i < k; ++i) {
    const Group& g = data.groups[i];
    total_n += static_cast<int>(g.values.size());
    means[i] = mean_of(g.values);
    for (double v : g.values) ssw += (v - means[i]) * (v - means[i]);
  }
  const int df = total_n - k;
  const double msw = ssw / df;

  TukeyResult result;
  result.df = df;
  result.q_critical = studentized_range_quantile(level, k, df);

  for (int y = 0; y < k; ++y) {
    for (int x = y + 1; x < k; ++x) {
      const double nx = static_cast<double>(data.groups[x].values.size());
      const double ny = static_cast<double>(data.groups[y].values.size());
      TukeyPair pair;
      pair.a = data.groups[x].label;
      pair.b = data.groups[y].label;
      pair.diff = means[x] - means[y];
      double half =
          result.q_critical * std::sqrt(msw / 2.0 * (1.0 / nx + 1.0 / ny));
      pair.lower = pair.diff - half;
      pair.upper = pair.diff + half;
      pair.sign = pair.lower > 0.0 ? '+' : (pair.upper < 0.0 ? '-' : 'n');
      result.pairs.push_back(pair);
    }
  }
  return result;
}

std::vector<ConditionSummary> summarize_conditions(
    const std::vector<ConditionSlice>& slices, double level) {
  std::vector<ConditionSummary> rows;
  rows.reserve(slices.size());
  for (const ConditionSlice& slice : slices) {
    ConditionSummary row;
    row.condition = slice.condition;
    try {
      check_groups(slice.by_level);
      for (const Group& g : slice.by_level.groups)
        row.group_means.push_back(mean_of(g.values));
      row.anova = anova_oneway(slice.by_level);
      row.tukey = tukey_hsd(slice.by_level, level);
    } catch (const std::exception& e) {
      row.skipped = true;
      row.skip_reason = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sign_grid(std::ostream& os, const std::string& condition_header,
                     const std::vector<ConditionSummary>& rows) {
  os << std::left << std::setw(10) << condition_header;
  const ConditionSummary* reference = nullptr;
  for (const ConditionSummary& row : rows)
    if (!row.skipped) {
      reference = &row;
      break;
    }
  if (reference == nullptr) {
    os << " (no analyzable conditions)\n";
    return;
  }
  for (const TukeyPair& pair : reference->tukey.pairs)
    os << std::setw(6) << (pair.a + "-" + pair.b);
  os << "\n";
  for (const ConditionSummary& row : rows) {
    os << std::left << std::setw(10) << row.condition;
    if (row.skipped) {
      os << " skipped: " << row.skip_reason;
    } else {
      for (const TukeyPair& pair : row.tukey.pairs)
        os << std::setw(6) << pair.sign;
    }
    os << "\n";
  }
}

}  // namespace latvit
