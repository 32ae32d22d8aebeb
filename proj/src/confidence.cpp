#include "latvit/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latvit {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_model(int n_high, int n_low, double o_high, double o_low) {
  if (n_high < 1) throw std::invalid_argument("entropy model: N_H must be >= 1");
  if (n_low < 0) throw std::invalid_argument("entropy model: N_L must be >= 0");
  if (o_high <= 0.0 && o_low <= 0.0)
    throw std::invalid_argument("entropy model: both activity levels zero");
  if (o_low < 0.0 || o_high < 0.0)
    throw std::invalid_argument("entropy model: negative activity");
}

}  // namespace

double frame_entropy(const PosteriorFrame& frame) {
  double total = frame.sum();
  if (!(total > 0.0))
    throw std::invalid_argument("entropy of an all-zero frame is undefined");
  double h = 0.0;
  for (double v : frame.values) h -= xlogx(v / total);
  return h;
}

double EntropyModel::b_high() const {
  double z = active_nodes * active_level + inactive_nodes * inactive_level;
  return active_level / z;
}

double EntropyModel::b_low() const {
  double z = active_nodes * active_level + inactive_nodes * inactive_level;
  return inactive_level / z;
}

PosteriorFrame EntropyModel::to_frame() const {
  PosteriorFrame frame;
  frame.values.reserve(active_nodes + inactive_nodes);
  frame.values.insert(frame.values.end(), active_nodes, active_level);
  frame.values.insert(frame.values.end(), inactive_nodes, inactive_level);
  return frame;
}

double simulated_entropy(int active_nodes, int inactive_nodes,
                         double active_level, double inactive_level) {
  check_model(active_nodes, inactive_nodes, active_level, inactive_level);
  double z = active_nodes * active_level + inactive_nodes * inactive_level;
  double b_high = active_level / z;
  double b_low = inactive_level / z;
  return -active_nodes * xlogx(b_high) - inactive_nodes * xlogx(b_low);
}

double simulated_entropy_symmetric(int active_nodes, int inactive_nodes,
                                   double eps) {
  check_model(active_nodes, inactive_nodes, 1.0 - eps, eps);
  double z = active_nodes * (1.0 - eps) + inactive_nodes * eps;
  double weighted =
      active_nodes * xlogx(1.0 - eps) + inactive_nodes * xlogx(eps);
  return std::log(z) - weighted / z;
}

bool MlDecision::accepts(double entropy) const {
  if (degenerate) return entropy <= fallback_threshold;
  double width = (hi - lo) / bins;
  int bin = static_cast<int>(std::floor((entropy - lo) / width));
  bin = std::clamp(bin, 0, bins - 1);
  return accept_bin[bin];
}

MlDecision fit_ml_decision(std::span<const double> correct_entropies,
                           std::span<const double> incorrect_entropies,
                           int bins) {
  if (correct_entropies.empty() || incorrect_entropies.empty())
    throw std::invalid_argument("ml decision: both samples must be nonempty");
  if (bins < 1) throw std::invalid_argument("ml decision: bins must be >= 1");

  MlDecision decision;
  decision.bins = bins;

  auto [cmin, cmax] =
      std::minmax_element(correct_entropies.begin(), correct_entropies.end());
  auto [imin, imax] = std::minmax_element(incorrect_entropies.begin(),
                                          incorrect_entropies.end());
  decision.lo = std::min(*cmin, *imin);
  decision.hi = std::max(*cmax, *imax);

  if (decision.hi - decision.lo < 1e-12) {
    // all mass at one value; fall back to a midpoint threshold on the means
    decision.degenerate = true;
    double mean_c = 0.0, mean_i = 0.0;
    for (double h : correct_entropies) mean_c += h;
    for (double h : incorrect_entropies) mean_i += h;
    mean_c /= correct_entropies.size();
    mean_i /= incorrect_entropies.size();
    decision.fallback_threshold = 0.5 * (mean_c + mean_i);
    return decision;
  }

  double width = (decision.hi - decision.lo) / bins;
  std::vector<double> dens_c(bins, 0.0), dens_i(bins, 0.0);
  auto bin_of = [&](double h) {
    int b = static_cast<int>(std::floor((h - decision.lo) / width));
    return std::clamp(b, 0, bins - 1);
  };
  for (double h : correct_entropies) dens_c[bin_of(h)] += 1.0;
  for (double h : incorrect_entropies) dens_i[bin_of(h)] += 1.0;
  for (double& d : dens_c) d /= static_cast<double>(correct_entropies.size());
  for (double& d : dens_i) d /= static_cast<double>(incorrect_entropies.size());

  decision.accept_bin.resize(bins);
  for (int b = 0; b < bins; ++b) decision.accept_bin[b] = dens_c[b] >= dens_i[b];
  return decision;
}

ConfidenceReport confusion_rates(const MlDecision& decision,
                                 std::span<const double> entropies,
                                 std::span<const bool> correct) {
  if (entropies.empty())
    throw std::invalid_argument("confusion rates: empty evaluation set");
  if (entropies.size() != correct.size())
    throw std::invalid_argument("confusion rates: label length mismatch");

  ConfidenceReport report;
  for (std::size_t i = 0; i < entropies.size(); ++i) {
    bool accepted = decision.accepts(entropies[i]);
    if (correct[i] && accepted)
      report.correct_accept += 1.0;
    else if (!correct[i] && !accepted)
      report.correct_reject += 1.0;
    else if (!correct[i] && accepted)
      report.false_accept += 1.0;
    else
      report.false_reject += 1.0;
  }
  double total = static_cast<double>(entropies.size());
  report.correct_accept /= total;
  report.correct_reject /= total;
  report.false_accept /= total;
  report.false_reject /= total;
  return report;
}

}  // namespace latvit
