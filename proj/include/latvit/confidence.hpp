#pragma once

#include <span>
#include <vector>

#include "latvit/types.hpp"

namespace latvit {

/// Shannon entropy in nats of the normalized frame; 0 <= H <= ln K.
double frame_entropy(const PosteriorFrame& frame);

/// Two-level output model: N_H nodes at activity o_H, N_L nodes at o_L.
struct EntropyModel {
  int active_nodes = 1;        // N_H
  int inactive_nodes = 0;      // N_L
  double active_level = 1.0;   // o_H
  double inactive_level = 0.0; // o_L

  double b_high() const;
  double b_low() const;
  PosteriorFrame to_frame() const;
};

/// Closed-form entropy of the two-level model.
double simulated_entropy(int active_nodes, int inactive_nodes,
                         double active_level, double inactive_level);

/// Specialization for symmetric levels (eps, 1-eps).
double simulated_entropy_symmetric(int active_nodes, int inactive_nodes,
                                   double eps);

/// Accept/reject rule fit on conditional entropy histograms with equal
/// priors: accept where the correct-class density dominates.
struct MlDecision {
  double lo = 0.0;
  double hi = 0.0;
  int bins = 0;
  std::vector<bool> accept_bin;
  bool degenerate = false;
  double fallback_threshold = 0.0;

  bool accepts(double entropy) const;
};

MlDecision fit_ml_decision(std::span<const double> correct_entropies,
                           std::span<const double> incorrect_entropies,
                           int bins = 50);

struct ConfidenceReport {
  double correct_accept = 0.0;
  double correct_reject = 0.0;
  double false_accept = 0.0;
  double false_reject = 0.0;

  double total_error() const { return false_accept + false_reject; }
};

/// Four-way confusion of the decision rule over labelled evaluation frames,
/// as fractions of all frames.
ConfidenceReport confusion_rates(const MlDecision& decision,
                                 std::span<const double> entropies,
                                 std::span<const bool> correct);

}  // namespace latvit
