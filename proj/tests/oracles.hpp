// Test-only reference implementations, kept independent of the library code
// paths they check.
#pragma once

#include <random>
#include <vector>

#include "latvit/network.hpp"
#include "latvit/scoring.hpp"
#include "latvit/types.hpp"

namespace latvit::testing {

struct OraclePath {
  std::vector<int> states;
  double log_score = 0.0;
  bool found = false;
};

/// Exhaustive maximization over all state sequences. Ties are resolved
/// toward the path that is smallest when compared from the last frame
/// backwards, which is what lowest-id backtracking produces.
OraclePath enumerate_best_path(const TransitionNetwork& net,
                               const std::vector<LikelihoodFrame>& stream);

struct RandomInstance {
  TransitionNetwork net;
  std::vector<LikelihoodFrame> stream;
};

/// Small random network plus a strictly positive likelihood stream. Every
/// state has at least one outgoing arc and the entry set is nonempty.
RandomInstance random_instance(std::mt19937_64& rng, int max_states = 5,
                               int max_frames = 8);

/// Plain recursive minimum edit cost, no memoization.
int edit_cost_recursive(std::span<const int> ref, std::span<const int> hyp,
                        const EditCosts& costs);

/// Studentized-range CDF by fixed-grid composite Simpson over both
/// integrals; written separately from the adaptive library version.
double studentized_range_cdf_reference(double q, int k, int df);

}  // namespace latvit::testing
