#include "latvit/scoring.hpp"

#include <limits>
#include <stdexcept>

namespace latvit {

FrameScore frame_correct_rate(std::span<const int> hyp,
                              std::span<const int> ref) {
  if (hyp.size() != ref.size())
    throw std::invalid_argument("frame scoring: sequence lengths differ");
  FrameScore score;
  score.total_frames = static_cast<int>(ref.size());
  for (std::size_t t = 0; t < ref.size(); ++t)
    if (hyp[t] == ref[t]) ++score.correct_frames;
  return score;
}

std::vector<int> collapse_to_segments(std::span<const int> labels) {
  if (labels.empty())
    throw std::invalid_argument("collapse: empty label sequence");
  std::vector<int> symbols;
  symbols.push_back(labels[0]);
  for (std::size_t t = 1; t < labels.size(); ++t)
    if (labels[t] != symbols.back()) symbols.push_back(labels[t]);
  return symbols;
}

EditScore align_edit(std::span<const int> ref, std::span<const int> hyp,
                     const EditCosts& costs) {
  if (ref.empty()) throw std::invalid_argument("align: empty reference");
  const int n = static_cast<int>(ref.size());
  const int m = static_cast<int>(hyp.size());

  // ops: 'm' match, 's' substitution, 'd' deletion, 'i' insertion
  std::vector<int> dist((n + 1) * (m + 1), 0);
  std::vector<char> op((n + 1) * (m + 1), 0);
  auto at = [m](int i, int j) { return i * (m + 1) + j; };

  for (int j = 1; j <= m; ++j) {
    dist[at(0, j)] = j * costs.insertion;
    op[at(0, j)] = 'i';
  }
  for (int i = 1; i <= n; ++i) {
    dist[at(i, 0)] = i * costs.deletion;
    op[at(i, 0)] = 'd';
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      bool same = ref[i - 1] == hyp[j - 1];
      int diag = dist[at(i - 1, j - 1)] + (same ? 0 : costs.substitution);
      int del = dist[at(i - 1, j)] + costs.deletion;
      int ins = dist[at(i, j - 1)] + costs.insertion;

      int best = diag;
      char best_op = same ? 'm' : 's';
      if (del < best) {
        best = del;
        best_op = 'd';
      }
      if (ins < best) {
        best = ins;
        best_op = 'i';
      }
      dist[at(i, j)] = best;
      op[at(i, j)] = best_op;
    }
  }

  EditScore score;
  score.ref_len = n;
  int i = n, j = m;
  while (i > 0 || j > 0) {
    switch (op[at(i, j)]) {
      case 'm':
        ++score.hits;
        --i;
        --j;
        break;
      case 's':
        ++score.substitutions;
        --i;
        --j;
        break;
      case 'd':
        ++score.deletions;
        --i;
        break;
      case 'i':
        ++score.insertions;
        --j;
        break;
      default:
        throw std::logic_error("align: corrupt backtrace");
    }
  }
  return score;
}

}  // namespace latvit
