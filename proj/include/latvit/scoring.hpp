#pragma once

#include <span>
#include <string>
#include <vector>

namespace latvit {

struct FrameScore {
  int correct_frames = 0;
  int total_frames = 0;

  double rate() const {
    return total_frames == 0 ? 0.0
                             : static_cast<double>(correct_frames) / total_frames;
  }
};

/// Positionwise label match count over two equally long frame sequences.
FrameScore frame_correct_rate(std::span<const int> hyp, std::span<const int> ref);

/// Run-length collapse: consecutive identical labels merge into one symbol.
std::vector<int> collapse_to_segments(std::span<const int> labels);

struct EditCosts {
  int substitution = 10;
  int deletion = 7;
  int insertion = 7;
};

struct EditScore {
  int hits = 0;
  int deletions = 0;
  int substitutions = 0;
  int insertions = 0;
  int ref_len = 0;

  double percent_correct() const {
    return static_cast<double>(ref_len - deletions - substitutions) / ref_len;
  }
  double accuracy() const {
    return static_cast<double>(ref_len - deletions - substitutions - insertions) /
           ref_len;
  }
};

/// Minimum-edit-distance alignment of hyp against ref with HTK-style costs.
/// On equal cost the alignment prefers match, then substitution, deletion,
/// insertion, which makes the H/D/S/I counts deterministic.
EditScore align_edit(std::span<const int> ref, std::span<const int> hyp,
                     const EditCosts& costs = {});

}  // namespace latvit
