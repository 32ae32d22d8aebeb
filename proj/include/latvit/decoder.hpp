#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "latvit/network.hpp"
#include "latvit/types.hpp"

namespace latvit {

enum class TieBreak {
  kLowestStateId,
  kHighestStateId,
};

struct DecodeConfig {
  int look_ahead = 5;
  TieBreak tie_break = TieBreak::kLowestStateId;
  double floor = 1e-6;
};

struct Decision {
  int frame = -1;
  PhoneClass phone;
  int state = -1;
  int latency = 0;
};

struct ViterbiPath {
  std::vector<int> states;
  double log_score = 0.0;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact max-path decode over the whole stream, log domain. Ties at every
/// max go to the lowest state id unless configured otherwise.
ViterbiPath viterbi_full(const TransitionNetwork& net,
                         const std::vector<LikelihoodFrame>& stream,
                         TieBreak tie_break = TieBreak::kLowestStateId);

/// Incremental decoder with bounded look-ahead. The decision for frame n is
/// taken from the best partial path ending at frame n+L; once the stream
/// ends, the remaining L decisions are read off the final best path. The
/// trellis is a ring buffer of L+1 columns, so memory does not grow with the
/// utterance.
class StreamingDecoder {
 public:
  StreamingDecoder(const TransitionNetwork& net, const DecodeConfig& config);

  // Feeds one frame; returns the decision that became final, if any.
  std::vector<Decision> push(const LikelihoodFrame& frame);

  // Flushes the tail decisions after the last frame.
  std::vector<Decision> finalize();

  // Follows backpointers from the best state at t_end for `depth` steps.
  // Returns depth+1 states, oldest first. Both frames must still be buffered.
  std::vector<int> backtrack_at(int t_end, int depth) const;

  int frames_pushed() const { return frames_pushed_; }
  std::size_t trellis_columns() const { return columns_.size(); }
  std::size_t trellis_cells() const { return columns_.size() * num_states_; }

 private:
  struct Column {
    std::vector<double> delta;
    std::vector<int> psi;
  };

  const Column& column(int t) const { return columns_[t % columns_.size()]; }
  Column& column(int t) { return columns_[t % columns_.size()]; }
  void advance(const LikelihoodFrame& frame);
  int best_state_at(int t) const;
  Decision make_decision(int frame, int state) const;
  bool prefer(int candidate, int incumbent) const;

  const TransitionNetwork& net_;
  DecodeConfig config_;
  int num_states_ = 0;

  // Incoming adjacency in CSR form, sources ascending per target state.
  std::vector<int> in_offset_;
  std::vector<int> in_source_;
  std::vector<double> in_log_weight_;
  std::vector<double> entry_log_weight_;

  std::vector<Column> columns_;
  std::vector<double> log_b_;  // scratch, per class
  int frames_pushed_ = 0;
  bool finalized_ = false;
};

/// Batch convenience wrapper around StreamingDecoder.
std::vector<Decision> decode_streaming(const TransitionNetwork& net,
                                       const std::vector<LikelihoodFrame>& stream,
                                       const DecodeConfig& config);

/// Phone class id per frame for a decoded state path.
std::vector<int> path_labels(const TransitionNetwork& net,
                             const std::vector<int>& states);

/// Phone class id per frame for a decision stream.
std::vector<int> decision_labels(const std::vector<Decision>& decisions);

}  // namespace latvit
