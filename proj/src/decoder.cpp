#include "latvit/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace latvit {

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

struct Adjacency {
  std::vector<int> in_offset;      // per target state, into in_source
  std::vector<int> in_source;      // sources ascending within a target
  std::vector<double> in_log_weight;
  std::vector<double> entry_log_weight;
};

Adjacency build_adjacency(const TransitionNetwork& net) {
  Adjacency adj;
  const int n = net.num_states();
  std::vector<int> degree(n, 0);
  for (const Arc& arc : net.arcs()) ++degree[arc.to];

  adj.in_offset.assign(n + 1, 0);
  for (int j = 0; j < n; ++j) adj.in_offset[j + 1] = adj.in_offset[j] + degree[j];
  adj.in_source.resize(net.arcs().size());
  adj.in_log_weight.resize(net.arcs().size());

  std::vector<int> cursor(adj.in_offset.begin(), adj.in_offset.end() - 1);
  // arcs are appended per source in builder order; bucket then sort sources
  for (const Arc& arc : net.arcs()) {
    int slot = cursor[arc.to]++;
    adj.in_source[slot] = arc.from;
    adj.in_log_weight[slot] = arc.weight > 0.0 ? std::log(arc.weight) : kLogZero;
  }
  for (int j = 0; j < n; ++j) {
    int lo = adj.in_offset[j], hi = adj.in_offset[j + 1];
    std::vector<int> order(hi - lo);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return adj.in_source[lo + a] < adj.in_source[lo + b];
    });
    std::vector<int> src(hi - lo);
    std::vector<double> w(hi - lo);
    for (int k = 0; k < hi - lo; ++k) {
      src[k] = adj.in_source[lo + order[k]];
      w[k] = adj.in_log_weight[lo + order[k]];
    }
    std::copy(src.begin(), src.end(), adj.in_source.begin() + lo);
    std::copy(w.begin(), w.end(), adj.in_log_weight.begin() + lo);
  }

  adj.entry_log_weight.assign(n, kLogZero);
  for (const EntryPoint& e : net.entries())
    adj.entry_log_weight[e.state] =
        e.weight > 0.0 ? std::log(e.weight) : kLogZero;
  return adj;
}

bool tie_prefers(TieBreak rule, int candidate, int incumbent) {
  return rule == TieBreak::kLowestStateId ? candidate < incumbent
                                          : candidate > incumbent;
}

void frame_log_b(const TransitionNetwork& net, const LikelihoodFrame& frame,
                 std::vector<double>& log_b) {
  if (static_cast<int>(frame.values.size()) != net.num_classes())
    throw DimensionError("likelihood frame length differs from class count");
  log_b.resize(frame.values.size());
  for (std::size_t c = 0; c < frame.values.size(); ++c)
    log_b[c] = frame.values[c] > 0.0 ? std::log(frame.values[c]) : kLogZero;
}

}  // namespace

ViterbiPath viterbi_full(const TransitionNetwork& net,
                         const std::vector<LikelihoodFrame>& stream,
                         TieBreak tie_break) {
  if (stream.empty()) throw std::invalid_argument("empty likelihood stream");
  const int n_states = net.num_states();
  const int n_frames = static_cast<int>(stream.size());
  Adjacency adj = build_adjacency(net);

  std::vector<double> prev(n_states), cur(n_states);
  std::vector<std::vector<int>> psi(
      n_frames, std::vector<int>(n_states, -1));
  std::vector<double> log_b;

  for (int t = 0; t < n_frames; ++t) {
    frame_log_b(net, stream[t], log_b);
    bool any_finite = false;
    for (int j = 0; j < n_states; ++j) {
      double best = kLogZero;
      int best_src = -1;
      if (t == 0) {
        best = adj.entry_log_weight[j];
      } else {
        for (int k = adj.in_offset[j]; k < adj.in_offset[j + 1]; ++k) {
          double score = prev[adj.in_source[k]] + adj.in_log_weight[k];
          if (score > best ||
              (score == best && best_src >= 0 &&
               tie_prefers(tie_break, adj.in_source[k], best_src))) {
            best = score;
            best_src = adj.in_source[k];
          }
        }
      }
      cur[j] = best + log_b[net.class_of(j)];
      psi[t][j] = best_src;
      if (cur[j] > kLogZero) any_finite = true;
    }
    if (!any_finite)
      throw DecodeError("no surviving path at frame " + std::to_string(t));
    prev.swap(cur);
  }

  int best_state = -1;
  double best_score = kLogZero;
  for (int j = 0; j < n_states; ++j) {
    if (prev[j] > best_score ||
        (prev[j] == best_score && best_state >= 0 && prev[j] > kLogZero &&
         tie_prefers(tie_break, j, best_state))) {
      best_score = prev[j];
      best_state = j;
    }
  }

  ViterbiPath path;
  path.log_score = best_score;
  path.states.resize(n_frames);
  path.states[n_frames - 1] = best_state;
  for (int t = n_frames - 1; t > 0; --t)
    path.states[t - 1] = psi[t][path.states[t]];
  return path;
}

StreamingDecoder::StreamingDecoder(const TransitionNetwork& net,
                                   const DecodeConfig& config)
    : net_(net), config_(config), num_states_(net.num_states()) {
  if (config.look_ahead < 1)
    throw std::invalid_argument("look-ahead must be at least one frame");
  Adjacency adj = build_adjacency(net);
  in_offset_ = std::move(adj.in_offset);
  in_source_ = std::move(adj.in_source);
  in_log_weight_ = std::move(adj.in_log_weight);
  entry_log_weight_ = std::move(adj.entry_log_weight);

  columns_.resize(static_cast<std::size_t>(config.look_ahead) + 1);
  for (Column& col : columns_) {
    col.delta.assign(num_states_, kLogZero);
    col.psi.assign(num_states_, -1);
  }
}

bool StreamingDecoder::prefer(int candidate, int incumbent) const {
  return tie_prefers(config_.tie_break, candidate, incumbent);
}

void StreamingDecoder::advance(const LikelihoodFrame& frame) {
  const int t = frames_pushed_;
  frame_log_b(net_, frame, log_b_);
  Column& cur = column(t);
  const Column* prev = t > 0 ? &column(t - 1) : nullptr;

  bool any_finite = false;
  for (int j = 0; j < num_states_; ++j) {
    double best = kLogZero;
    int best_src = -1;
    if (t == 0) {
      best = entry_log_weight_[j];
    } else {
      for (int k = in_offset_[j]; k < in_offset_[j + 1]; ++k) {
        double score = prev->delta[in_source_[k]] + in_log_weight_[k];
        if (score > best || (score == best && best_src >= 0 &&
                             prefer(in_source_[k], best_src))) {
          best = score;
          best_src = in_source_[k];
        }
      }
    }
    cur.delta[j] = best + log_b_[net_.class_of(j)];
    cur.psi[j] = best_src;
    if (cur.delta[j] > kLogZero) any_finite = true;
  }
  if (!any_finite)
    throw DecodeError("no surviving path at frame " + std::to_string(t));
  ++frames_pushed_;
}

int StreamingDecoder::best_state_at(int t) const {
  const Column& col = column(t);
  int best_state = -1;
  double best = kLogZero;
  for (int j = 0; j < num_states_; ++j) {
    if (col.delta[j] > best ||
        (col.delta[j] == best && best_state >= 0 && col.delta[j] > kLogZero &&
         prefer(j, best_state))) {
      best = col.delta[j];
      best_state = j;
    }
  }
  return best_state;
}

Decision StreamingDecoder::make_decision(int frame, int state) const {
  return Decision{frame, net_.states()[state].phone, state,
                  frames_pushed_ - 1 - frame};
}

std::vector<int> StreamingDecoder::backtrack_at(int t_end, int depth) const {
  const int available =
      std::min<int>(frames_pushed_, static_cast<int>(columns_.size()));
  const int oldest = frames_pushed_ - available;
  if (t_end < 0 || t_end >= frames_pushed_)
    throw std::out_of_range("backtrack_at: frame not in trellis");
  if (depth < 0 || t_end - depth < oldest)
    throw std::out_of_range("backtrack_at: depth exceeds buffered columns");

  std::vector<int> states(static_cast<std::size_t>(depth) + 1, -1);
  int state = best_state_at(t_end);
  states[depth] = state;
  for (int d = depth; d > 0; --d) {
    state = column(t_end - (depth - d)).psi[state];
    states[d - 1] = state;
  }
  return states;
}

std::vector<Decision> StreamingDecoder::push(const LikelihoodFrame& frame) {
  if (finalized_) throw DecodeError("push after finalize");
  advance(frame);
  const int t = frames_pushed_ - 1;
  std::vector<Decision> out;
  if (t >= config_.look_ahead) {
    const int n = t - config_.look_ahead;
    std::vector<int> path = backtrack_at(t, config_.look_ahead);
    out.push_back(make_decision(n, path.front()));
  }
  return out;
}

std::vector<Decision> StreamingDecoder::finalize() {
  if (finalized_) return {};
  finalized_ = true;
  const int n_frames = frames_pushed_;
  if (n_frames == 0) return {};

  const int first_remaining = std::max(0, n_frames - config_.look_ahead);
  const int depth = n_frames - 1 - first_remaining;
  std::vector<int> path = backtrack_at(n_frames - 1, depth);

  std::vector<Decision> out;
  out.reserve(path.size());
  for (int n = first_remaining; n < n_frames; ++n)
    out.push_back(make_decision(n, path[n - first_remaining]));
  return out;
}

std::vector<Decision> decode_streaming(const TransitionNetwork& net,
                                       const std::vector<LikelihoodFrame>& stream,
                                       const DecodeConfig& config) {
  if (stream.empty()) throw std::invalid_argument("empty likelihood stream");
  StreamingDecoder decoder(net, config);
  std::vector<Decision> decisions;
  decisions.reserve(stream.size());
  for (const LikelihoodFrame& frame : stream) {
    std::vector<Decision> emitted = decoder.push(frame);
    decisions.insert(decisions.end(), emitted.begin(), emitted.end());
  }
  std::vector<Decision> tail = decoder.finalize();
  decisions.insert(decisions.end(), tail.begin(), tail.end());
  return decisions;
}

std::vector<int> path_labels(const TransitionNetwork& net,
                             const std::vector<int>& states) {
  std::vector<int> labels(states.size());
  for (std::size_t t = 0; t < states.size(); ++t)
    labels[t] = net.class_of(states[t]);
  return labels;
}

std::vector<int> decision_labels(const std::vector<Decision>& decisions) {
  std::vector<int> labels(decisions.size());
  for (std::size_t t = 0; t < decisions.size(); ++t)
    labels[t] = decisions[t].phone.id;
  return labels;
}

}  // namespace latvit
