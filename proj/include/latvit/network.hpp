#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "latvit/types.hpp"

namespace latvit {

struct NetworkState {
  int id = -1;
  PhoneClass phone;
};

struct Arc {
  int from = -1;
  int to = -1;
  double weight = 0.0;
};

struct EntryPoint {
  int state = -1;
  double weight = 0.0;
};

/// Weighted directed graph of emitting states. Outgoing weights need not sum
/// to one; the graph is a recognition network, not a stochastic grammar.
/// Parallel arcs are not stored: add_arc rejects duplicates, add_arc_max
/// collapses them by keeping the heavier weight (exact under max-path
/// decoding).
class TransitionNetwork {
 public:
  explicit TransitionNetwork(int num_classes);

  int add_state(const PhoneClass& phone);
  void add_arc(int from, int to, double weight);
  void add_arc_max(int from, int to, double weight);
  void add_entry(int state, double weight);
  void add_exit(int state);

  int num_states() const { return static_cast<int>(states_.size()); }
  int num_classes() const { return num_classes_; }
  const std::vector<NetworkState>& states() const { return states_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<EntryPoint>& entries() const { return entries_; }
  const std::vector<int>& exits() const { return exits_; }
  bool is_exit(int state) const;

  int class_of(int state) const { return states_[state].phone.id; }

 private:
  void check_state(int state, const char* what) const;
  int num_classes_ = 0;
  std::vector<NetworkState> states_;
  std::vector<Arc> arcs_;
  std::unordered_map<std::uint64_t, std::size_t> arc_index_;
  std::vector<EntryPoint> entries_;
  std::vector<int> exits_;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
};

/// Reports unreachable states, dead ends, and nonfinite or negative weights.
ValidationReport validate_network(const TransitionNetwork& net);

/// Text serialization. Weights are written with 17 significant digits so the
/// format round-trips doubles bit-exactly.
void save_network(const TransitionNetwork& net, std::ostream& os);
TransitionNetwork load_network(std::istream& is);

std::string network_to_string(const TransitionNetwork& net);

}  // namespace latvit
