#include "latvit/network.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

namespace latvit {

namespace {

std::uint64_t arc_key(int from, int to) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
         static_cast<std::uint32_t>(to);
}

// 17 significant digits round-trip an IEEE double exactly.
std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

TransitionNetwork::TransitionNetwork(int num_classes)
    : num_classes_(num_classes) {
  if (num_classes < 1)
    throw std::invalid_argument("network needs at least one phone class");
}

int TransitionNetwork::add_state(const PhoneClass& phone) {
  if (phone.id < 0 || phone.id >= num_classes_)
    throw std::invalid_argument("state phone class outside network inventory");
  int id = static_cast<int>(states_.size());
  states_.push_back(NetworkState{id, phone});
  return id;
}

void TransitionNetwork::check_state(int state, const char* what) const {
  if (state < 0 || state >= num_states())
    throw std::out_of_range(std::string(what) + ": state id out of range");
}

void TransitionNetwork::add_arc(int from, int to, double weight) {
  check_state(from, "add_arc");
  check_state(to, "add_arc");
  auto [it, inserted] = arc_index_.try_emplace(arc_key(from, to), arcs_.size());
  if (!inserted) throw std::invalid_argument("duplicate arc");
  arcs_.push_back(Arc{from, to, weight});
}

void TransitionNetwork::add_arc_max(int from, int to, double weight) {
  check_state(from, "add_arc_max");
  check_state(to, "add_arc_max");
  auto it = arc_index_.find(arc_key(from, to));
  if (it == arc_index_.end()) {
    arc_index_.emplace(arc_key(from, to), arcs_.size());
    arcs_.push_back(Arc{from, to, weight});
  } else if (weight > arcs_[it->second].weight) {
    arcs_[it->second].weight = weight;
  }
}

void TransitionNetwork::add_entry(int state, double weight) {
  check_state(state, "add_entry");
  for (const EntryPoint& e : entries_)
    if (e.state == state) throw std::invalid_argument("duplicate entry state");
  entries_.push_back(EntryPoint{state, weight});
}

void TransitionNetwork::add_exit(int state) {
  check_state(state, "add_exit");
  for (int e : exits_)
    if (e == state) return;
  exits_.push_back(state);
}

bool TransitionNetwork::is_exit(int state) const {
  for (int e : exits_)
    if (e == state) return true;
  return false;
}

ValidationReport validate_network(const TransitionNetwork& net) {
  ValidationReport report;
  auto fail = [&report](std::string msg) {
    report.ok = false;
    report.issues.push_back(std::move(msg));
  };

  if (net.entries().empty()) fail("no entry states");

  std::vector<int> out_degree(net.num_states(), 0);
  std::vector<std::vector<int>> adjacency(net.num_states());
  for (const Arc& arc : net.arcs()) {
    ++out_degree[arc.from];
    adjacency[arc.from].push_back(arc.to);
    if (!std::isfinite(arc.weight) || arc.weight < 0.0)
      fail("arc " + std::to_string(arc.from) + "->" + std::to_string(arc.to) +
           " has invalid weight " + format_weight(arc.weight));
  }
  for (const EntryPoint& e : net.entries())
    if (!std::isfinite(e.weight) || e.weight < 0.0)
      fail("entry " + std::to_string(e.state) + " has invalid weight");

  // reachability from the entry set
  std::vector<char> seen(net.num_states(), 0);
  std::deque<int> frontier;
  for (const EntryPoint& e : net.entries()) {
    if (!seen[e.state]) {
      seen[e.state] = 1;
      frontier.push_back(e.state);
    }
  }
  while (!frontier.empty()) {
    int s = frontier.front();
    frontier.pop_front();
    for (int t : adjacency[s]) {
      if (!seen[t]) {
        seen[t] = 1;
        frontier.push_back(t);
      }
    }
  }
  for (int s = 0; s < net.num_states(); ++s) {
    if (!seen[s]) fail("state " + std::to_string(s) + " unreachable");
    if (out_degree[s] == 0 && !net.is_exit(s))
      fail("state " + std::to_string(s) + " is a dead end");
  }
  return report;
}

void save_network(const TransitionNetwork& net, std::ostream& os) {
  os << "latvit-network 1\n";
  os << "classes " << net.num_classes() << "\n";
  os << "states " << net.num_states() << "\n";
  for (const NetworkState& s : net.states())
    os << "state " << s.id << " " << s.phone.id << " " << s.phone.label << "\n";
  os << "arcs " << net.arcs().size() << "\n";
  for (const Arc& a : net.arcs())
    os << "arc " << a.from << " " << a.to << " " << format_weight(a.weight)
       << "\n";
  os << "entries " << net.entries().size() << "\n";
  for (const EntryPoint& e : net.entries())
    os << "entry " << e.state << " " << format_weight(e.weight) << "\n";
  os << "exits " << net.exits().size() << "\n";
  for (int e : net.exits()) os << "exit " << e << "\n";
}

TransitionNetwork load_network(std::istream& is) {
  auto expect = [&is](const char* token) {
    std::string word;
    if (!(is >> word) || word != token)
      throw std::runtime_error(std::string("network parse: expected '") +
                               token + "', got '" + word + "'");
  };
  expect("latvit-network");
  int version = 0;
  is >> version;
  if (version != 1) throw std::runtime_error("unsupported network version");

  expect("classes");
  int num_classes = 0;
  is >> num_classes;
  TransitionNetwork net(num_classes);

  expect("states");
  int num_states = 0;
  is >> num_states;
  for (int i = 0; i < num_states; ++i) {
    expect("state");
    int id, class_id;
    std::string label;
    is >> id >> class_id >> label;
    int got = net.add_state(PhoneClass{class_id, label});
    if (got != id) throw std::runtime_error("network parse: state ids not dense");
  }

  expect("arcs");
  std::size_t num_arcs = 0;
  is >> num_arcs;
  for (std::size_t i = 0; i < num_arcs; ++i) {
    expect("arc");
    int from, to;
    double weight;
    is >> from >> to >> weight;
    net.add_arc(from, to, weight);
  }

  expect("entries");
  std::size_t num_entries = 0;
  is >> num_entries;
  for (std::size_t i = 0; i < num_entries; ++i) {
    expect("entry");
    int state;
    double weight;
    is >> state >> weight;
    net.add_entry(state, weight);
  }

  expect("exits");
  std::size_t num_exits = 0;
  is >> num_exits;
  for (std::size_t i = 0; i < num_exits; ++i) {
    expect("exit");
    int state;
    is >> state;
    net.add_exit(state);
  }
  if (!is) throw std::runtime_error("network parse: truncated input");
  return net;
}

std::string network_to_string(const TransitionNetwork& net) {
  std::ostringstream os;
  save_network(net, os);
  return os.str();
}

}  // namespace latvit
