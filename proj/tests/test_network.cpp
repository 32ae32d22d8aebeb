#include <doctest.h>

#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "latvit/network.hpp"
#include "latvit/topology.hpp"
#include "oracles.hpp"

using namespace latvit;

namespace {

std::vector<PhoneClass> some_phones(int k) {
  std::vector<PhoneClass> phones;
  for (int i = 0; i < k; ++i)
    phones.push_back(PhoneClass{i, "p" + std::to_string(i)});
  return phones;
}

}  // namespace

TEST_CASE("network: duplicate arcs rejected, max-merge collapses them") {
  TransitionNetwork net(1);
  int s = net.add_state(PhoneClass{0, "a"});
  net.add_arc(s, s, 0.5);
  CHECK_THROWS(net.add_arc(s, s, 0.25));
  net.add_arc_max(s, s, 0.25);  // lighter parallel arc is dropped
  CHECK(net.arcs().size() == 1);
  CHECK(net.arcs()[0].weight == 0.5);
  net.add_arc_max(s, s, 1.0);
  CHECK(net.arcs()[0].weight == 1.0);
}

TEST_CASE("validate: builder output passes") {
  auto phones = some_phones(5);
  PhoneModelSet models = PhoneModelSet::uniform(phones, 3, 0.5);
  ValidationReport report = validate_network(phone_loop(phones, models));
  CHECK(report.ok);
  CHECK(report.issues.empty());
}

TEST_CASE("validate: isolated state is reported by id") {
  TransitionNetwork net(2);
  int a = net.add_state(PhoneClass{0, "a"});
  net.add_state(PhoneClass{1, "b"});  // state 1, never wired
  net.add_arc(a, a, 1.0);
  net.add_entry(a, 1.0);
  net.add_exit(a);
  ValidationReport report = validate_network(net);
  CHECK_FALSE(report.ok);
  bool mentions = false;
  for (const std::string& issue : report.issues)
    if (issue.find("state 1") != std::string::npos) mentions = true;
  CHECK(mentions);
}

TEST_CASE("validate: nonfinite weight fails") {
  TransitionNetwork net(1);
  int a = net.add_state(PhoneClass{0, "a"});
  net.add_arc(a, a, std::numeric_limits<double>::infinity());
  net.add_entry(a, 1.0);
  net.add_exit(a);
  CHECK_FALSE(validate_network(net).ok);
}

TEST_CASE("validate: dead end without exit flag fails") {
  TransitionNetwork net(2);
  int a = net.add_state(PhoneClass{0, "a"});
  int b = net.add_state(PhoneClass{1, "b"});
  net.add_arc(a, b, 1.0);
  net.add_entry(a, 1.0);
  CHECK_FALSE(validate_network(net).ok);
  net.add_exit(b);
  CHECK(validate_network(net).ok);
}

TEST_CASE("serialization: weights round-trip bit-exactly") {
  auto phones = some_phones(46);
  PhoneModelSet models = PhoneModelSet::uniform(phones, 3, 0.5);
  TransitionNetwork net = phone_loop(phones, models);

  std::string text = network_to_string(net);
  std::istringstream is(text);
  TransitionNetwork loaded = load_network(is);

  REQUIRE(loaded.arcs().size() == net.arcs().size());
  for (std::size_t i = 0; i < net.arcs().size(); ++i) {
    CHECK(loaded.arcs()[i].from == net.arcs()[i].from);
    CHECK(loaded.arcs()[i].to == net.arcs()[i].to);
    CHECK(std::memcmp(&loaded.arcs()[i].weight, &net.arcs()[i].weight,
                      sizeof(double)) == 0);
  }
  CHECK(network_to_string(loaded) == text);
}

TEST_CASE("serialization: random networks round-trip") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    auto instance = testing::random_instance(rng);
    std::string text = network_to_string(instance.net);
    std::istringstream is(text);
    CHECK(network_to_string(load_network(is)) == text);
  }
}
