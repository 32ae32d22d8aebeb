#include <doctest.h>

#include <random>

#include "latvit/types.hpp"

using namespace latvit;

TEST_CASE("posterior scaling: uniform in, uniform out") {
  const int k = 8;
  PosteriorFrame frame;
  frame.values.assign(k, 1.0 / k);
  LikelihoodFrame out =
      posterior_to_likelihood(frame, PriorVector::uniform(k), 1e-6);
  for (double v : out.values) CHECK(v == doctest::Approx(out.values[0]));
}

TEST_CASE("posterior scaling: direct evaluation") {
  PosteriorFrame frame{{0.9, 0.1}};
  PriorVector priors{{0.5, 0.5}};
  LikelihoodFrame out = posterior_to_likelihood(frame, priors, 1e-6);
  CHECK(out.values[0] == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(out.values[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("posterior scaling: floor applies before the prior division") {
  PosteriorFrame frame{{1.0, 0.0}};
  PriorVector priors{{0.5, 0.5}};
  LikelihoodFrame out = posterior_to_likelihood(frame, priors, 1e-6);
  CHECK(out.values[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(out.values[1] == doctest::Approx(2e-6).epsilon(1e-12));
}

TEST_CASE("posterior scaling: errors") {
  PosteriorFrame frame{{0.5, 0.5}};
  CHECK_THROWS_AS(
      posterior_to_likelihood(frame, PriorVector{{1.0}}, 1e-6),
      DimensionError);
  CHECK_THROWS_AS(
      posterior_to_likelihood(frame, PriorVector{{0.0, 1.0}}, 1e-6),
      InvalidPriorError);
  CHECK_THROWS(posterior_to_likelihood(frame, PriorVector::uniform(2), 0.0));
}

TEST_CASE("posterior scaling: argmax preserved under uniform priors") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> value(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    PosteriorFrame frame;
    frame.values.resize(10);
    for (double& v : frame.values) v = value(rng);
    LikelihoodFrame out =
        posterior_to_likelihood(frame, PriorVector::uniform(10), 1e-6);
    CHECK(out.argmax() == frame.argmax());
  }
}

TEST_CASE("posterior scaling: common positive scale keeps the argmax") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> value(0.01, 1.0);
  std::uniform_real_distribution<double> scale(0.25, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    PosteriorFrame frame, scaled;
    frame.values.resize(6);
    for (double& v : frame.values) v = value(rng);
    double c = scale(rng);
    scaled.values = frame.values;
    for (double& v : scaled.values) v *= c;

    PriorVector priors;
    priors.values.resize(6);
    double total = 0.0;
    for (double& p : priors.values) total += (p = value(rng));
    for (double& p : priors.values) p /= total;

    CHECK(posterior_to_likelihood(frame, priors).argmax() ==
          posterior_to_likelihood(scaled, priors).argmax());
  }
}

TEST_CASE("phone model: uniform chain") {
  PhoneModel m = build_phone_model(PhoneClass{0, "a"}, 3, 0.5);
  CHECK(m.num_states() == 3);
  for (int s = 0; s < 3; ++s) {
    CHECK(m.self_loop[s] == 0.5);
    CHECK(m.forward[s] == 0.5);
  }
}

TEST_CASE("phone model: single pass-through state") {
  PhoneModel m = build_phone_model(PhoneClass{0, "a"}, 1, 0.0);
  CHECK(m.num_states() == 1);
  CHECK(m.forward[0] == 1.0);
  CHECK(m.expected_duration() == doctest::Approx(1.0));
}

TEST_CASE("phone model: expected duration from geometric occupancy") {
  PhoneModel m = build_phone_model(PhoneClass{0, "a"}, 3, 0.9);
  CHECK(m.expected_duration() == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("phone model: sticky state is rejected") {
  CHECK_THROWS(build_phone_model(PhoneClass{0, "a"}, 3, 1.0));
  CHECK_THROWS(build_phone_model(PhoneClass{0, "a"}, 0, 0.5));
}

TEST_CASE("phone model set: dense ids enforced") {
  std::vector<PhoneModel> models;
  models.push_back(build_phone_model(PhoneClass{1, "b"}, 3, 0.5));
  CHECK_THROWS(PhoneModelSet{std::move(models)});
}
