#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace latvit {

/// Dense phonetic class: ids run 0..K-1, labels are unique symbolic names.
struct PhoneClass {
  int id = -1;
  std::string label;

  friend bool operator==(const PhoneClass&, const PhoneClass&) = default;
};

/// Left-to-right chain model of a single phone. Each state either stays
/// (self_loop[i]) or advances (forward[i]); the two sum to one per state.
struct PhoneModel {
  PhoneClass phone;
  std::vector<double> self_loop;
  std::vector<double> forward;

  int num_states() const { return static_cast<int>(self_loop.size()); }

  // Mean occupancy of a geometric-duration chain, in frames.
  double expected_duration() const {
    double d = 0.0;
    for (double s : self_loop) d += 1.0 / (1.0 - s);
    return d;
  }
};

PhoneModel build_phone_model(const PhoneClass& phone, int num_states,
                             double self_loop);

/// Dense inventory of phone models indexed by class id 0..K-1.
class PhoneModelSet {
 public:
  PhoneModelSet() = default;
  explicit PhoneModelSet(std::vector<PhoneModel> models);

  static PhoneModelSet uniform(const std::vector<PhoneClass>& phones,
                               int states_per_phone, double self_loop);

  int num_classes() const { return static_cast<int>(models_.size()); }
  const PhoneModel& model(int class_id) const;
  const std::vector<PhoneModel>& models() const { return models_; }

 private:
  std::vector<PhoneModel> models_;
};

/// Per-frame class posterior vector, values in [0,1].
struct PosteriorFrame {
  std::vector<double> values;

  double sum() const;
  int argmax() const;
};

/// Per-frame prior-scaled likelihoods, linear domain, floored positive.
struct LikelihoodFrame {
  std::vector<double> values;

  int argmax() const;
};

/// Class prior distribution; every entry strictly positive, sums to one.
struct PriorVector {
  std::vector<double> values;

  static PriorVector uniform(int num_classes);
};

/// Converts a posterior frame into scaled likelihoods: each value is floored
/// at `floor` and divided by the class prior. The frame-wide evidence term is
/// class-independent and therefore dropped.
LikelihoodFrame posterior_to_likelihood(const PosteriorFrame& frame,
                                        const PriorVector& priors,
                                        double floor = 1e-6);

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidPriorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace latvit
