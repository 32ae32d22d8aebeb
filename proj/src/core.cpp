#include "latvit/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace latvit {

PhoneModel build_phone_model(const PhoneClass& phone, int num_states,
                             double self_loop) {
  if (num_states < 1)
    throw std::invalid_argument("phone model needs at least one state");
  if (self_loop < 0.0 || self_loop >= 1.0)
    throw std::invalid_argument(
        "self-loop probability must lie in [0,1); 1 would never advance");
  PhoneModel model;
  model.phone = phone;
  model.self_loop.assign(num_states, self_loop);
  model.forward.assign(num_states, 1.0 - self_loop);
  return model;
}

PhoneModelSet::PhoneModelSet(std::vector<PhoneModel> models)
    : models_(std::move(models)) {
  for (std::size_t i = 0; i < models_.size(); ++i) {
    if (models_[i].phone.id != static_cast<int>(i))
      throw std::invalid_argument("phone model set must be dense over class ids");
    if (models_[i].num_states() < 1)
      throw std::invalid_argument("phone model with no states");
    for (int s = 0; s < models_[i].num_states(); ++s) {
      double total = models_[i].self_loop[s] + models_[i].forward[s];
      if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("per-state stay/advance must sum to one");
    }
  }
}

PhoneModelSet PhoneModelSet::uniform(const std::vector<PhoneClass>& phones,
                                     int states_per_phone, double self_loop) {
  std::vector<PhoneModel> models;
  models.reserve(phones.size());
  for (const PhoneClass& phone : phones)
    models.push_back(build_phone_model(phone, states_per_phone, self_loop));
  return PhoneModelSet(std::move(models));
}

const PhoneModel& PhoneModelSet::model(int class_id) const {
  if (class_id < 0 || class_id >= num_classes())
    throw std::out_of_range("phone class id out of range");
  return models_[class_id];
}

double PosteriorFrame::sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

int PosteriorFrame::argmax() const {
  return static_cast<int>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

int LikelihoodFrame::argmax() const {
  return static_cast<int>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

PriorVector PriorVector::uniform(int num_classes) {
  PriorVector priors;
  priors.values.assign(num_classes, 1.0 / num_classes);
  return priors;
}

LikelihoodFrame posterior_to_likelihood(const PosteriorFrame& frame,
                                        const PriorVector& priors,
                                        double floor) {
  if (frame.values.size() != priors.values.size())
    throw DimensionError("posterior frame and prior vector differ in length");
  if (floor <= 0.0) throw std::invalid_argument("floor must be positive");
  LikelihoodFrame out;
  out.values.resize(frame.values.size());
  for (std::size_t j = 0; j < frame.values.size(); ++j) {
    if (priors.values[j] <= 0.0)
      throw InvalidPriorError("class prior must be strictly positive");
    out.values[j] = std::max(frame.values[j], floor) / priors.values[j];
  }
  return out;
}

}  // namespace latvit
