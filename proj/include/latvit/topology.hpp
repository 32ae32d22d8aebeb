#pragma once

#include <string>
#include <vector>

#include "latvit/network.hpp"
#include "latvit/types.hpp"

namespace latvit {

/// Ordered phone sequence of one utterance.
struct Transcription {
  std::string utterance_id;
  std::vector<PhoneClass> phones;

  std::vector<PhoneClass> distinct_phones() const;  // sorted by class id
};

struct WordLoopSpec {
  int word_len = 1;
  Transcription transcription;
};

struct AlphaMixSpec {
  double alpha = 0.0;
  Transcription transcription;
};

/// Free loop over the given phones. Every chain exit connects back to every
/// chain entry with the loop constant 1/P, P = number of phones in the loop.
TransitionNetwork phone_loop(const std::vector<PhoneClass>& phones,
                             const PhoneModelSet& models);

/// Loop of pseudo-words obtained by cutting the transcription into
/// consecutive stretches of word_len phones (the remainder stays as a
/// shorter word). Phone-to-phone and word-to-word connections all carry 1/P,
/// P = number of distinct phones in the transcription.
TransitionNetwork word_loop(const WordLoopSpec& spec,
                            const PhoneModelSet& models);

/// Single left-to-right chain through the whole transcription.
TransitionNetwork forced_alignment_net(const Transcription& transcription,
                                       const PhoneModelSet& models);

/// Disjoint union of the aligned chain and the phone loop with entry weights
/// scaled by alpha and 1-alpha. The endpoints prune the dead branch.
TransitionNetwork alpha_mix(const AlphaMixSpec& spec,
                            const PhoneModelSet& models);

}  // namespace latvit
