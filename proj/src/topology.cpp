#include "latvit/topology.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace latvit {

namespace {

struct ChainSpan {
  int first = -1;
  int last = -1;
};

// Appends the phone's left-to-right chain. Zero-weight self-loops are not
// materialized.
ChainSpan append_chain(TransitionNetwork& net, const PhoneModel& model) {
  ChainSpan span;
  int prev = -1;
  for (int s = 0; s < model.num_states(); ++s) {
    int id = net.add_state(model.phone);
    if (s == 0) span.first = id;
    if (model.self_loop[s] > 0.0) net.add_arc(id, id, model.self_loop[s]);
    if (prev >= 0) net.add_arc(prev, id, model.forward[s - 1]);
    prev = id;
  }
  span.last = prev;
  return span;
}

// One chain per word; phones inside a word are linked with the loop constant.
ChainSpan append_word(TransitionNetwork& net, const PhoneModelSet& models,
                      const std::vector<PhoneClass>& phones, std::size_t begin,
                      std::size_t end, double link_weight) {
  ChainSpan word;
  int prev_last = -1;
  for (std::size_t i = begin; i < end; ++i) {
    ChainSpan chain = append_chain(net, models.model(phones[i].id));
    if (i == begin) word.first = chain.first;
    if (prev_last >= 0) net.add_arc(prev_last, chain.first, link_weight);
    prev_last = chain.last;
  }
  word.last = prev_last;
  return word;
}

void check_phones_unique(const std::vector<PhoneClass>& phones) {
  std::set<int> ids;
  for (const PhoneClass& p : phones)
    if (!ids.insert(p.id).second)
      throw std::invalid_argument("phone loop: duplicate phone class");
}

}  // namespace

std::vector<PhoneClass> Transcription::distinct_phones() const {
  std::vector<PhoneClass> out = phones;
  std::sort(out.begin(), out.end(),
            [](const PhoneClass& a, const PhoneClass& b) { return a.id < b.id; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TransitionNetwork phone_loop(const std::vector<PhoneClass>& phones,
                             const PhoneModelSet& models) {
  if (phones.empty())
    throw std::invalid_argument("phone loop needs at least one phone");
  check_phones_unique(phones);

  TransitionNetwork net(models.num_classes());
  std::vector<ChainSpan> chains;
  chains.reserve(phones.size());
  for (const PhoneClass& phone : phones)
    chains.push_back(append_chain(net, models.model(phone.id)));

  const double loop_weight = 1.0 / static_cast<double>(phones.size());
  for (const ChainSpan& from : chains) {
    net.add_exit(from.last);
    for (const ChainSpan& to : chains)
      net.add_arc_max(from.last, to.first, loop_weight);
  }
  for (const ChainSpan& chain : chains) net.add_entry(chain.first, loop_weight);
  return net;
}

TransitionNetwork word_loop(const WordLoopSpec& spec,
                            const PhoneModelSet& models) {
  const std::vector<PhoneClass>& phones = spec.transcription.phones;
  if (phones.empty()) throw std::invalid_argument("word loop: empty transcription");
  if (spec.word_len < 1 ||
      spec.word_len > static_cast<int>(phones.size()))
    throw std::invalid_argument(
        "word length must lie in [1, transcription length]");

  const double loop_weight =
      1.0 / static_cast<double>(spec.transcription.distinct_phones().size());

  TransitionNetwork net(models.num_classes());
  std::vector<ChainSpan> words;
  for (std::size_t begin = 0; begin < phones.size();
       begin += static_cast<std::size_t>(spec.word_len)) {
    std::size_t end =
        std::min(begin + static_cast<std::size_t>(spec.word_len), phones.size());
    words.push_back(append_word(net, models, phones, begin, end, loop_weight));
  }

  for (const ChainSpan& from : words) {
    net.add_exit(from.last);
    for (const ChainSpan& to : words)
      net.add_arc_max(from.last, to.first, loop_weight);
  }
  for (const ChainSpan& word : words) net.add_entry(word.first, loop_weight);
  return net;
}

TransitionNetwork forced_alignment_net(const Transcription& transcription,
                                       const PhoneModelSet& models) {
  if (transcription.phones.empty())
    throw std::invalid_argument("forced alignment: empty transcription");

  const double link_weight =
      1.0 / static_cast<double>(transcription.distinct_phones().size());
  TransitionNetwork net(models.num_classes());
  ChainSpan chain = append_word(net, models, transcription.phones, 0,
                                transcription.phones.size(), link_weight);
  net.add_entry(chain.first, 1.0);
  net.add_exit(chain.last);
  return net;
}

TransitionNetwork alpha_mix(const AlphaMixSpec& spec,
                            const PhoneModelSet& models) {
  if (spec.alpha < 0.0 || spec.alpha > 1.0)
    throw std::invalid_argument("alpha must lie in [0,1]");
  const std::vector<PhoneClass> distinct = spec.transcription.distinct_phones();
  if (distinct.empty())
    throw std::invalid_argument("alpha mix: empty transcription");

  // Endpoints collapse to the pure topologies.
  if (spec.alpha == 0.0) return phone_loop(distinct, models);
  if (spec.alpha == 1.0)
    return forced_alignment_net(spec.transcription, models);

  const double loop_weight = 1.0 / static_cast<double>(distinct.size());
  TransitionNetwork net(models.num_classes());

  ChainSpan aligned = append_word(net, models, spec.transcription.phones, 0,
                                  spec.transcription.phones.size(), loop_weight);
  std::vector<ChainSpan> loop_chains;
  loop_chains.reserve(distinct.size());
  for (const PhoneClass& phone : distinct)
    loop_chains.push_back(append_chain(net, models.model(phone.id)));

  // Branch-internal loop arcs keep the unscaled constant.
  for (const ChainSpan& from : loop_chains) {
    net.add_exit(from.last);
    for (const ChainSpan& to : loop_chains)
      net.add_arc_max(from.last, to.first, loop_weight);
  }

  // The aligned exit re-enters through the union's entry distribution.
  net.add_exit(aligned.last);
  net.add_arc_max(aligned.last, aligned.first, spec.alpha);
  for (const ChainSpan& chain : loop_chains)
    net.add_arc_max(aligned.last, chain.first,
                    (1.0 - spec.alpha) * loop_weight);

  net.add_entry(aligned.first, spec.alpha);
  for (const ChainSpan& chain : loop_chains)
    net.add_entry(chain.first, (1.0 - spec.alpha) * loop_weight);
  return net;
}

}  // namespace latvit
