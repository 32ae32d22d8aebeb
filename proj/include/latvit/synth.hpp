#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "latvit/topology.hpp"
#include "latvit/types.hpp"

namespace latvit {

/// Parameters of the synthetic posterior generator. The emitted streams mimic
/// probability estimators of varying temporal reach: `smear_window` mixes
/// neighbouring-frame label evidence into each posterior, `error_rate`
/// displaces a frame's peak to a random other class, `sharpness` raises the
/// frame to a power, and `clamp_eps` maps values into [eps, 1-eps] before
/// renormalization.
struct GeneratorConfig {
  int num_classes = 10;      // K
  int states_per_phone = 3;
  double self_loop = 0.5;
  int min_phones = 8;        // phones per utterance, uniform range
  int max_phones = 16;
  double sharpness = 1.0;    // beta
  double clamp_eps = 0.0;    // targets (eps, 1-eps)
  int smear_window = 0;      // W
  double error_rate = 0.0;   // rho
  std::uint64_t seed = 0;
};

/// Named parameter sets emulating estimators with no, short, and long
/// temporal context.
enum class Preset { kStatic, kDynShort, kDynLong };

GeneratorConfig preset_config(Preset preset);
std::string preset_name(Preset preset);

struct Utterance {
  std::string id;
  Transcription transcription;
  std::vector<int> reference;  // frame labels, one class id per frame
  std::vector<PosteriorFrame> posteriors;
};

struct Corpus {
  GeneratorConfig config;
  std::string preset_label;  // free-form tag carried into result rows
  std::vector<PhoneClass> phones;
  PriorVector priors;        // empirical, add-one smoothed
  std::vector<Utterance> utterances;
};

/// Draws a transcription (uniform phones) and its frame labels (geometric
/// state durations from the generator chain).
std::pair<Transcription, std::vector<int>> sample_utterance(
    const GeneratorConfig& config, std::uint64_t seed);

/// Posterior stream for a reference label sequence; deterministic in
/// (labels, config, seed).
std::vector<PosteriorFrame> emit_posteriors(const std::vector<int>& labels,
                                            const GeneratorConfig& config,
                                            std::uint64_t seed);

/// In-memory corpus; utterance i uses seeds derived from (config.seed, i).
Corpus generate_corpus(const GeneratorConfig& config, int n_utterances,
                       const std::string& preset_label = "custom");

/// generate_corpus plus persistence (manifest, phone table, priors, one
/// transcription/label/posterior file per utterance).
Corpus make_corpus(const GeneratorConfig& config, int n_utterances,
                   const std::filesystem::path& dir,
                   const std::string& preset_label = "custom");

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir);

/// FNV-1a over the persisted corpus files, for run manifests.
std::string corpus_digest(const std::filesystem::path& dir);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index);

}  // namespace latvit
