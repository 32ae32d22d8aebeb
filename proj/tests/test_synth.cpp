#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "latvit/confidence.hpp"
#include "latvit/synth.hpp"

using namespace latvit;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  fs::path dir = fs::temp_directory_path() /
                 ("latvit_" + tag + "_" + std::to_string(rng()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

bool dirs_equal(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> rel_a, rel_b;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) rel_a.push_back(fs::relative(e.path(), a));
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) rel_b.push_back(fs::relative(e.path(), b));
  std::sort(rel_a.begin(), rel_a.end());
  std::sort(rel_b.begin(), rel_b.end());
  if (rel_a != rel_b) return false;
  for (const fs::path& rel : rel_a)
    if (slurp(a / rel) != slurp(b / rel)) return false;
  return true;
}

}  // namespace

TEST_CASE("sampling: fixed seed reproduces bit-identical utterances") {
  GeneratorConfig config;
  config.seed = 99;
  auto first = sample_utterance(config, 1234);
  auto second = sample_utterance(config, 1234);
  CHECK(first.first.phones == second.first.phones);
  CHECK(first.second == second.second);
  auto third = sample_utterance(config, 1235);
  CHECK(first.second != third.second);
}

TEST_CASE("sampling: zero self-loop pins every phone to its state count") {
  GeneratorConfig config;
  config.self_loop = 0.0;
  config.states_per_phone = 3;
  auto [transcription, labels] = sample_utterance(config, 7);
  CHECK(labels.size() == transcription.phones.size() * 3);
  for (std::size_t i = 0; i < transcription.phones.size(); ++i)
    for (int s = 0; s < 3; ++s)
      CHECK(labels[3 * i + s] == transcription.phones[i].id);
}

TEST_CASE("sampling: mean duration follows the geometric chain") {
  GeneratorConfig config;
  config.self_loop = 0.5;
  config.states_per_phone = 3;
  config.min_phones = 10;
  config.max_phones = 10;
  double frames = 0.0, phones = 0.0;
  for (int i = 0; i < 1000; ++i) {
    auto [transcription, labels] = sample_utterance(config, derive_seed(1, 0, i));
    frames += static_cast<double>(labels.size());
    phones += static_cast<double>(transcription.phones.size());
  }
  double mean_duration = frames / phones;
  double expected = 3.0 / (1.0 - 0.5);
  CHECK(std::abs(mean_duration - expected) / expected < 0.02);
}

TEST_CASE("posteriors: clean configuration reproduces one-hot streams") {
  GeneratorConfig config;
  config.smear_window = 0;
  config.error_rate = 0.0;
  config.clamp_eps = 0.0;
  auto [transcription, labels] = sample_utterance(config, 11);
  auto stream = emit_posteriors(labels, config, 12);
  REQUIRE(stream.size() == labels.size());
  for (std::size_t t = 0; t < labels.size(); ++t) {
    CHECK(stream[t].argmax() == labels[t]);
    CHECK(stream[t].values[labels[t]] == 1.0);
  }
}

TEST_CASE("posteriors: frames normalize and respect the clamp band") {
  GeneratorConfig config;
  config.smear_window = 2;
  config.error_rate = 0.2;
  config.clamp_eps = 0.1;
  config.sharpness = 1.4;
  auto [transcription, labels] = sample_utterance(config, 21);
  auto stream = emit_posteriors(labels, config, 22);
  const int k = config.num_classes;
  const double z = k * 0.1 + 0.8;  // pre-normalization sum
  for (const PosteriorFrame& frame : stream) {
    CHECK(frame.sum() == doctest::Approx(1.0).epsilon(1e-9));
    for (double v : frame.values) {
      double pre = v * z;
      CHECK(pre >= 0.1 - 1e-9);
      CHECK(pre <= 0.9 + 1e-9);
    }
  }
}

TEST_CASE("posteriors: clamp floor bounds the reachable entropy") {
  GeneratorConfig config;
  config.num_classes = 50;
  config.clamp_eps = 0.1;
  config.smear_window = 0;
  config.error_rate = 0.0;
  auto [transcription, labels] = sample_utterance(config, 31);
  auto stream = emit_posteriors(labels, config, 32);
  const double floor_h = simulated_entropy(1, 49, 0.9, 0.1);
  for (const PosteriorFrame& frame : stream)
    CHECK(frame_entropy(frame) >= floor_h - 1e-9);
}

TEST_CASE("posteriors: displacement rate shows up as MAP error") {
  GeneratorConfig config;
  config.error_rate = 0.3;
  config.smear_window = 0;
  int correct = 0, total = 0;
  for (int i = 0; i < 200; ++i) {
    auto [transcription, labels] = sample_utterance(config, derive_seed(3, 0, i));
    auto stream = emit_posteriors(labels, config, derive_seed(3, 1, i));
    for (std::size_t t = 0; t < labels.size(); ++t) {
      correct += stream[t].argmax() == labels[t] ? 1 : 0;
      ++total;
    }
  }
  REQUIRE(total > 10000);
  double rate = static_cast<double>(correct) / total;
  CHECK(std::abs(rate - 0.7) < 0.02);
}

TEST_CASE("posteriors: smear makes boundaries harder than phone middles") {
  GeneratorConfig config;
  config.smear_window = 2;
  config.error_rate = 0.1;
  int boundary_correct = 0, boundary_total = 0;
  int middle_correct = 0, middle_total = 0;
  for (int i = 0; i < 300; ++i) {
    auto [transcription, labels] = sample_utterance(config, derive_seed(4, 0, i));
    auto stream = emit_posteriors(labels, config, derive_seed(4, 1, i));
    for (std::size_t t = 0; t < labels.size(); ++t) {
      bool at_boundary =
          (t > 0 && labels[t] != labels[t - 1]) ||
          (t + 1 < labels.size() && labels[t] != labels[t + 1]);
      bool hit = stream[t].argmax() == labels[t];
      if (at_boundary) {
        boundary_correct += hit;
        ++boundary_total;
      } else {
        middle_correct += hit;
        ++middle_total;
      }
    }
  }
  double boundary_rate = static_cast<double>(boundary_correct) / boundary_total;
  double middle_rate = static_cast<double>(middle_correct) / middle_total;
  CHECK(boundary_rate < middle_rate);
}

TEST_CASE("corpus: priors approach uniform under uniform phone sampling") {
  GeneratorConfig config;
  config.num_classes = 10;
  config.seed = 5;
  Corpus corpus = generate_corpus(config, 400);
  for (double prior : corpus.priors.values) {
    CHECK(std::abs(prior - 0.1) / 0.1 < 0.05);
  }
  double total = 0.0;
  for (double prior : corpus.priors.values) total += prior;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("corpus: empty corpus still writes a valid manifest") {
  fs::path dir = scratch_dir("empty");
  make_corpus(GeneratorConfig{}, 0, dir);
  Corpus loaded = load_corpus(dir);
  CHECK(loaded.utterances.empty());
  CHECK(loaded.config.num_classes == GeneratorConfig{}.num_classes);
  fs::remove_all(dir);
}

TEST_CASE("corpus: same seed writes byte-identical files") {
  GeneratorConfig config;
  config.seed = 1717;
  config.error_rate = 0.2;
  config.smear_window = 1;
  fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  make_corpus(config, 12, a);
  make_corpus(config, 12, b);
  CHECK(dirs_equal(a, b));
  CHECK(corpus_digest(a) == corpus_digest(b));

  GeneratorConfig other = config;
  other.seed = 1718;
  fs::path c = scratch_dir("det_c");
  make_corpus(other, 12, c);
  CHECK(corpus_digest(a) != corpus_digest(c));
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST_CASE("corpus: save and load round-trip") {
  GeneratorConfig config;
  config.seed = 23;
  config.clamp_eps = 0.1;
  fs::path dir = scratch_dir("roundtrip");
  Corpus corpus = make_corpus(config, 5, dir, "static");
  Corpus loaded = load_corpus(dir);
  REQUIRE(loaded.utterances.size() == corpus.utterances.size());
  CHECK(loaded.preset_label == "static");
  for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
    CHECK(loaded.utterances[i].reference == corpus.utterances[i].reference);
    CHECK(loaded.utterances[i].transcription.phones ==
          corpus.utterances[i].transcription.phones);
    REQUIRE(loaded.utterances[i].posteriors.size() ==
            corpus.utterances[i].posteriors.size());
    for (std::size_t t = 0; t < corpus.utterances[i].posteriors.size(); ++t)
      CHECK(loaded.utterances[i].posteriors[t].values ==
            corpus.utterances[i].posteriors[t].values);
  }
  fs::remove_all(dir);
}

TEST_CASE("presets: named parameter sets differ in temporal reach") {
  GeneratorConfig s = preset_config(Preset::kStatic);
  GeneratorConfig d1 = preset_config(Preset::kDynShort);
  GeneratorConfig d2 = preset_config(Preset::kDynLong);
  CHECK(s.smear_window == 0);
  CHECK(d1.smear_window > s.smear_window);
  CHECK(d2.smear_window > d1.smear_window);
  CHECK(s.error_rate > d1.error_rate);
  CHECK(d1.error_rate > d2.error_rate);
  CHECK(d2.clamp_eps == 0.0);
  CHECK(preset_name(Preset::kDynShort) == "dyn-short");
}

TEST_CASE("generator config validation") {
  GeneratorConfig bad;
  bad.clamp_eps = 0.5;
  CHECK_THROWS(generate_corpus(bad, 1));
  bad = GeneratorConfig{};
  bad.error_rate = 1.0;
  CHECK_THROWS(generate_corpus(bad, 1));
  bad = GeneratorConfig{};
  bad.min_phones = 5;
  bad.max_phones = 4;
  CHECK_THROWS(generate_corpus(bad, 1));
}
