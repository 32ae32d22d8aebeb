#include "latvit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <stdexcept>

#include <json.hpp>

namespace latvit {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string phone_label(int id, int num_classes) {
  int width = 2;
  for (int c = 100; num_classes > c; c *= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ph%0*d", width, id);
  return buf;
}

std::string utterance_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "u%06d", index);
  return buf;
}

void check_config(const GeneratorConfig& c) {
  if (c.num_classes < 2)
    throw std::invalid_argument("generator: need at least two classes");
  if (c.states_per_phone < 1)
    throw std::invalid_argument("generator: states per phone must be >= 1");
  if (c.self_loop < 0.0 || c.self_loop >= 1.0)
    throw std::invalid_argument("generator: self-loop must lie in [0,1)");
  if (c.min_phones < 1 || c.max_phones < c.min_phones)
    throw std::invalid_argument("generator: bad utterance length range");
  if (c.clamp_eps < 0.0 || c.clamp_eps >= 0.5)
    throw std::invalid_argument("generator: clamp eps must lie in [0,0.5)");
  if (c.smear_window < 0)
    throw std::invalid_argument("generator: smear window must be >= 0");
  if (c.error_rate < 0.0 || c.error_rate >= 1.0)
    throw std::invalid_argument("generator: error rate must lie in [0,1)");
  if (c.sharpness <= 0.0)
    throw std::invalid_argument("generator: sharpness must be positive");
}

json config_to_json(const GeneratorConfig& c) {
  return json{{"num_classes", c.num_classes},
              {"states_per_phone", c.states_per_phone},
              {"self_loop", c.self_loop},
              {"min_phones", c.min_phones},
              {"max_phones", c.max_phones},
              {"sharpness", c.sharpness},
              {"clamp_eps", c.clamp_eps},
              {"smear_window", c.smear_window},
              {"error_rate", c.error_rate},
              {"seed", c.seed}};
}

GeneratorConfig config_from_json(const json& j) {
  GeneratorConfig c;
  c.num_classes = j.at("num_classes").get<int>();
  c.states_per_phone = j.at("states_per_phone").get<int>();
  c.self_loop = j.at("self_loop").get<double>();
  c.min_phones = j.at("min_phones").get<int>();
  c.max_phones = j.at("max_phones").get<int>();
  c.sharpness = j.at("sharpness").get<double>();
  c.clamp_eps = j.at("clamp_eps").get<double>();
  c.smear_window = j.at("smear_window").get<int>();
  c.error_rate = j.at("error_rate").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index) {
  std::uint64_t x = splitmix64(seed ^ (0xA0761D6478BD642Full * (stream + 1)));
  return splitmix64(x ^ (0xE7037ED1A0B428DBull * (index + 1)));
}

GeneratorConfig preset_config(Preset preset) {
  GeneratorConfig c;
  switch (preset) {
    case Preset::kStatic:
      c.smear_window = 0;
      c.error_rate = 0.45;
      c.clamp_eps = 0.1;
      break;
    case Preset::kDynShort:
      c.smear_window = 2;
      c.error_rate = 0.25;
      c.clamp_eps = 0.1;
      break;
    case Preset::kDynLong:
      c.smear_window = 5;
      c.error_rate = 0.10;
      c.clamp_eps = 0.0;
      break;
  }
  return c;
}

std::string preset_name(Preset preset) {
  switch (preset) {
    case Preset::kStatic: return "static";
    case Preset::kDynShort: return "dyn-short";
    case Preset::kDynLong: return "dyn-long";
  }
  return "custom";
}

std::pair<Transcription, std::vector<int>> sample_utterance(
    const GeneratorConfig& config, std::uint64_t seed) {
  check_config(config);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length_dist(config.min_phones,
                                                 config.max_phones);
  std::uniform_int_distribution<int> phone_dist(0, config.num_classes - 1);

  const int n_phones = length_dist(rng);
  Transcription transcription;
  transcription.phones.reserve(n_phones);
  for (int i = 0; i < n_phones; ++i) {
    int id = phone_dist(rng);
    transcription.phones.push_back(
        PhoneClass{id, phone_label(id, config.num_classes)});
  }

  std::vector<int> labels;
  const bool deterministic_durations = config.self_loop == 0.0;
  std::geometric_distribution<int> extra_visits(1.0 - config.self_loop);
  for (const PhoneClass& phone : transcription.phones) {
    for (int s = 0; s < config.states_per_phone; ++s) {
      int visits = 1 + (deterministic_durations ? 0 : extra_visits(rng));
      labels.insert(labels.end(), visits, phone.id);
    }
  }
  return {std::move(transcription), std::move(labels)};
}

std::vector<PosteriorFrame> emit_posteriors(const std::vector<int>& labels,
                                            const GeneratorConfig& config,
                                            std::uint64_t seed) {
  check_config(config);
  const int n_frames = static_cast<int>(labels.size());
  const int k = config.num_classes;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> other_class(0, k - 2);

  std::vector<int> peak(labels.begin(), labels.end());
  if (config.error_rate > 0.0) {
    for (int t = 0; t < n_frames; ++t) {
      if (unit(rng) < config.error_rate) {
        int o = other_class(rng);
        peak[t] = o >= labels[t] ? o + 1 : o;
      }
    }
  }

  std::vector<PosteriorFrame> stream(n_frames);
  const int w = config.smear_window;
  for (int t = 0; t < n_frames; ++t) {
    PosteriorFrame& frame = stream[t];
    frame.values.assign(k, 0.0);

    int lo = std::max(0, t - w);
    int hi = std::min(n_frames - 1, t + w);
    for (int u = lo; u <= hi; ++u) frame.values[peak[u]] += 1.0;
    double norm = static_cast<double>(hi - lo + 1);
    for (double& v : frame.values) v /= norm;

    if (config.sharpness != 1.0) {
      double vmax = *std::max_element(frame.values.begin(), frame.values.end());
      double total = 0.0;
      for (double& v : frame.values) {
        v = v > 0.0 ? std::pow(v / vmax, config.sharpness) : 0.0;
        total += v;
      }
      for (double& v : frame.values) v /= total;
    }

    if (config.clamp_eps > 0.0) {
      const double eps = config.clamp_eps;
      double total = 0.0;
      for (double& v : frame.values) {
        v = eps + (1.0 - 2.0 * eps) * v;
        total += v;
      }
      for (double& v : frame.values) v /= total;
    }
  }
  return stream;
}

Corpus generate_corpus(const GeneratorConfig& config, int n_utterances,
                       const std::string& preset_label) {
  check_config(config);
  if (n_utterances < 0)
    throw std::invalid_argument("corpus: negative utterance count");

  Corpus corpus;
  corpus.config = config;
  corpus.preset_label = preset_label;
  corpus.phones.reserve(config.num_classes);
  for (int i = 0; i < config.num_classes; ++i)
    corpus.phones.push_back(PhoneClass{i, phone_label(i, config.num_classes)});

  std::vector<std::int64_t> counts(config.num_classes, 0);
  std::int64_t total = 0;
  corpus.utterances.reserve(n_utterances);
  for (int i = 0; i < n_utterances; ++i) {
    Utterance utt;
    utt.id = utterance_name(i);
    auto [transcription, labels] =
        sample_utterance(config, derive_seed(config.seed, 0, i));
    utt.transcription = std::move(transcription);
    utt.transcription.utterance_id = utt.id;
    utt.reference = std::move(labels);
    utt.posteriors =
        emit_posteriors(utt.reference, config, derive_seed(config.seed, 1, i));
    for (int label : utt.reference) ++counts[label];
    total += static_cast<std::int64_t>(utt.reference.size());
    corpus.utterances.push_back(std::move(utt));
  }

  // add-one smoothing keeps every prior strictly positive
  corpus.priors.values.resize(config.num_classes);
  for (int c = 0; c < config.num_classes; ++c)
    corpus.priors.values[c] = static_cast<double>(counts[c] + 1) /
                              static_cast<double>(total + config.num_classes);
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "utt");

  json manifest{{"format", 1},
                {"tool_version", "0.1.0"},
                {"preset", corpus.preset_label},
                {"num_utterances", corpus.utterances.size()},
                {"config", config_to_json(corpus.config)}};
  {
    std::ofstream os(dir / "manifest.json");
    os << manifest.dump(2) << "\n";
  }
  {
    std::ofstream os(dir / "phones.txt");
    for (const PhoneClass& p : corpus.phones)
      os << p.id << " " << p.label << "\n";
  }
  {
    std::ofstream os(dir / "priors.txt");
    for (double v : corpus.priors.values) os << format_double(v) << "\n";
  }
  for (const Utterance& utt : corpus.utterances) {
    {
      std::ofstream os(dir / "utt" / (utt.id + ".trans"));
      for (std::size_t i = 0; i < utt.transcription.phones.size(); ++i)
        os << (i ? " " : "") << utt.transcription.phones[i].label;
      os << "\n";
    }
    {
      std::ofstream os(dir / "utt" / (utt.id + ".labels"));
      for (std::size_t i = 0; i < utt.reference.size(); ++i)
        os << (i ? " " : "") << utt.reference[i];
      os << "\n";
    }
    {
      std::ofstream os(dir / "utt" / (utt.id + ".post"));
      for (const PosteriorFrame& frame : utt.posteriors) {
        for (std::size_t c = 0; c < frame.values.size(); ++c)
          os << (c ? " " : "") << format_double(frame.values[c]);
        os << "\n";
      }
    }
  }
  if (!fs::exists(dir / "manifest.json"))
    throw std::runtime_error("corpus write failed: " + dir.string());
}

Corpus make_corpus(const GeneratorConfig& config, int n_utterances,
                   const std::filesystem::path& dir,
                   const std::string& preset_label) {
  Corpus corpus = generate_corpus(config, n_utterances, preset_label);
  save_corpus(corpus, dir);
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::ifstream manifest_in(dir / "manifest.json");
  if (!manifest_in)
    throw std::runtime_error("corpus manifest missing in " + dir.string());
  json manifest = json::parse(manifest_in);

  Corpus corpus;
  corpus.config = config_from_json(manifest.at("config"));
  corpus.preset_label = manifest.at("preset").get<std::string>();
  const int n = manifest.at("num_utterances").get<int>();
  const int k = corpus.config.num_classes;

  {
    std::ifstream os(dir / "phones.txt");
    int id;
    std::string label;
    while (os >> id >> label) corpus.phones.push_back(PhoneClass{id, label});
    if (static_cast<int>(corpus.phones.size()) != k)
      throw std::runtime_error("corpus phone table does not match config");
  }
  std::unordered_map<std::string, int> phone_ids;
  for (const PhoneClass& p : corpus.phones) phone_ids[p.label] = p.id;

  {
    std::ifstream is(dir / "priors.txt");
    double v;
    while (is >> v) corpus.priors.values.push_back(v);
    if (static_cast<int>(corpus.priors.values.size()) != k)
      throw std::runtime_error("corpus priors do not match config");
  }

  corpus.utterances.reserve(n);
  for (int i = 0; i < n; ++i) {
    Utterance utt;
    utt.id = utterance_name(i);
    utt.transcription.utterance_id = utt.id;
    {
      std::ifstream is(dir / "utt" / (utt.id + ".trans"));
      std::string label;
      while (is >> label) {
        auto it = phone_ids.find(label);
        if (it == phone_ids.end())
          throw std::runtime_error("unknown phone '" + label + "' in " + utt.id);
        utt.transcription.phones.push_back(PhoneClass{it->second, label});
      }
    }
    {
      std::ifstream is(dir / "utt" / (utt.id + ".labels"));
      int label;
      while (is >> label) utt.reference.push_back(label);
    }
    {
      std::ifstream is(dir / "utt" / (utt.id + ".post"));
      std::string line;
      while (std::getline(is, line)) {
        if (line.empty()) continue;
        PosteriorFrame frame;
        frame.values.reserve(k);
        std::istringstream ls(line);
        double v;
        while (ls >> v) frame.values.push_back(v);
        if (static_cast<int>(frame.values.size()) != k)
          throw std::runtime_error("bad posterior row in " + utt.id);
        utt.posteriors.push_back(std::move(frame));
      }
    }
    if (utt.posteriors.size() != utt.reference.size())
      throw std::runtime_error("frame count mismatch in " + utt.id);
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

std::string corpus_digest(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::uint64_t hash = 0xCBF29CE484222325ull;
  auto mix_file = [&hash](const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("digest: cannot read " + path.string());
    char c;
    while (is.get(c)) {
      hash ^= static_cast<unsigned char>(c);
      hash *= 0x100000001B3ull;
    }
  };
  mix_file(dir / "manifest.json");
  mix_file(dir / "phones.txt");
  mix_file(dir / "priors.txt");
  std::vector<fs::path> files;
  if (fs::exists(dir / "utt"))
    for (const auto& entry : fs::directory_iterator(dir / "utt"))
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) mix_file(f);

  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace latvit
