// latvit command line: synthetic corpora, recognition-network construction,
// factorial decoding experiments, and their statistical summaries.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latvit/harness.hpp"
#include "latvit/network.hpp"
#include "latvit/synth.hpp"
#include "latvit/topology.hpp"

namespace fs = std::filesystem;
using namespace latvit;

namespace {

GeneratorConfig resolve_generator(CLI::App* cmd, const std::string& preset,
                                  const GeneratorConfig& flags) {
  GeneratorConfig config;
  if (preset == "static")
    config = preset_config(Preset::kStatic);
  else if (preset == "dyn-short")
    config = preset_config(Preset::kDynShort);
  else if (preset == "dyn-long")
    config = preset_config(Preset::kDynLong);

  config.num_classes = flags.num_classes;
  config.states_per_phone = flags.states_per_phone;
  config.self_loop = flags.self_loop;
  config.min_phones = flags.min_phones;
  config.max_phones = flags.max_phones;
  config.seed = flags.seed;
  if (cmd->count("--smear")) config.smear_window = flags.smear_window;
  if (cmd->count("--error-rate")) config.error_rate = flags.error_rate;
  if (cmd->count("--sharpness")) config.sharpness = flags.sharpness;
  if (cmd->count("--clamp-eps")) config.clamp_eps = flags.clamp_eps;
  return config;
}

Design parse_design(const std::string& name) {
  if (name == "phone-loop") return Design::kPhoneLoop;
  if (name == "wordlen") return Design::kWordLen;
  if (name == "alpha") return Design::kAlpha;
  throw CLI::ValidationError("--design", "unknown design '" + name + "'");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-latency phonetic decoding experiments"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // gen-corpus ---------------------------------------------------------
  auto* gen = app.add_subcommand("gen-corpus", "generate a synthetic corpus");
  std::string gen_out;
  int gen_n = 100;
  std::string gen_preset = "custom";
  GeneratorConfig gen_flags;
  gen->add_option("--out", gen_out, "corpus directory")->required();
  gen->add_option("--num-utts", gen_n, "number of utterances");
  gen->add_option("--preset", gen_preset,
                  "posterior preset: static, dyn-short, dyn-long, custom")
      ->check(CLI::IsMember({"static", "dyn-short", "dyn-long", "custom"}));
  gen->add_option("--phones", gen_flags.num_classes, "phone inventory size");
  gen->add_option("--states", gen_flags.states_per_phone, "states per phone");
  gen->add_option("--self-loop", gen_flags.self_loop,
                  "generator self-loop probability");
  gen->add_option("--min-phones", gen_flags.min_phones, "min phones/utterance");
  gen->add_option("--max-phones", gen_flags.max_phones, "max phones/utterance");
  gen->add_option("--smear", gen_flags.smear_window, "label smear window");
  gen->add_option("--error-rate", gen_flags.error_rate, "peak displacement rate");
  gen->add_option("--sharpness", gen_flags.sharpness, "posterior sharpness");
  gen->add_option("--clamp-eps", gen_flags.clamp_eps, "activity clamp epsilon");
  gen->add_option("--seed", gen_flags.seed, "corpus seed");

  // build-net ----------------------------------------------------------
  auto* build = app.add_subcommand(
      "build-net", "build and serialize one recognition network");
  std::string bn_corpus, bn_design = "phone-loop", bn_out;
  int bn_utt = 0, bn_wordlen = 1;
  double bn_alpha = 0.0;
  bool bn_all_phones = false;
  build->add_option("--corpus", bn_corpus, "corpus directory")->required();
  build->add_option("--utterance", bn_utt, "utterance index");
  build->add_option("--design", bn_design, "phone-loop, wordlen, or alpha");
  build->add_option("--wordlen", bn_wordlen, "word length (wordlen design)");
  build->add_option("--alpha", bn_alpha, "mixing weight (alpha design)");
  build->add_flag("--all-phones", bn_all_phones,
                  "phone loop over the whole inventory");
  build->add_option("--out", bn_out, "output file (default stdout)");

  // run ------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "run a decoding experiment grid");
  std::string run_corpus, run_design = "phone-loop", run_out;
  ExperimentSpec spec;
  std::string run_tie = "lowest";
  bool run_all_phones = false;
  run->add_option("--corpus", run_corpus, "corpus directory")->required();
  run->add_option("--design", run_design, "phone-loop, wordlen, or alpha");
  run->add_option("--wordlen-list", spec.wordlens, "word lengths")
      ->delimiter(',');
  run->add_option("--alpha-list", spec.alphas, "alpha values")->delimiter(',');
  run->add_option("--look-ahead-list", spec.look_aheads, "look-ahead frames")
      ->delimiter(',');
  run->add_option("--floor", spec.decode.floor, "posterior floor");
  run->add_option("--tie-break", run_tie, "lowest or highest state id")
      ->check(CLI::IsMember({"lowest", "highest"}));
  run->add_flag("--uniform-priors", spec.uniform_priors,
                "use uniform instead of empirical priors");
  run->add_flag("--all-phones", run_all_phones,
                "phone loop over the whole inventory");
  run->add_option("--threads", spec.threads, "worker threads");
  run->add_option("--out", run_out, "results csv path")->required();

  // summarize ------------------------------------------------------------
  auto* summarize = app.add_subcommand("summarize",
                                       "per-cell means and box-plot data");
  std::string sum_results, sum_dir = ".";
  summarize->add_option("--results", sum_results, "results csv")->required();
  summarize->add_option("--out-dir", sum_dir, "output directory");

  // stats ------------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "ANOVA and Tukey HSD report");
  std::string st_results, st_dir = ".";
  double st_level = 0.95;
  stats->add_option("--results", st_results, "results csv")->required();
  stats->add_option("--out-dir", st_dir, "output directory");
  stats->add_option("--level", st_level, "family-wise confidence level");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      GeneratorConfig config = resolve_generator(gen, gen_preset, gen_flags);
      Corpus corpus = make_corpus(config, gen_n, gen_out, gen_preset);
      std::cout << "wrote " << corpus.utterances.size() << " utterances to "
                << gen_out << " (digest " << corpus_digest(gen_out) << ")\n";
    } else if (build->parsed()) {
      Corpus corpus = load_corpus(bn_corpus);
      if (bn_utt < 0 || bn_utt >= static_cast<int>(corpus.utterances.size()))
        throw std::runtime_error("utterance index out of range");
      const Utterance& utt = corpus.utterances[bn_utt];
      PhoneModelSet models = PhoneModelSet::uniform(
          corpus.phones, corpus.config.states_per_phone, corpus.config.self_loop);
      TransitionNetwork net = [&] {
        switch (parse_design(bn_design)) {
          case Design::kPhoneLoop:
            return phone_loop(bn_all_phones ? corpus.phones
                                            : utt.transcription.distinct_phones(),
                              models);
          case Design::kWordLen:
            return word_loop(WordLoopSpec{bn_wordlen, utt.transcription}, models);
          case Design::kAlpha:
          default:
            return alpha_mix(AlphaMixSpec{bn_alpha, utt.transcription}, models);
        }
      }();
      ValidationReport report = validate_network(net);
      if (!report.ok) {
        std::cerr << "network failed validation:\n";
        for (const std::string& issue : report.issues)
          std::cerr << "  " << issue << "\n";
        return 1;
      }
      if (bn_out.empty())
        save_network(net, std::cout);
      else
        write_file(bn_out, network_to_string(net));
    } else if (run->parsed()) {
      spec.design = parse_design(run_design);
      spec.decode.tie_break = run_tie == "lowest" ? TieBreak::kLowestStateId
                                                  : TieBreak::kHighestStateId;
      spec.restrict_to_transcription = !run_all_phones;
      Corpus corpus = load_corpus(run_corpus);
      std::vector<ResultRow> rows = run_experiment(corpus, spec);
      std::ofstream os(run_out);
      if (!os) throw std::runtime_error("cannot write " + run_out);
      write_results_csv(os, rows);
      write_run_manifest(run_out + ".manifest.json", spec, run_corpus,
                         corpus_digest(run_corpus));
      int failed = 0;
      for (const ResultRow& row : rows) failed += row.failed ? 1 : 0;
      std::cout << "wrote " << rows.size() << " rows to " << run_out;
      if (failed) std::cout << " (" << failed << " flagged)";
      std::cout << "\n";
    } else if (summarize->parsed()) {
      std::ifstream is(sum_results);
      if (!is) throw std::runtime_error("cannot read " + sum_results);
      std::vector<ResultRow> rows = read_results_csv(is);
      std::vector<CellSummary> cells = summarize_results(rows);
      fs::create_directories(sum_dir);
      {
        std::ofstream os(fs::path(sum_dir) / "means.csv");
        write_means_csv(os, cells);
      }
      {
        std::ofstream os(fs::path(sum_dir) / "boxplot.csv");
        write_boxplot_csv(os, cells);
      }
      std::cout << "wrote " << cells.size() << " cells to " << sum_dir << "\n";
    } else if (stats->parsed()) {
      std::ifstream is(st_results);
      if (!is) throw std::runtime_error("cannot read " + st_results);
      std::vector<ResultRow> rows = read_results_csv(is);
      std::vector<StatsTable> tables = stats_report(rows, st_level);
      fs::create_directories(st_dir);
      {
        std::ofstream os(fs::path(st_dir) / "anova.csv");
        write_anova_csv(os, tables);
      }
      {
        std::ofstream os(fs::path(st_dir) / "tukey.csv");
        write_tukey_csv(os, tables);
      }
      {
        std::ofstream os(fs::path(st_dir) / "tukey.txt");
        write_stats_text(os, tables);
      }
      std::cout << "wrote stats for " << tables.size() << " tables to "
                << st_dir << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
