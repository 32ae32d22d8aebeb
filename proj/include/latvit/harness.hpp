#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latvit/decoder.hpp"
#include "latvit/stats.hpp"
#include "latvit/synth.hpp"

namespace latvit {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Design { kPhoneLoop, kWordLen, kAlpha };

std::string design_name(Design design);

struct ExperimentSpec {
  Design design = Design::kPhoneLoop;
  std::vector<int> wordlens{1, 2, 3, 4, 5, 6, 7};
  std::vector<double> alphas{0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
  bool restrict_to_transcription = true;  // phone-loop scope
  std::vector<int> look_aheads{1, 3, 5, 10, 20};
  DecodeConfig decode;
  bool uniform_priors = false;
  std::optional<int> states_per_phone;  // recognition models; default: corpus
  std::optional<double> self_loop;
  int threads = 1;
};

struct ResultRow {
  std::string preset;
  std::string design;
  std::string condition;
  int look_ahead = 0;
  int utterance_index = 0;
  std::string utterance_id;
  double frame_rate = 0.0;
  double accuracy = 0.0;
  double percent_correct = 0.0;
  bool failed = false;
  std::string error;
};

/// Runs the factorial grid utterance x condition x look-ahead over the
/// corpus, building one recognition network per (utterance, condition).
/// Rows come back fully keyed and sorted; failures are flagged, not fatal.
std::vector<ResultRow> run_experiment(const Corpus& corpus,
                                      const ExperimentSpec& spec);

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& is);

struct CellSummary {
  std::string preset;
  std::string design;
  std::string condition;
  int look_ahead = 0;
  int n = 0;
  double mean_frame_rate = 0.0;
  double mean_accuracy = 0.0;
  double mean_percent_correct = 0.0;
  // frame-rate box-plot data: median, quartiles, full-range whiskers
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Per-cell means (average of per-utterance rates, never pooled frames) and
/// box-plot quantiles.
std::vector<CellSummary> summarize_results(const std::vector<ResultRow>& rows);

void write_means_csv(std::ostream& os, const std::vector<CellSummary>& cells);
void write_boxplot_csv(std::ostream& os, const std::vector<CellSummary>& cells);

struct StatsTable {
  std::string preset;
  std::string design;
  std::vector<ConditionSummary> conditions;
  std::vector<int> look_aheads;
};

/// One ANOVA + Tukey grid per (preset, design) over frame rates, grouped by
/// look-ahead within each condition value.
std::vector<StatsTable> stats_report(const std::vector<ResultRow>& rows,
                                     double level = 0.95);

void write_stats_text(std::ostream& os, const std::vector<StatsTable>& tables);
void write_anova_csv(std::ostream& os, const std::vector<StatsTable>& tables);
void write_tukey_csv(std::ostream& os, const std::vector<StatsTable>& tables);

/// Records tool version, spec, and corpus digest next to a results file.
void write_run_manifest(const std::filesystem::path& path,
                        const ExperimentSpec& spec,
                        const std::filesystem::path& corpus_dir,
                        const std::string& corpus_digest);

}  // namespace latvit
