#include "latvit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "latvit/scoring.hpp"
#include "latvit/topology.hpp"

namespace latvit {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_condition(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

struct Condition {
  std::string label;
  int wordlen = 0;      // kWordLen
  double alpha = 0.0;   // kAlpha
};

std::vector<Condition> make_conditions(const ExperimentSpec& spec) {
  std::vector<Condition> out;
  switch (spec.design) {
    case Design::kPhoneLoop:
      out.push_back(Condition{"loop", 0, 0.0});
      break;
    case Design::kWordLen:
      for (int n : spec.wordlens) out.push_back(Condition{format_condition(n), n, 0.0});
      break;
    case Design::kAlpha:
      for (double a : spec.alphas)
        out.push_back(Condition{format_condition(a), 0, a});
      break;
  }
  return out;
}

TransitionNetwork build_condition_net(const Corpus& corpus,
                                      const ExperimentSpec& spec,
                                      const Condition& condition,
                                      const Utterance& utt,
                                      const PhoneModelSet& models) {
  switch (spec.design) {
    case Design::kPhoneLoop: {
      std::vector<PhoneClass> phones = spec.restrict_to_transcription
                                           ? utt.transcription.distinct_phones()
                                           : corpus.phones;
      return phone_loop(phones, models);
    }
    case Design::kWordLen:
      return word_loop(WordLoopSpec{condition.wordlen, utt.transcription},
                       models);
    case Design::kAlpha:
      return alpha_mix(AlphaMixSpec{condition.alpha, utt.transcription},
                       models);
  }
  throw std::logic_error("unknown design");
}

struct KeyedRow {
  int condition_index;
  int look_ahead_index;
  int utterance_index;
  ResultRow row;
};

}  // namespace

std::string design_name(Design design) {
  switch (design) {
    case Design::kPhoneLoop: return "phone-loop";
    case Design::kWordLen: return "wordlen";
    case Design::kAlpha: return "alpha";
  }
  return "unknown";
}

std::vector<ResultRow> run_experiment(const Corpus& corpus,
                                      const ExperimentSpec& spec) {
  if (spec.look_aheads.empty())
    throw std::invalid_argument("experiment needs at least one look-ahead");
  for (int l : spec.look_aheads)
    if (l < 1) throw std::invalid_argument("look-ahead values must be positive");

  const std::vector<Condition> conditions = make_conditions(spec);
  const PriorVector priors =
      spec.uniform_priors ? PriorVector::uniform(corpus.config.num_classes)
                          : corpus.priors;
  const PhoneModelSet models = PhoneModelSet::uniform(
      corpus.phones, spec.states_per_phone.value_or(corpus.config.states_per_phone),
      spec.self_loop.value_or(corpus.config.self_loop));
  const std::string design = design_name(spec.design);

  auto run_utterance = [&](int u, std::vector<KeyedRow>& sink) {
    const Utterance& utt = corpus.utterances[u];
    std::vector<LikelihoodFrame> stream;
    stream.reserve(utt.posteriors.size());
    for (const PosteriorFrame& frame : utt.posteriors)
      stream.push_back(posterior_to_likelihood(frame, priors, spec.decode.floor));

    std::vector<int> ref_symbols = collapse_to_segments(utt.reference);

    for (std::size_t c = 0; c < conditions.size(); ++c) {
      ResultRow base;
      base.preset = corpus.preset_label;
      base.design = design;
      base.condition = conditions[c].label;
      base.utterance_index = u;
      base.utterance_id = utt.id;

      std::optional<TransitionNetwork> net;
      std::string build_error;
      try {
        net = build_condition_net(corpus, spec, conditions[c], utt, models);
      } catch (const std::exception& e) {
        build_error = e.what();
      }

      for (std::size_t li = 0; li < spec.look_aheads.size(); ++li) {
        ResultRow row = base;
        row.look_ahead = spec.look_aheads[li];
        if (!net) {
          row.failed = true;
          row.error = build_error;
        } else {
          try {
            DecodeConfig config = spec.decode;
            config.look_ahead = spec.look_aheads[li];
            std::vector<Decision> decisions =
                decode_streaming(*net, stream, config);
            std::vector<int> hyp = decision_labels(decisions);
            row.frame_rate = frame_correct_rate(hyp, utt.reference).rate();
            EditScore edit =
                align_edit(ref_symbols, collapse_to_segments(hyp));
            row.accuracy = edit.accuracy();
            row.percent_correct = edit.percent_correct();
          } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
          }
        }
        sink.push_back(KeyedRow{static_cast<int>(c), static_cast<int>(li), u,
                                std::move(row)});
      }
    }
  };

  std::vector<KeyedRow> keyed;
  const int n_utts = static_cast<int>(corpus.utterances.size());
  const int threads = std::max(1, spec.threads);
  if (threads == 1 || n_utts <= 1) {
    for (int u = 0; u < n_utts; ++u) run_utterance(u, keyed);
  } else {
    const int n_chunks = std::min(threads, n_utts);
    std::vector<std::future<std::vector<KeyedRow>>> futures;
    for (int chunk = 0; chunk < n_chunks; ++chunk) {
      futures.push_back(std::async(std::launch::async, [&, chunk]() {
        std::vector<KeyedRow> local;
        for (int u = chunk; u < n_utts; u += n_chunks) run_utterance(u, local);
        return local;
      }));
    }
    for (auto& f : futures) {
      std::vector<KeyedRow> local = f.get();
      keyed.insert(keyed.end(), std::make_move_iterator(local.begin()),
                   std::make_move_iterator(local.end()));
    }
  }

  std::sort(keyed.begin(), keyed.end(), [](const KeyedRow& a, const KeyedRow& b) {
    if (a.condition_index != b.condition_index)
      return a.condition_index < b.condition_index;
    if (a.look_ahead_index != b.look_ahead_index)
      return a.look_ahead_index < b.look_ahead_index;
    return a.utterance_index < b.utterance_index;
  });

  std::vector<ResultRow> rows;
  rows.reserve(keyed.size());
  for (KeyedRow& kr : keyed) rows.push_back(std::move(kr.row));
  return rows;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "preset,design,condition,look_ahead,utterance_index,utterance,"
        "frame_rate,accuracy,percent_correct,status\n";
  for (const ResultRow& row : rows) {
    os << row.preset << "," << row.design << "," << row.condition << ","
       << row.look_ahead << "," << row.utterance_index << ","
       << row.utterance_id << "," << format_double(row.frame_rate) << ","
       << format_double(row.accuracy) << ","
       << format_double(row.percent_correct) << ","
       << (row.failed ? "failed:" + sanitize(row.error) : std::string("ok"))
       << "\n";
  }
}

std::vector<ResultRow> read_results_csv(std::istream& is) {
  std::vector<ResultRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (int i = 0; i < 9; ++i) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos)
        throw std::runtime_error("results csv: malformed row: " + line);
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    fields.push_back(line.substr(start));

    ResultRow row;
    row.preset = fields[0];
    row.design = fields[1];
    row.condition = fields[2];
    row.look_ahead = std::stoi(fields[3]);
    row.utterance_index = std::stoi(fields[4]);
    row.utterance_id = fields[5];
    row.frame_rate = std::stod(fields[6]);
    row.accuracy = std::stod(fields[7]);
    row.percent_correct = std::stod(fields[8]);
    row.failed = fields[9].rfind("ok", 0) != 0;
    if (row.failed && fields[9].rfind("failed:", 0) == 0)
      row.error = fields[9].substr(7);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CellSummary> summarize_results(const std::vector<ResultRow>& rows) {
  // first-seen cell order; input rows are already fully keyed and sorted
  std::vector<CellSummary> cells;
  std::map<std::tuple<std::string, std::string, std::string, int>, std::size_t>
      index;
  std::vector<std::vector<double>> rates;
  for (const ResultRow& row : rows) {
    if (row.failed) continue;
    auto key = std::make_tuple(row.preset, row.design, row.condition,
                               row.look_ahead);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, cells.size()).first;
      CellSummary cell;
      cell.preset = row.preset;
      cell.design = row.design;
      cell.condition = row.condition;
      cell.look_ahead = row.look_ahead;
      cells.push_back(cell);
      rates.emplace_back();
    }
    CellSummary& cell = cells[it->second];
    ++cell.n;
    cell.mean_frame_rate += row.frame_rate;
    cell.mean_accuracy += row.accuracy;
    cell.mean_percent_correct += row.percent_correct;
    rates[it->second].push_back(row.frame_rate);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CellSummary& cell = cells[i];
    cell.mean_frame_rate /= cell.n;
    cell.mean_accuracy /= cell.n;
    cell.mean_percent_correct /= cell.n;
    std::vector<double>& r = rates[i];
    std::sort(r.begin(), r.end());
    cell.min = r.front();
    cell.max = r.back();
    cell.q1 = quantile_type7(r, 0.25);
    cell.median = quantile_type7(r, 0.5);
    cell.q3 = quantile_type7(r, 0.75);
  }
  return cells;
}

void write_means_csv(std::ostream& os, const std::vector<CellSummary>& cells) {
  os << "preset,design,condition,look_ahead,n,frame_rate,accuracy,"
        "percent_correct\n";
  for (const CellSummary& c : cells)
    os << c.preset << "," << c.design << "," << c.condition << ","
       << c.look_ahead << "," << c.n << "," << format_double(c.mean_frame_rate)
       << "," << format_double(c.mean_accuracy) << ","
       << format_double(c.mean_percent_correct) << "\n";
}

void write_boxplot_csv(std::ostream& os, const std::vector<CellSummary>& cells) {
  os << "preset,design,condition,look_ahead,n,min,q1,median,q3,max\n";
  for (const CellSummary& c : cells)
    os << c.preset << "," << c.design << "," << c.condition << ","
       << c.look_ahead << "," << c.n << "," << format_double(c.min) << ","
       << format_double(c.q1) << "," << format_double(c.median) << ","
       << format_double(c.q3) << "," << format_double(c.max) << "\n";
}

std::vector<StatsTable> stats_report(const std::vector<ResultRow>& rows,
                                     double level) {
  // (preset, design) -> condition -> look-ahead -> rates
  std::vector<StatsTable> tables;
  for (const ResultRow& row : rows) {
    if (row.failed) continue;
    StatsTable* table = nullptr;
    for (StatsTable& t : tables)
      if (t.preset == row.preset && t.design == row.design) {
        table = &t;
        break;
      }
    if (table == nullptr) {
      tables.push_back(StatsTable{row.preset, row.design, {}, {}});
      table = &tables.back();
    }
    if (std::find(table->look_aheads.begin(), table->look_aheads.end(),
                  row.look_ahead) == table->look_aheads.end())
      table->look_aheads.push_back(row.look_ahead);
  }

  for (StatsTable& table : tables) {
    std::sort(table.look_aheads.begin(), table.look_aheads.end());
    // collect conditions in first-seen order
    std::vector<std::string> conditions;
    for (const ResultRow& row : rows) {
      if (row.failed || row.preset != table.preset || row.design != table.design)
        continue;
      if (std::find(conditions.begin(), conditions.end(), row.condition) ==
          conditions.end())
        conditions.push_back(row.condition);
    }
    std::vector<ConditionSlice> slices;
    for (const std::string& condition : conditions) {
      ConditionSlice slice;
      slice.condition = condition;
      for (int l : table.look_aheads) {
        Group group;
        group.label = format_condition(l);
        for (const ResultRow& row : rows) {
          if (row.failed || row.preset != table.preset ||
              row.design != table.design || row.condition != condition ||
              row.look_ahead != l)
            continue;
          group.values.push_back(row.frame_rate);
        }
        if (!group.values.empty()) slice.by_level.groups.push_back(group);
      }
      slices.push_back(std::move(slice));
    }
    table.conditions = summarize_conditions(slices, level);
  }
  return tables;
}

void write_stats_text(std::ostream& os, const std::vector<StatsTable>& tables) {
  for (const StatsTable& table : tables) {
    os << "== preset " << table.preset << ", design " << table.design << "\n";
    for (const ConditionSummary& row : table.conditions) {
      if (row.skipped) {
        os << "condition " << row.condition << ": skipped (" << row.skip_reason
           << ")\n";
        continue;
      }
      char buf[160];
      std::snprintf(buf, sizeof(buf), "condition %s: F(%d,%d) = %.4f, p = %.4g",
                    row.condition.c_str(), row.anova.df1, row.anova.df2,
                    row.anova.f, row.anova.p);
      os << buf;
      if (row.anova.degenerate_within) os << " (zero within-group variance)";
      os << "\n";
    }
    os << "\n";
    write_sign_grid(os, table.design, table.conditions);
    os << "\n";
  }
}

void write_anova_csv(std::ostream& os, const std::vector<StatsTable>& tables) {
  os << "preset,design,condition,f,df1,df2,p,status\n";
  for (const StatsTable& table : tables)
    for (const ConditionSummary& row : table.conditions) {
      os << table.preset << "," << table.design << "," << row.condition << ",";
      if (row.skipped) {
        os << ",,,," << "skipped:" << sanitize(row.skip_reason) << "\n";
      } else {
        os << format_double(row.anova.f) << "," << row.anova.df1 << ","
           << row.anova.df2 << "," << format_double(row.anova.p) << ",ok\n";
      }
    }
}

void write_tukey_csv(std::ostream& os, const std::vector<StatsTable>& tables) {
  os << "preset,design,condition,pair,diff,lower,upper,sign\n";
  for (const StatsTable& table : tables)
    for (const ConditionSummary& row : table.conditions) {
      if (row.skipped) continue;
      for (const TukeyPair& pair : row.tukey.pairs)
        os << table.preset << "," << table.design << "," << row.condition << ","
           << pair.a << "-" << pair.b << "," << format_double(pair.diff) << ","
           << format_double(pair.lower) << "," << format_double(pair.upper)
           << "," << pair.sign << "\n";
    }
}

void write_run_manifest(const std::filesystem::path& path,
                        const ExperimentSpec& spec,
                        const std::filesystem::path& corpus_dir,
                        const std::string& corpus_digest) {
  json manifest{
      {"tool_version", kToolVersion},
      {"design", design_name(spec.design)},
      {"wordlens", spec.wordlens},
      {"alphas", spec.alphas},
      {"look_aheads", spec.look_aheads},
      {"restrict_to_transcription", spec.restrict_to_transcription},
      {"floor", spec.decode.floor},
      {"tie_break", spec.decode.tie_break == TieBreak::kLowestStateId
                        ? "lowest"
                        : "highest"},
      {"uniform_priors", spec.uniform_priors},
      {"corpus_digest", corpus_digest},
  };
  (void)corpus_dir;  // recorded via its digest only, to keep reruns comparable
  std::ofstream os(path);
  os << manifest.dump(2) << "\n";
}

}  // namespace latvit
