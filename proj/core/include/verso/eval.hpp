#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "verso/language.hpp"
#include "verso/scansion.hpp"

namespace verso::eval {

struct LabeledPattern {
  std::string verse;
  scansion::MetricalPattern gold;
  scansion::MetricalPattern predicted;
};

struct PatternAccuracy {
  double exact = 0;         // whole-pattern match rate
  double per_syllable = 0;  // aligned prefixes; unaligned tails count wrong
  std::size_t count = 0;
};

PatternAccuracy pattern_accuracy(const std::vector<LabeledPattern>& pairs);

struct ClassScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t gold_count = 0;
  std::size_t predicted_count = 0;
};

struct ClassificationReport {
  double macro_f1 = 0;
  double accuracy = 0;
  std::map<std::string, ClassScores> per_class;
};

/// Macro F1 averages the per-class F1 over classes of `label_set` that
/// occur in gold or predictions; classes absent from both are excluded.
ClassificationReport classification_report(
    const std::vector<std::string>& gold_labels,
    const std::vector<std::string>& predicted_labels,
    const std::vector<std::string>& label_set);

struct RocCurve {
  /// (false positive rate, true positive rate), from (0,0) to (1,1);
  /// items with equal scores collapse into one step.
  std::vector<std::pair<double, double>> points;
  double auc = 0;
};

/// One-vs-rest curve for `cls`: an item is positive when its gold label
/// equals cls, scored by its per-class score for cls.
RocCurve roc_auc_one_vs_rest(
    const std::vector<std::map<std::string, double>>& scores,
    const std::vector<std::string>& gold_labels, const std::string& cls);

/// Binary form; `scores` and `positive` are parallel.
RocCurve roc_curve(const std::vector<double>& scores,
                   const std::vector<bool>& positive);

struct PredictionRecord {
  Lang language = Lang::es;
  std::vector<std::size_t> masked_positions;
  std::vector<std::string> gold_tokens;
  std::vector<double> gold_probabilities;  // p(gold token), in (0,1]
  std::vector<std::string> top_predictions;
};

struct PerLanguageMetric {
  std::map<Lang, double> by_language;
  double overall = 0;
};

/// Fraction of masked positions whose top prediction equals the gold
/// token (micro average within each language).
PerLanguageMetric mlm_accuracy(const std::vector<PredictionRecord>& records);

/// exp(-mean ln p(gold token)) over masked positions, per language.
PerLanguageMetric pseudo_perplexity(const std::vector<PredictionRecord>& records);

// ---- file readers (JSON-lines) --------------------------------------

struct PatternRecord {
  std::string verse;
  Lang language = Lang::es;
  scansion::MetricalPattern pattern;
};

std::vector<PatternRecord> read_pattern_file(std::istream& in);

std::vector<PredictionRecord> read_prediction_log(std::istream& in);

struct StanzaLabelRecord {
  std::string stanza_id;
  std::string gold;
  std::string predicted;
  std::map<std::string, double> scores;  // optional per-class scores
};

std::vector<StanzaLabelRecord> read_stanza_labels(std::istream& in);

}  // namespace verso::eval
