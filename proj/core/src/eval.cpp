#include "verso/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>

#include <json.hpp>

#include "verso/error.hpp"

namespace verso::eval {

PatternAccuracy pattern_accuracy(const std::vector<LabeledPattern>& pairs) {
  if (pairs.empty()) {
    throw Error(ErrorKind::EmptyInput, "no labeled patterns");
  }
  PatternAccuracy out;
  out.count = pairs.size();
  std::size_t exact = 0, syl_hits = 0, syl_total = 0;
  for (const LabeledPattern& p : pairs) {
    const std::string& g = p.gold.symbols;
    const std::string& h = p.predicted.symbols;
    if (g == h) ++exact;
    std::size_t common = std::min(g.size(), h.size());
    for (std::size_t i = 0; i < common; ++i) {
      if (g[i] == h[i]) ++syl_hits;
    }
    syl_total += std::max(g.size(), h.size());
  }
  out.exact = static_cast<double>(exact) / static_cast<double>(pairs.size());
  out.per_syllable =
      syl_total ? static_cast<double>(syl_hits) / static_cast<double>(syl_total)
                : 0.0;
  return out;
}

ClassificationReport classification_report(
    const std::vector<std::string>& gold_labels,
    const std::vector<std::string>& predicted_labels,
    const std::vector<std::string>& label_set) {
  if (gold_labels.empty()) {
    throw Error(ErrorKind::EmptyInput, "no labels");
  }
  if (gold_labels.size() != predicted_labels.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "gold and predicted label counts differ");
  }
  std::set<std::string> allowed(label_set.begin(), label_set.end());
  for (const auto& l : gold_labels) {
    if (!allowed.count(l)) {
      throw Error(ErrorKind::UnknownLabel, "gold label '" + l + "'");
    }
  }
  for (const auto& l : predicted_labels) {
    if (!allowed.count(l)) {
      throw Error(ErrorKind::UnknownLabel, "predicted label '" + l + "'");
    }
  }

  std::map<std::string, std::size_t> tp, fp, fn, gold_n, pred_n;
  std::size_t hits = 0;
  for (size_t i = 0; i < gold_labels.size(); ++i) {
    const std::string& g = gold_labels[i];
    const std::string& h = predicted_labels[i];
    ++gold_n[g];
    ++pred_n[h];
    if (g == h) {
      ++hits;
      ++tp[g];
    } else {
      ++fn[g];
      ++fp[h];
    }
  }

  ClassificationReport report;
  report.accuracy =
      static_cast<double>(hits) / static_cast<double>(gold_labels.size());
  double f1_sum = 0;
  std::size_t f1_classes = 0;
  for (const std::string& cls : label_set) {
    std::size_t t = tp[cls], p = fp[cls], n = fn[cls];
    if (gold_n[cls] == 0 && pred_n[cls] == 0) continue;  // absent class
    ClassScores s;
    s.gold_count = gold_n[cls];
    s.predicted_count = pred_n[cls];
    s.precision = (t + p) ? static_cast<double>(t) / static_cast<double>(t + p)
                          : 0.0;
    s.recall =
        (t + n) ? static_cast<double>(t) / static_cast<double>(t + n) : 0.0;
    s.f1 = (s.precision + s.recall) > 0
               ? 2 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    f1_sum += s.f1;
    ++f1_classes;
    report.per_class[cls] = s;
  }
  report.macro_f1 = f1_classes ? f1_sum / static_cast<double>(f1_classes) : 0.0;
  return report;
}

RocCurve roc_curve(const std::vector<double>& scores,
                   const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) {
    throw Error(ErrorKind::LengthMismatch, "scores and labels differ");
  }
  std::size_t pos = std::count(positive.begin(), positive.end(), true);
  std::size_t neg = positive.size() - pos;
  if (pos == 0 || neg == 0) {
    throw Error(ErrorKind::DegenerateClass,
                "ROC needs at least one positive and one negative item");
  }

  std::vector<std::size_t> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  std::size_t tp = 0, fpn = 0;
  size_t i = 0;
  while (i < order.size()) {
    double s = scores[order[i]];
    // Swallow the whole tie group before emitting a point.
    while (i < order.size() && scores[order[i]] == s) {
      if (positive[order[i]]) {
        ++tp;
      } else {
        ++fpn;
      }
      ++i;
    }
    curve.points.emplace_back(static_cast<double>(fpn) / neg,
                              static_cast<double>(tp) / pos);
  }

  double auc = 0;
  for (size_t k = 1; k < curve.points.size(); ++k) {
    auto [x0, y0] = curve.points[k - 1];
    auto [x1, y1] = curve.points[k];
    auc += (x1 - x0) * (y0 + y1) / 2.0;
  }
  curve.auc = auc;
  return curve;
}

RocCurve roc_auc_one_vs_rest(
    const std::vector<std::map<std::string, double>>& scores,
    const std::vector<std::string>& gold_labels, const std::string& cls) {
  if (scores.size() != gold_labels.size()) {
    throw Error(ErrorKind::LengthMismatch, "scores and labels differ");
  }
  std::vector<double> s;
  std::vector<bool> pos;
  s.reserve(scores.size());
  pos.reserve(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    auto it = scores[i].find(cls);
    if (it == scores[i].end()) {
      throw Error(ErrorKind::UnknownLabel,
                  "item " + std::to_string(i) + " has no score for class '" +
                      cls + "'");
    }
    s.push_back(it->second);
    pos.push_back(gold_labels[i] == cls);
  }
  return roc_curve(s, pos);
}

namespace {

void check_record(const PredictionRecord& r, std::size_t index) {
  std::size_t n = r.masked_positions.size();
  if (r.gold_tokens.size() != n || r.gold_probabilities.size() != n ||
      r.top_predictions.size() != n) {
    throw Error(ErrorKind::LengthMismatch,
                "prediction record " + std::to_string(index) +
                    ": parallel arrays differ in length");
  }
  for (double p : r.gold_probabilities) {
    if (!(p > 0.0) || p > 1.0) {
      throw Error(ErrorKind::NonPositiveProbability,
                  "prediction record " + std::to_string(index) +
                      ": probability outside (0,1]");
    }
  }
}

}  // namespace

PerLanguageMetric mlm_accuracy(const std::vector<PredictionRecord>& records) {
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "no prediction records");
  }
  std::map<Lang, std::pair<std::uint64_t, std::uint64_t>> hits;  // hit, total
  std::uint64_t all_hits = 0, all_total = 0;
  for (size_t i = 0; i < records.size(); ++i) {
    const PredictionRecord& r = records[i];
    check_record(r, i);
    auto& h = hits[r.language];
    for (size_t k = 0; k < r.masked_positions.size(); ++k) {
      bool hit = r.top_predictions[k] == r.gold_tokens[k];
      h.first += hit;
      ++h.second;
      all_hits += hit;
      ++all_total;
    }
  }
  PerLanguageMetric out;
  for (auto& [lang, h] : hits) {
    out.by_language[lang] =
        h.second ? static_cast<double>(h.first) / h.second : 0.0;
  }
  out.overall =
      all_total ? static_cast<double>(all_hits) / all_total : 0.0;
  return out;
}

PerLanguageMetric pseudo_perplexity(
    const std::vector<PredictionRecord>& records) {
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "no prediction records");
  }
  std::map<Lang, std::pair<double, std::uint64_t>> nll;  // sum, count
  double all_sum = 0;
  std::uint64_t all_n = 0;
  for (size_t i = 0; i < records.size(); ++i) {
    const PredictionRecord& r = records[i];
    check_record(r, i);
    auto& acc = nll[r.language];
    for (double p : r.gold_probabilities) {
      acc.first += -std::log(p);
      ++acc.second;
      all_sum += -std::log(p);
      ++all_n;
    }
  }
  PerLanguageMetric out;
  for (auto& [lang, acc] : nll) {
    out.by_language[lang] = acc.second ? std::exp(acc.first / acc.second) : 1.0;
  }
  out.overall = all_n ? std::exp(all_sum / all_n) : 1.0;
  return out;
}

// ---- readers ---------------------------------------------------------

namespace {

nlohmann::json parse_line(const std::string& line, std::size_t line_no) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line_no) + ": " + e.what());
  }
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

Lang parse_lang_or_throw(const nlohmann::json& j, std::size_t line_no) {
  auto lang = parse_lang(j.at("language").get<std::string>());
  if (!lang) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line_no) + ": unknown language '" +
                    j.at("language").get<std::string>() + "'");
  }
  return *lang;
}

}  // namespace

std::vector<PatternRecord> read_pattern_file(std::istream& in) {
  std::vector<PatternRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    nlohmann::json j = parse_line(line, line_no);
    PatternRecord r;
    r.verse = j.value("verse", "");
    r.language = parse_lang_or_throw(j, line_no);
    try {
      r.pattern = scansion::MetricalPattern::parse(
          j.at("pattern").get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PredictionRecord> read_prediction_log(std::istream& in) {
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    nlohmann::json j = parse_line(line, line_no);
    PredictionRecord r;
    r.language = parse_lang_or_throw(j, line_no);
    r.masked_positions = j.at("masked_positions").get<std::vector<std::size_t>>();
    r.gold_tokens = j.at("gold_tokens").get<std::vector<std::string>>();
    r.gold_probabilities =
        j.at("gold_probabilities").get<std::vector<double>>();
    r.top_predictions = j.at("top_predictions").get<std::vector<std::string>>();
    check_record(r, line_no);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<StanzaLabelRecord> read_stanza_labels(std::istream& in) {
  std::vector<StanzaLabelRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    nlohmann::json j = parse_line(line, line_no);
    StanzaLabelRecord r;
    r.stanza_id = j.value("stanza_id", std::to_string(line_no));
    r.gold = j.at("gold").get<std::string>();
    r.predicted = j.at("predicted").get<std::string>();
    if (j.contains("scores")) {
      for (auto& [k, v] : j.at("scores").items()) {
        r.scores[k] = v.get<double>();
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace verso::eval
