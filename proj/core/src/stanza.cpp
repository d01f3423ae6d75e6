#include "verso/stanza.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "verso/error.hpp"
#include "verso/scansion.hpp"

namespace verso::stanza {

namespace {

constexpr std::size_t kNoMax = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxStanzaVerses = 200;

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Bijective wildcard match between a canonical pattern and canonical
// labels: letters bind one-to-one, '-' requires unrhymed, '?' anything.
bool scheme_letters_match(const std::string& pattern,
                          const std::string& labels) {
  if (pattern.size() != labels.size()) return false;
  std::unordered_map<char, char> p2l, l2p;
  for (size_t i = 0; i < pattern.size(); ++i) {
    char p = pattern[i], l = labels[i];
    if (p == '?') continue;
    if (p == '-' || l == '-') {
      if (p != l) return false;
      continue;
    }
    auto a = p2l.find(p);
    if (a == p2l.end()) {
      p2l[p] = l;
    } else if (a->second != l) {
      return false;
    }
    auto b = l2p.find(l);
    if (b == l2p.end()) {
      l2p[l] = p;
    } else if (b->second != p) {
      return false;
    }
  }
  return true;
}

std::string tile_block(const std::string& block, std::size_t n) {
  std::string out;
  out.reserve(n);
  while (out.size() < n) {
    out += block;
  }
  out.resize(n);
  return out;
}

LengthConstraint parse_length_token(const std::string& token, int line_no) {
  LengthConstraint c;
  if (token == "*") {
    c.kind = LengthConstraint::Any;
    return c;
  }
  if (token.front() == '{') {
    if (token.back() != '}') {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) +
                      ": malformed length set '" + token + "'");
    }
    c.kind = LengthConstraint::Set;
    std::istringstream inner(token.substr(1, token.size() - 2));
    std::string v;
    while (std::getline(inner, v, ',')) {
      c.values.push_back(std::stoul(trim(v)));
    }
    if (c.values.empty()) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": empty length set");
    }
    return c;
  }
  c.kind = LengthConstraint::Exact;
  c.values.push_back(std::stoul(token));
  return c;
}

}  // namespace

bool LengthConstraint::accepts(std::size_t len) const {
  switch (kind) {
    case Any:
      return true;
    case Exact:
      return len == values[0];
    case Set:
      return std::find(values.begin(), values.end(), len) != values.end();
  }
  return false;
}

bool StanzaTypeRule::matches(const StanzaAnalysis& analysis) const {
  std::size_t n = analysis.verses.size();
  if (n < min_verses || n > max_verses) return false;

  if (lengths_per_verse) {
    if (lengths.size() != n) return false;
    for (size_t i = 0; i < n; ++i) {
      if (!lengths[i].accepts(analysis.lengths[i])) return false;
    }
  } else if (!lengths.empty()) {
    for (std::size_t len : analysis.lengths) {
      if (!lengths[0].accepts(len)) return false;
    }
  }

  switch (mode) {
    case RuleMode::Consonance:
      if (analysis.scheme.rhyme_type != rhyme::RhymeType::Consonance)
        return false;
      break;
    case RuleMode::Assonance:
      // Consonant rhyme is a fortiori assonant.
      if (analysis.scheme.rhyme_type != rhyme::RhymeType::Assonance &&
          analysis.scheme.rhyme_type != rhyme::RhymeType::Consonance)
        return false;
      break;
    case RuleMode::None:
      if (analysis.scheme.rhyme_type != rhyme::RhymeType::None) return false;
      break;
    case RuleMode::Any:
      break;
  }

  std::string canon = rhyme::canonical_scheme(analysis.scheme.labels);
  switch (scheme.kind) {
    case SchemePattern::Any:
      return true;
    case SchemePattern::Literal:
      return scheme_letters_match(scheme.text, canon);
    case SchemePattern::Tiled:
      return scheme_letters_match(tile_block(scheme.text, n), canon);
  }
  return false;
}

int StanzaTypeRule::specificity() const {
  int score = 0;
  if (min_verses == max_verses) {
    score += 3;
  } else if (max_verses != kNoMax) {
    score += 2;
  } else {
    score += 1;
  }
  if (lengths_per_verse) {
    score += 3;
  } else if (!lengths.empty() && lengths[0].kind == LengthConstraint::Exact) {
    score += 2;
  } else if (!lengths.empty() && lengths[0].kind == LengthConstraint::Set) {
    score += 1;
  }
  switch (scheme.kind) {
    case SchemePattern::Literal:
      score += scheme.text.find('?') == std::string::npos ? 4 : 3;
      break;
    case SchemePattern::Tiled:
      score += 2;
      break;
    case SchemePattern::Any:
      break;
  }
  switch (mode) {
    case RuleMode::Consonance:
    case RuleMode::None:
      score += 2;
      break;
    case RuleMode::Assonance:
      score += 1;
      break;
    case RuleMode::Any:
      break;
  }
  return score;
}

StanzaAnalysis synthesize_minimal(const StanzaTypeRule& rule) {
  StanzaAnalysis a;
  std::size_t n = rule.min_verses;

  a.lengths.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const LengthConstraint& c =
        rule.lengths_per_verse ? rule.lengths[std::min(i, rule.lengths.size() - 1)]
        : rule.lengths.empty() ? LengthConstraint{}
                               : rule.lengths[0];
    a.lengths[i] = c.kind == LengthConstraint::Any ? 8 : c.values[0];
  }

  std::string labels;
  switch (rule.scheme.kind) {
    case SchemePattern::Literal:
      labels = rule.scheme.text;
      break;
    case SchemePattern::Tiled:
      labels = tile_block(rule.scheme.text, n);
      break;
    case SchemePattern::Any: {
      if (rule.mode == RuleMode::None) {
        labels.assign(n, '-');
      } else {
        // Rhyme pairs aabbcc...; an odd final verse joins the last pair.
        for (size_t i = 0; i < n; ++i) {
          size_t idx = i / 2;
          if (n % 2 == 1 && i == n - 1 && n > 1) idx = (i - 1) / 2;
          labels += static_cast<char>('a' + idx % 26);
        }
      }
      break;
    }
  }
  // Fill '?' positions with fresh rhyme pairs.
  {
    char next = 'a';
    for (char c : labels) {
      if (c >= 'a' && c <= 'z') next = std::max(next, static_cast<char>(c + 1));
    }
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != '?') continue;
      labels[i] = next;
      for (size_t j = i + 1; j < labels.size(); ++j) {
        if (labels[j] == '?') {
          labels[j] = next;
          break;
        }
      }
      ++next;
    }
  }

  a.scheme.labels.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    char c = labels[i];
    if (c == '-') {
      a.scheme.labels.emplace_back("-");
    } else {
      bool arte_mayor = a.lengths[i] > 8;
      a.scheme.labels.emplace_back(
          1, arte_mayor ? static_cast<char>(c - 'a' + 'A') : c);
    }
  }
  switch (rule.mode) {
    case RuleMode::Assonance:
      a.scheme.rhyme_type = rhyme::RhymeType::Assonance;
      break;
    case RuleMode::None:
      a.scheme.rhyme_type = rhyme::RhymeType::None;
      break;
    default:
      a.scheme.rhyme_type = rhyme::RhymeType::Consonance;
      break;
  }

  a.verses.assign(n, "");
  a.annotation = render_annotation(a.lengths, a.scheme);
  return a;
}

Catalog load_catalog(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + file.string());

  Catalog catalog;
  std::unordered_set<std::string> names;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ';')) fields.push_back(trim(field));
    if (fields.size() != 5) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) +
                      ": expected 5 ';'-separated fields, got " +
                      std::to_string(fields.size()));
    }

    StanzaTypeRule rule;
    rule.name = fields[0];
    if (rule.name.empty()) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": empty name");
    }
    if (!names.insert(rule.name).second) {
      throw Error(ErrorKind::DuplicateName,
                  "line " + std::to_string(line_no) + ": duplicate rule '" +
                      rule.name + "'");
    }

    const std::string& count = fields[1];
    try {
      if (count.back() == '+') {
        rule.min_verses = std::stoul(count.substr(0, count.size() - 1));
        rule.max_verses = kNoMax;
      } else if (auto dash = count.find('-'); dash != std::string::npos) {
        rule.min_verses = std::stoul(count.substr(0, dash));
        rule.max_verses = std::stoul(count.substr(dash + 1));
      } else {
        rule.min_verses = rule.max_verses = std::stoul(count);
      }
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) +
                                             ": bad verse_count '" + count +
                                             "'");
    }
    if (rule.min_verses == 0 || rule.min_verses > rule.max_verses) {
      throw Error(ErrorKind::UnsatisfiableRule,
                  "line " + std::to_string(line_no) + ": impossible count '" +
                      count + "'");
    }

    std::istringstream lens(fields[2]);
    std::string token;
    std::vector<std::string> tokens;
    while (lens >> token) tokens.push_back(token);
    try {
      for (const auto& t : tokens) {
        rule.lengths.push_back(parse_length_token(t, line_no));
      }
    } catch (const std::invalid_argument&) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) +
                                             ": bad length pattern '" +
                                             fields[2] + "'");
    }
    rule.lengths_per_verse = rule.lengths.size() > 1;
    if (rule.lengths_per_verse) {
      if (rule.min_verses != rule.max_verses ||
          rule.lengths.size() != rule.min_verses) {
        throw Error(ErrorKind::UnsatisfiableRule,
                    "line " + std::to_string(line_no) + ": rule '" + rule.name +
                        "' lists " + std::to_string(rule.lengths.size()) +
                        " length constraints for " + fields[1] + " verses");
      }
    }
    if (rule.lengths.size() == 1 && rule.lengths[0].kind == LengthConstraint::Any) {
      rule.lengths.clear();
    }

    const std::string& scheme = fields[3];
    if (scheme == "*") {
      rule.scheme.kind = SchemePattern::Any;
    } else if (scheme.size() > 3 && scheme.substr(scheme.size() - 3) == "...") {
      rule.scheme.kind = SchemePattern::Tiled;
      rule.scheme.text = scheme.substr(0, scheme.size() - 3);
    } else {
      rule.scheme.kind = SchemePattern::Literal;
      rule.scheme.text = scheme;
    }
    for (char c : rule.scheme.text) {
      if (!(c >= 'a' && c <= 'z') && c != '-' && c != '?') {
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(line_no) +
                        ": scheme may use a-z, '-' and '?': '" + scheme + "'");
      }
    }
    if (rule.scheme.kind == SchemePattern::Literal &&
        rule.scheme.text.size() != rule.min_verses &&
        rule.min_verses == rule.max_verses) {
      throw Error(ErrorKind::UnsatisfiableRule,
                  "line " + std::to_string(line_no) + ": scheme '" + scheme +
                      "' does not fit " + fields[1] + " verses");
    }

    const std::string& mode = fields[4];
    if (mode == "consonance") {
      rule.mode = RuleMode::Consonance;
    } else if (mode == "assonance") {
      rule.mode = RuleMode::Assonance;
    } else if (mode == "none") {
      rule.mode = RuleMode::None;
    } else if (mode == "any") {
      rule.mode = RuleMode::Any;
    } else {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) +
                                             ": unknown rhyme_mode '" + mode +
                                             "'");
    }

    // Satisfiability gate: the rule must accept its own minimal stanza.
    StanzaAnalysis synth = synthesize_minimal(rule);
    if (!rule.matches(synth)) {
      throw Error(ErrorKind::UnsatisfiableRule,
                  "line " + std::to_string(line_no) + ": rule '" + rule.name +
                      "' is unsatisfiable");
    }
    catalog.push_back(std::move(rule));
  }
  return catalog;
}

StanzaAnalysis analyze_stanza(const std::vector<std::string>& verses,
                              Lang lang, const rhyme::Rhymer& rhymer) {
  if (verses.size() < 2) {
    throw Error(ErrorKind::TooFewVerses,
                "a stanza needs at least two verses, got " +
                    std::to_string(verses.size()));
  }
  if (verses.size() > kMaxStanzaVerses) {
    throw Error(ErrorKind::ParseError,
                "stanza exceeds " + std::to_string(kMaxStanzaVerses) +
                    " verses");
  }

  StanzaAnalysis a;
  a.verses = verses;
  a.lengths.reserve(verses.size());
  for (size_t i = 0; i < verses.size(); ++i) {
    try {
      a.lengths.push_back(
          scansion::scan_verse(verses[i], lang, rhymer.phonology())
              .metrical_length);
    } catch (const Error& e) {
      throw Error(e.kind(),
                  "verse " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  a.scheme = rhymer.detect_rhyme_scheme(verses, lang, a.lengths);
  a.annotation = render_annotation(a.lengths, a.scheme);
  return a;
}

std::vector<RankedMatch> classify_stanza(const StanzaAnalysis& analysis,
                                         const Catalog& catalog) {
  if (catalog.empty()) {
    throw Error(ErrorKind::EmptyCatalog, "stanza catalog is empty");
  }
  std::vector<RankedMatch> out;
  for (const StanzaTypeRule& rule : catalog) {
    if (rule.matches(analysis)) {
      out.push_back({rule.name, rule.specificity()});
    }
  }
  std::sort(out.begin(), out.end(), [](const RankedMatch& a, const RankedMatch& b) {
    return a.score != b.score ? a.score > b.score : a.name < b.name;
  });
  return out;
}

std::string render_annotation(const std::vector<std::size_t>& lengths,
                              const rhyme::RhymeScheme& scheme) {
  std::string out;
  for (size_t i = 0; i < lengths.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(lengths[i]);
    out += i < scheme.labels.size() ? scheme.labels[i] : "-";
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::string>> parse_annotation(
    std::string_view annotation) {
  std::vector<std::size_t> lengths;
  std::vector<std::string> labels;
  std::istringstream in{std::string(annotation)};
  std::string token;
  while (in >> token) {
    size_t pos = 0;
    while (pos < token.size() && std::isdigit(static_cast<unsigned char>(token[pos]))) {
      ++pos;
    }
    if (pos == 0 || pos + 1 != token.size()) {
      throw Error(ErrorKind::ParseError,
                  "bad annotation token '" + token + "'");
    }
    lengths.push_back(std::stoul(token.substr(0, pos)));
    labels.push_back(token.substr(pos));
  }
  return {lengths, labels};
}

}  // namespace verso::stanza
