#include "verso/rhyme.hpp"

#include <fstream>
#include <unordered_map>

#include "verso/error.hpp"
#include "verso/scansion.hpp"
#include "verso/utf8.hpp"

namespace verso::rhyme {

namespace {

bool plain_vowel(char32_t c) {
  return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u';
}

bool ending_vowel(char32_t c, char32_t next, Lang lang) {
  switch (lang) {
    case Lang::es:
      return plain_vowel(c);  // folding already stripped accents
    case Lang::en:
      if (c == U'y') return next == 0 || !plain_vowel(next);
      return plain_vowel(c);
    case Lang::de:
      return plain_vowel(c) || c == 0x00E4 || c == 0x00F6 || c == 0x00FC ||
             c == U'y';
    default:
      return plain_vowel(c);
  }
}

}  // namespace

std::string_view rhyme_type_name(RhymeType t) {
  switch (t) {
    case RhymeType::Consonance:
      return "consonance";
    case RhymeType::Assonance:
      return "assonance";
    case RhymeType::Mixed:
      return "mixed";
    case RhymeType::None:
      return "none";
  }
  return "?";
}

std::string RhymeScheme::to_string() const {
  std::string out;
  for (const auto& l : labels) out += l;
  return out;
}

bool rhyme_match(const RhymeEnding& a, const RhymeEnding& b, RhymeMode mode) {
  return mode == RhymeMode::Consonance ? a.full == b.full
                                       : a.vowels_only == b.vowels_only;
}

std::string canonical_scheme(const std::vector<std::string>& labels) {
  std::unordered_map<std::string, char> seen;
  std::string out;
  for (const auto& raw : labels) {
    if (raw == "-") {
      out += '-';
      continue;
    }
    std::string key = utf8::encode(utf8::to_lower(utf8::decode(raw)));
    auto it = seen.find(key);
    if (it == seen.end()) {
      char next = static_cast<char>('a' + (seen.size() % 26));
      it = seen.emplace(key, next).first;
    }
    out += it->second;
  }
  return out;
}

Rhymer::Rhymer(const phonology::Phonology& ph) : ph_(ph) {}

Rhymer::Rhymer(const phonology::Phonology& ph,
               const std::filesystem::path& data_dir)
    : ph_(ph) {
  std::ifstream in(data_dir / "es_folding.tsv");
  if (!in) {
    throw Error(ErrorKind::IoError,
                "cannot open " + (data_dir / "es_folding.tsv").string());
  }
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    FoldRule rule;
    std::string pat = tab == std::string::npos ? line : line.substr(0, tab);
    std::string rep = tab == std::string::npos ? "" : line.substr(tab + 1);
    rule.pattern = utf8::decode(pat);
    rule.replacement = utf8::decode(rep);
    if (!rule.pattern.empty() && rule.pattern.back() == U'$') {
      rule.at_end = true;
      rule.pattern.pop_back();
    }
    if (rule.pattern.empty()) {
      throw Error(ErrorKind::ParseError, "empty folding pattern: " + line);
    }
    es_rules_.push_back(std::move(rule));
  }
}

std::string Rhymer::fold(std::string_view ending, Lang lang) const {
  std::u32string s = utf8::to_lower(utf8::decode(ending));
  if (lang != Lang::es || es_rules_.empty()) return utf8::encode(s);
  for (const FoldRule& rule : es_rules_) {
    if (rule.at_end) {
      if (s.size() >= rule.pattern.size() &&
          s.compare(s.size() - rule.pattern.size(), rule.pattern.size(),
                    rule.pattern) == 0) {
        s = s.substr(0, s.size() - rule.pattern.size()) + rule.replacement;
      }
      continue;
    }
    std::u32string out;
    size_t i = 0;
    while (i < s.size()) {
      if (s.compare(i, rule.pattern.size(), rule.pattern) == 0) {
        out += rule.replacement;
        i += rule.pattern.size();
      } else {
        out += s[i];
        ++i;
      }
    }
    s = std::move(out);
  }
  return utf8::encode(s);
}

RhymeEnding Rhymer::rhyme_ending(std::string_view verse, Lang lang) const {
  auto syllables = scansion::phonological_syllables(verse, lang, ph_);
  int last_stressed = -1;
  for (size_t i = 0; i < syllables.size(); ++i) {
    if (syllables[i].stressed) last_stressed = static_cast<int>(i);
  }
  if (last_stressed < 0) {
    throw Error(ErrorKind::NoStressedSyllable,
                "verse has no stressed syllable: " + std::string(verse));
  }

  std::string tail;
  std::size_t offset =
      ph_.stressed_vowel_offset(syllables[last_stressed].text, lang);
  std::u32string stressed = utf8::decode(syllables[last_stressed].text);
  tail += utf8::encode(
      std::u32string_view(stressed).substr(offset, stressed.size() - offset));
  for (size_t i = last_stressed + 1; i < syllables.size(); ++i) {
    tail += syllables[i].text;
  }

  RhymeEnding out;
  out.full = fold(tail, lang);
  std::u32string folded = utf8::decode(out.full);
  std::u32string vowels;
  for (size_t i = 0; i < folded.size(); ++i) {
    char32_t next = i + 1 < folded.size() ? folded[i + 1] : 0;
    if (ending_vowel(folded[i], next, lang)) vowels.push_back(folded[i]);
  }
  out.vowels_only = utf8::encode(vowels);
  return out;
}

RhymeScheme Rhymer::detect_rhyme_scheme(
    const std::vector<std::string>& verses, Lang lang,
    const std::vector<std::size_t>& lengths) const {
  if (verses.size() < 2) {
    throw Error(ErrorKind::TooFewVerses,
                "rhyme scheme needs at least two verses");
  }
  if (verses.size() != lengths.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "verses and lengths differ in length");
  }

  std::vector<std::optional<RhymeEnding>> endings(verses.size());
  for (size_t i = 0; i < verses.size(); ++i) {
    try {
      endings[i] = rhyme_ending(verses[i], lang);
    } catch (const Error&) {
      endings[i] = std::nullopt;  // all-atonic verse: never rhymes
    }
  }

  auto group_by = [&](RhymeMode mode) {
    // groups[i] = representative index, or -1 for unrhymed.
    std::vector<int> rep(verses.size(), -1);
    for (size_t i = 0; i < verses.size(); ++i) {
      if (!endings[i]) continue;
      for (size_t j = 0; j < i; ++j) {
        if (!endings[j]) continue;
        if (rhyme_match(*endings[j], *endings[i], mode)) {
          rep[i] = rep[j] == -1 ? static_cast<int>(j) : rep[j];
          if (rep[j] == -1) rep[j] = static_cast<int>(j);
          break;
        }
      }
    }
    return rep;
  };

  std::vector<int> rep = group_by(RhymeMode::Consonance);
  RhymeType type = RhymeType::Consonance;

  bool any_consonance = false;
  bool fallback = false;
  for (size_t i = 0; i < verses.size(); ++i) {
    if (rep[i] != -1) any_consonance = true;
  }
  for (size_t i = 0; i < verses.size() && !fallback; ++i) {
    if (rep[i] != -1 || !endings[i]) continue;
    for (size_t j = 0; j < verses.size(); ++j) {
      if (j == i || !endings[j]) continue;
      if (rhyme_match(*endings[i], *endings[j], RhymeMode::Assonance)) {
        fallback = true;
        break;
      }
    }
  }

  if (fallback) {
    rep = group_by(RhymeMode::Assonance);
    type = RhymeType::Assonance;
  } else if (!any_consonance) {
    type = RhymeType::None;
  }

  RhymeScheme scheme;
  scheme.labels.resize(verses.size());
  std::unordered_map<int, char> letter_of;
  for (size_t i = 0; i < verses.size(); ++i) {
    if (rep[i] == -1) {
      scheme.labels[i] = "-";
      continue;
    }
    auto it = letter_of.find(rep[i]);
    if (it == letter_of.end()) {
      char next = static_cast<char>('a' + (letter_of.size() % 26));
      it = letter_of.emplace(rep[i], next).first;
    }
    char c = it->second;
    bool arte_mayor = lengths[i] > 8;
    scheme.labels[i] =
        std::string(1, arte_mayor ? static_cast<char>(c - 'a' + 'A') : c);
  }
  scheme.rhyme_type = type;
  return scheme;
}

}  // namespace verso::rhyme
