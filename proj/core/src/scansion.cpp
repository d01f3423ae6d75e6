#include "verso/scansion.hpp"

#include <algorithm>
#include <tuple>

#include "verso/error.hpp"
#include "verso/utf8.hpp"

namespace verso::scansion {

namespace {

using phonology::Phonology;
using phonology::WordPhonology;

std::vector<std::string> tokenize(std::string_view verse) {
  std::u32string text = utf8::decode(verse);
  std::vector<std::string> tokens;
  std::u32string cur;
  for (char32_t c : text) {
    if (c == 0x2019) c = U'\'';
    if (utf8::is_space(c) || utf8::is_punctuation(c) || c == U'-' ||
        utf8::is_zero_width(c)) {
      if (!cur.empty()) {
        tokens.push_back(utf8::encode(cur));
        cur.clear();
      }
      continue;
    }
    cur.push_back(c);
  }
  if (!cur.empty()) tokens.push_back(utf8::encode(cur));
  return tokens;
}

bool has_vowel(const std::string& token, Lang lang, const Phonology& ph) {
  for (char32_t c : utf8::to_lower(utf8::decode(token))) {
    if (ph.is_vowel_letter(c, lang)) return true;
  }
  return false;
}

char32_t last_letter(const std::string& syllable) {
  std::u32string s = utf8::decode(syllable);
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    if (*it != U'\'') return *it;
  }
  return 0;
}

// First letter; Spanish mute h is transparent for synalepha, so an
// h-initial syllable exposes its following vowel.
char32_t first_letter_for_liaison(const std::string& syllable, Lang lang) {
  std::u32string s = utf8::decode(syllable);
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == U'\'') continue;
    if (lang == Lang::es && s[i] == U'h' && i + 1 < s.size()) {
      return s[i + 1];
    }
    return s[i];
  }
  return 0;
}

struct Sites {
  std::vector<std::size_t> synalepha;  // boundary after syllable i
  std::vector<std::size_t> syneresis;  // boundary after syllable i (in-word)
  std::vector<std::size_t> dieresis;   // syllable i splits in two
};

Sites find_sites(const std::vector<VerseSyllable>& syllables, Lang lang,
                 const Phonology& ph) {
  Sites sites;
  for (size_t i = 0; i + 1 < syllables.size(); ++i) {
    const auto& a = syllables[i];
    const auto& b = syllables[i + 1];
    char32_t end = last_letter(a.text);
    char32_t begin = first_letter_for_liaison(b.text, lang);
    bool vowels_meet = end != 0 && begin != 0 &&
                       ph.is_vowel_letter(end, lang) &&
                       ph.is_vowel_letter(begin, lang);
    if (!vowels_meet) continue;
    if (a.word_index != b.word_index) {
      sites.synalepha.push_back(i);
    } else {
      sites.syneresis.push_back(i);
    }
  }
  for (size_t i = 0; i < syllables.size(); ++i) {
    if (ph.split_diphthong(syllables[i].text, lang)) {
      sites.dieresis.push_back(i);
    }
  }
  return sites;
}

struct Candidate {
  std::vector<bool> synalepha_applied;  // parallel to sites.synalepha
  std::vector<bool> device_applied;     // dieresis sites then syneresis sites
};

// Tie-break key per the selection policy: fewest broken synalephas,
// fewest word-internal devices, leftmost positions.
struct CandidateKey {
  std::size_t broken = 0;
  std::size_t devices = 0;
  std::vector<std::size_t> broken_positions;
  std::vector<std::size_t> device_positions;

  bool operator<(const CandidateKey& o) const {
    return std::tie(broken, devices, broken_positions, device_positions) <
           std::tie(o.broken, o.devices, o.broken_positions,
                    o.device_positions);
  }
};

CandidateKey candidate_key(const Candidate& c, const Sites& sites) {
  CandidateKey key;
  for (size_t i = 0; i < c.synalepha_applied.size(); ++i) {
    if (!c.synalepha_applied[i]) {
      ++key.broken;
      key.broken_positions.push_back(sites.synalepha[i]);
    }
  }
  size_t nd = sites.dieresis.size();
  for (size_t i = 0; i < c.device_applied.size(); ++i) {
    if (c.device_applied[i]) {
      ++key.devices;
      key.device_positions.push_back(i < nd ? sites.dieresis[i]
                                            : sites.syneresis[i - nd]);
    }
  }
  return key;
}

ScannedVerse realize(const std::string& verse,
                     const std::vector<VerseSyllable>& syllables,
                     const Sites& sites, const Candidate& cand, Lang lang,
                     const Phonology& ph, bool low_confidence) {
  // Atoms: syllables, with applied dieresis splitting one syllable into
  // two. `origin` tracks the source syllable so boundary indices stay
  // stable.
  struct Atom {
    std::string text;
    bool stressed;
    std::size_t origin;
    bool merges_with_next = false;
  };
  std::vector<Atom> atoms;
  std::vector<DeviceEvent> devices;

  size_t nd = sites.dieresis.size();
  for (size_t i = 0; i < syllables.size(); ++i) {
    auto die_it = std::find(sites.dieresis.begin(), sites.dieresis.end(), i);
    bool split = false;
    if (die_it != sites.dieresis.end()) {
      size_t idx = die_it - sites.dieresis.begin();
      split = cand.device_applied[idx];
    }
    if (split) {
      auto parts = ph.split_diphthong(syllables[i].text, lang);
      // The half holding the open (or accented) vowel keeps the stress.
      size_t beat = ph.stressed_vowel_offset(syllables[i].text, lang);
      size_t first_len = utf8::decode(parts->first).size();
      bool stress_on_first = syllables[i].stressed && beat < first_len;
      atoms.push_back({parts->first, stress_on_first, i, false});
      atoms.push_back(
          {parts->second, syllables[i].stressed && !stress_on_first, i, false});
    } else {
      atoms.push_back({syllables[i].text, syllables[i].stressed, i, false});
    }
  }

  auto mark_merge = [&](std::size_t boundary_after) {
    for (size_t a = 0; a + 1 < atoms.size(); ++a) {
      if (atoms[a].origin == boundary_after &&
          atoms[a + 1].origin == boundary_after + 1) {
        atoms[a].merges_with_next = true;
        return;
      }
    }
  };

  for (size_t i = 0; i < sites.synalepha.size(); ++i) {
    if (cand.synalepha_applied[i]) mark_merge(sites.synalepha[i]);
  }
  for (size_t i = 0; i < sites.syneresis.size(); ++i) {
    if (cand.device_applied[nd + i]) mark_merge(sites.syneresis[i]);
  }

  ScannedVerse out;
  out.verse = verse;
  out.low_confidence = low_confidence;
  for (size_t a = 0; a < atoms.size();) {
    Unit unit{atoms[a].text, atoms[a].stressed};
    size_t unit_index = out.units.size();
    while (atoms[a].merges_with_next) {
      ++a;
      unit.text += atoms[a].text;
      unit.stressed = unit.stressed || atoms[a].stressed;
    }
    ++a;
    out.units.push_back(std::move(unit));
    (void)unit_index;
  }

  // Device events, positioned by resulting unit index.
  std::vector<size_t> unit_of_atom(atoms.size());
  {
    size_t u = 0;
    for (size_t a = 0; a < atoms.size(); ++a) {
      unit_of_atom[a] = u;
      if (!atoms[a].merges_with_next) ++u;
    }
  }
  auto unit_of_origin = [&](std::size_t origin) {
    for (size_t a = 0; a < atoms.size(); ++a) {
      if (atoms[a].origin == origin) return unit_of_atom[a];
    }
    return std::size_t{0};
  };
  for (size_t i = 0; i < sites.synalepha.size(); ++i) {
    devices.push_back({cand.synalepha_applied[i] ? DeviceKind::Synalepha
                                                 : DeviceKind::SynalephaBroken,
                       unit_of_origin(sites.synalepha[i])});
  }
  for (size_t i = 0; i < sites.dieresis.size(); ++i) {
    if (cand.device_applied[i]) {
      devices.push_back({DeviceKind::Dieresis, unit_of_origin(sites.dieresis[i])});
    }
  }
  for (size_t i = 0; i < sites.syneresis.size(); ++i) {
    if (cand.device_applied[nd + i]) {
      devices.push_back(
          {DeviceKind::Syneresis, unit_of_origin(sites.syneresis[i])});
    }
  }
  std::sort(devices.begin(), devices.end(),
            [](const DeviceEvent& a, const DeviceEvent& b) {
              return a.position != b.position ? a.position < b.position
                                              : a.kind < b.kind;
            });
  out.devices = std::move(devices);

  for (const Unit& u : out.units) {
    out.pattern.symbols.push_back(u.stressed ? '+' : '-');
  }
  out.metrical_length = metrical_length_rule(
      out.pattern, final_stress_from_pattern(out.pattern), lang);
  return out;
}

// Emits index subsets of {0..n-1} in (size, lexicographic) order, calling
// `fn` for each; stops when fn returns false.
template <typename Fn>
void for_each_subset_ordered(std::size_t n, Fn&& fn) {
  std::vector<size_t> combo;
  // Iterative k-combinations in lexicographic order.
  for (size_t k = 0; k <= n; ++k) {
    combo.resize(k);
    for (size_t i = 0; i < k; ++i) combo[i] = i;
    while (true) {
      if (!fn(combo)) return;
      if (k == 0) break;
      // next combination
      size_t i = k;
      while (i > 0) {
        --i;
        if (combo[i] != i + n - k) break;
      }
      if (combo[i] == i + n - k) break;
      ++combo[i];
      for (size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
}

}  // namespace

MetricalPattern MetricalPattern::parse(std::string_view text) {
  if (text.empty()) {
    throw Error(ErrorKind::ParseError, "empty metrical pattern");
  }
  for (char c : text) {
    if (c != '+' && c != '-') {
      throw Error(ErrorKind::ParseError,
                  "metrical pattern may contain only '+' and '-': " +
                      std::string(text));
    }
  }
  return MetricalPattern{std::string(text)};
}

std::string_view device_kind_name(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::Synalepha:
      return "synalepha";
    case DeviceKind::SynalephaBroken:
      return "synalepha_broken";
    case DeviceKind::Syneresis:
      return "syneresis";
    case DeviceKind::Dieresis:
      return "dieresis";
  }
  return "?";
}

std::vector<VerseSyllable> phonological_syllables(std::string_view verse,
                                                  Lang lang,
                                                  const Phonology& ph) {
  std::vector<std::string> tokens = tokenize(verse);
  if (tokens.empty()) {
    throw Error(ErrorKind::EmptyVerse,
                "no words in verse: " + std::string(verse));
  }

  std::vector<VerseSyllable> out;
  std::string pending_prefix;  // vowel-less elided token (th')
  for (size_t t = 0; t < tokens.size(); ++t) {
    if (!has_vowel(tokens[t], lang, ph)) {
      // Elision fragment: attach forward, or backward at verse end.
      std::string lowered =
          utf8::encode(utf8::to_lower(utf8::decode(tokens[t])));
      if (t + 1 < tokens.size()) {
        pending_prefix += lowered;
      } else if (!out.empty()) {
        out.back().text += lowered;
        out.back().word_final = true;
      } else {
        throw Error(ErrorKind::NoVowel,
                    "word 1 ('" + tokens[t] + "'): no syllabic nucleus");
      }
      continue;
    }
    WordPhonology p;
    try {
      p = ph.syllabify_word(tokens[t], lang);
    } catch (const Error& e) {
      throw Error(e.kind(), "word " + std::to_string(t + 1) + " ('" +
                                tokens[t] + "'): " + e.what());
    }
    bool demoted = ph.is_function_word(p.word, lang);
    for (size_t s = 0; s < p.syllables.size(); ++s) {
      VerseSyllable vs;
      vs.text = p.syllables[s];
      if (s == 0 && !pending_prefix.empty()) {
        vs.text = pending_prefix + vs.text;
        pending_prefix.clear();
      }
      vs.stressed = !demoted && p.stress_index && *p.stress_index == s;
      vs.word_index = t;
      vs.word_initial = s == 0;
      vs.word_final = s + 1 == p.syllables.size();
      out.push_back(std::move(vs));
    }
  }
  if (out.empty()) {
    throw Error(ErrorKind::EmptyVerse,
                "no syllables in verse: " + std::string(verse));
  }
  return out;
}

std::vector<ScannedVerse> enumerate_scansions(std::string_view verse,
                                              Lang lang, const Phonology& ph,
                                              std::size_t cap) {
  std::vector<VerseSyllable> syllables = phonological_syllables(verse, lang, ph);
  bool low_confidence = !scansion_grade(lang);
  Sites sites = find_sites(syllables, lang, ph);
  std::string verse_text(verse);

  size_t ns = sites.synalepha.size();
  size_t ndev = sites.dieresis.size() + sites.syneresis.size();

  std::vector<ScannedVerse> out;
  bool capped = false;
  // Broken-synalepha subsets in (count, leftmost) order, then device
  // subsets likewise, so the cap discards the least preferred candidates.
  for_each_subset_ordered(ns, [&](const std::vector<size_t>& broken) {
    bool keep_going = true;
    for_each_subset_ordered(ndev, [&](const std::vector<size_t>& dev) {
      if (out.size() >= cap) {
        capped = true;
        keep_going = false;
        return false;
      }
      Candidate cand;
      cand.synalepha_applied.assign(ns, true);
      for (size_t i : broken) cand.synalepha_applied[i] = false;
      cand.device_applied.assign(ndev, false);
      for (size_t i : dev) cand.device_applied[i] = true;
      out.push_back(realize(verse_text, syllables, sites, cand, lang, ph,
                            low_confidence));
      return true;
    });
    return keep_going;
  });

  if (capped) {
    for (auto& sv : out) sv.capped = true;
  }
  return out;
}

ScannedVerse scan_verse(std::string_view verse, Lang lang, const Phonology& ph,
                        std::optional<std::size_t> target_length,
                        std::size_t cap) {
  std::vector<VerseSyllable> syllables = phonological_syllables(verse, lang, ph);
  bool low_confidence = !scansion_grade(lang);
  Sites sites = find_sites(syllables, lang, ph);
  std::string verse_text(verse);

  size_t ns = sites.synalepha.size();
  size_t ndev = sites.dieresis.size() + sites.syneresis.size();

  if (!target_length) {
    Candidate cand;
    cand.synalepha_applied.assign(ns, true);
    cand.device_applied.assign(ndev, false);
    return realize(verse_text, syllables, sites, cand, lang, ph,
                   low_confidence);
  }

  std::optional<Candidate> best_exact;
  CandidateKey best_exact_key;
  std::optional<Candidate> best_near;
  CandidateKey best_near_key;
  std::size_t best_near_gap = 0;
  std::size_t generated = 0;
  bool capped = false;

  for_each_subset_ordered(ns, [&](const std::vector<size_t>& broken) {
    bool keep_going = true;
    for_each_subset_ordered(ndev, [&](const std::vector<size_t>& dev) {
      if (generated >= cap) {
        capped = true;
        keep_going = false;
        return false;
      }
      ++generated;
      Candidate cand;
      cand.synalepha_applied.assign(ns, true);
      for (size_t i : broken) cand.synalepha_applied[i] = false;
      cand.device_applied.assign(ndev, false);
      for (size_t i : dev) cand.device_applied[i] = true;

      ScannedVerse sv =
          realize(verse_text, syllables, sites, cand, lang, ph, low_confidence);
      CandidateKey key = candidate_key(cand, sites);
      if (sv.metrical_length == *target_length) {
        if (!best_exact || key < best_exact_key) {
          best_exact = cand;
          best_exact_key = key;
        }
      } else {
        std::size_t gap = sv.metrical_length > *target_length
                              ? sv.metrical_length - *target_length
                              : *target_length - sv.metrical_length;
        if (!best_near || gap < best_near_gap ||
            (gap == best_near_gap && key < best_near_key)) {
          best_near = cand;
          best_near_key = key;
          best_near_gap = gap;
        }
      }
      return true;
    });
    return keep_going;
  });

  const Candidate& chosen = best_exact ? *best_exact : *best_near;
  ScannedVerse sv =
      realize(verse_text, syllables, sites, chosen, lang, ph, low_confidence);
  sv.off_target = !best_exact;
  sv.capped = capped;
  return sv;
}

std::size_t metrical_length_rule(const MetricalPattern& pattern,
                                 FinalStress final_word_stress, Lang lang) {
  if (pattern.symbols.empty()) {
    throw Error(ErrorKind::ParseError, "empty metrical pattern");
  }
  std::size_t n = pattern.size();
  if (lang != Lang::es) return n;
  switch (final_word_stress) {
    case FinalStress::Oxytone:
      return n + 1;
    case FinalStress::Proparoxytone:
      return n > 1 ? n - 1 : n;
    case FinalStress::Paroxytone:
      return n;
  }
  return n;
}

FinalStress final_stress_from_pattern(const MetricalPattern& pattern) {
  const std::string& s = pattern.symbols;
  auto last_plus = s.find_last_of('+');
  if (last_plus == std::string::npos) return FinalStress::Paroxytone;
  std::size_t from_end = s.size() - 1 - last_plus;
  if (from_end == 0) return FinalStress::Oxytone;
  if (from_end == 1) return FinalStress::Paroxytone;
  if (from_end == 2) return FinalStress::Proparoxytone;
  return FinalStress::Paroxytone;
}

}  // namespace verso::scansion
