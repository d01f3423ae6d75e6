#include "verso/phonology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "verso/error.hpp"
#include "verso/utf8.hpp"

namespace verso::phonology {

namespace {

constexpr char32_t kAcuteA = 0x00E1, kAcuteE = 0x00E9, kAcuteI = 0x00ED,
                   kAcuteO = 0x00F3, kAcuteU = 0x00FA, kUmlautU = 0x00FC,
                   kUmlautI = 0x00EF;

bool es_strong_vowel(char32_t c) {
  return c == U'a' || c == U'e' || c == U'o' || c == kAcuteA || c == kAcuteE ||
         c == kAcuteO;
}

bool es_weak_vowel(char32_t c) {
  return c == U'i' || c == U'u' || c == kUmlautU || c == kUmlautI || c == U'y';
}

bool es_accented(char32_t c) {
  return c == kAcuteA || c == kAcuteE || c == kAcuteI || c == kAcuteO ||
         c == kAcuteU;
}

bool es_accented_weak(char32_t c) { return c == kAcuteI || c == kAcuteU; }

bool es_any_vowel(char32_t c) {
  return es_strong_vowel(c) || es_weak_vowel(c) || es_accented_weak(c);
}

bool en_vowel(char32_t c) {
  return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u' ||
         c == U'y' || c == 0x00E8 /*è in borrowings*/;
}

bool de_vowel(char32_t c) {
  return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u' ||
         c == U'y' || c == 0x00E4 /*ä*/ || c == 0x00F6 /*ö*/ ||
         c == 0x00FC /*ü*/;
}

// Best-effort vowel sets for the non-scansion-grade languages.
bool generic_vowel(char32_t c, Lang lang) {
  switch (lang) {
    case Lang::fr:
      return std::u32string_view(U"aeiouyàâäéèê"
                                 U"ëîïôöùû"
                                 U"üœæ")
                 .find(c) != std::u32string_view::npos;
    case Lang::it:
      return std::u32string_view(U"aeiouàèéìòó"
                                 U"ù")
                 .find(c) != std::u32string_view::npos;
    case Lang::pt:
      return std::u32string_view(U"aeiouáâãàéê"
                                 U"íóôõú")
                 .find(c) != std::u32string_view::npos;
    case Lang::cs:
      return std::u32string_view(U"aeiouyáéěíóú"
                                 U"ůý")
                 .find(c) != std::u32string_view::npos;
    case Lang::fi:
      return std::u32string_view(U"aeiouyäö").find(c) !=
             std::u32string_view::npos;
    case Lang::hu:
      return std::u32string_view(U"aeiouöüáéíó"
                                 U"úőű")
                 .find(c) != std::u32string_view::npos;
    case Lang::ru:
      return std::u32string_view(U"аеёиоуы"
                                 U"эюя")
                 .find(c) != std::u32string_view::npos;
    case Lang::ar:
      // Long vowels / semi-vowel carriers; short vowels are unwritten.
      return c == 0x0627 || c == 0x0622 || c == 0x0623 || c == 0x0625 ||
             c == 0x0648 || c == 0x064A || c == 0x0649;
    case Lang::zh:
      return utf8::is_cjk(c);
    default:
      return false;
  }
}

struct Seg {
  enum Kind { Vowel, Cons, MuteH } kind;
  std::u32string text;
  bool no_diphthong = false;  // dieresis-marked (ü/ï outside gü)
};

bool is_letter_or_apostrophe(char32_t c) {
  return !utf8::is_space(c) && !utf8::is_punctuation(c);
}

// Valid complex onsets; single consonants (and digraph segments) are
// always valid onsets on their own.
bool es_onset_pair(const std::u32string& a, const std::u32string& b) {
  if (a.size() != 1 || b.size() != 1) return false;
  char32_t c1 = a[0], c2 = b[0];
  static const std::u32string_view heads = U"pbtdcgf";
  if (heads.find(c1) == std::u32string_view::npos) return false;
  if (c2 == U'r') return true;
  if (c2 == U'l') return c1 != U'd' && c1 != U't';  // dl/tl split (at-las)
  return false;
}

const std::vector<std::u32string>& en_onsets() {
  static const std::vector<std::u32string> t = {
      U"bl", U"br", U"ch", U"cl",  U"cr",  U"dr",  U"fl",  U"fr",  U"gl",
      U"gr", U"gh", U"kn", U"ph",  U"pl",  U"pr",  U"sc",  U"sh",  U"sk",
      U"sl", U"sm", U"sn", U"sp",  U"st",  U"sw",  U"th",  U"tr",  U"tw",
      U"wh", U"wr", U"qu", U"chr", U"sch", U"scr", U"shr", U"spl", U"spr",
      U"squ", U"str", U"thr"};
  return t;
}

const std::vector<std::u32string>& de_onsets() {
  static const std::vector<std::u32string> t = {
      U"bl",  U"br",  U"ch",   U"ck",   U"dr",   U"fl",   U"fr",  U"gl",
      U"gn",  U"gr",  U"kl",   U"kn",   U"kr",   U"pf",   U"ph",  U"pl",
      U"pr",  U"qu",  U"sch",  U"schl", U"schm", U"schn", U"schr",
      U"schw", U"sk", U"sl",   U"sm",   U"sp",   U"spr",  U"st",  U"str",
      U"th",  U"tr",  U"tz",   U"zw"};
  return t;
}

bool in_onset_table(const std::vector<std::u32string>& table,
                    const std::u32string& s) {
  return std::find(table.begin(), table.end(), s) != table.end();
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Phonology::Phonology(PhonologyOptions options) : options_(options) {}

Phonology::Phonology(const std::filesystem::path& data_dir,
                     PhonologyOptions options)
    : options_(options) {
  load_lexicon(data_dir / "en_lexicon.tsv", Lang::en);
  load_lexicon(data_dir / "de_lexicon.tsv", Lang::de);
  load_function_words(data_dir / "es_function_words.txt", Lang::es);
  load_function_words(data_dir / "en_function_words.txt", Lang::en);
  load_function_words(data_dir / "de_function_words.txt", Lang::de);
}

void Phonology::load_lexicon(const std::filesystem::path& file, Lang lang) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + file.string());
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string word, syls, stress;
    if (!std::getline(row, word, '\t') || !std::getline(row, syls, '\t') ||
        !std::getline(row, stress, '\t')) {
      throw Error(ErrorKind::ParseError,
                  "bad lexicon row in " + file.string() + ": " + line);
    }
    LexiconEntry entry;
    std::istringstream parts(syls);
    std::string syl;
    while (std::getline(parts, syl, '-')) entry.syllables.push_back(syl);
    entry.stress = std::stoul(stress);
    if (entry.syllables.empty() || entry.stress >= entry.syllables.size()) {
      throw Error(ErrorKind::ParseError,
                  "inconsistent lexicon row in " + file.string() + ": " + line);
    }
    lexicon_[static_cast<int>(lang)][word] = std::move(entry);
  }
}

void Phonology::load_function_words(const std::filesystem::path& file,
                                    Lang lang) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + file.string());
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    function_words_[static_cast<int>(lang)].insert(line);
  }
}

bool Phonology::is_function_word(std::string_view word, Lang lang) const {
  std::string lowered = utf8::encode(utf8::to_lower(utf8::decode(word)));
  return function_words_[static_cast<int>(lang)].count(lowered) > 0;
}

bool Phonology::is_vowel_letter(char32_t cp, Lang lang) const {
  switch (lang) {
    case Lang::es:
      return es_any_vowel(cp);
    case Lang::en:
      return en_vowel(cp);
    case Lang::de:
      return de_vowel(cp);
    default:
      return generic_vowel(cp, lang);
  }
}

WordPhonology Phonology::syllabify_word(std::string_view word,
                                        Lang lang) const {
  if (word.empty()) throw Error(ErrorKind::EmptyWord, "empty word");
  std::u32string w = utf8::to_lower(utf8::decode(word));
  for (char32_t& c : w) {
    if (c == 0x2019) c = U'\'';  // curly apostrophe
    if (utf8::is_space(c)) {
      throw Error(ErrorKind::ParseError,
                  "word contains whitespace: " + std::string(word));
    }
  }

  if (lang == Lang::es) return syllabify_es(w);
  if (lang == Lang::en || lang == Lang::de) return syllabify_en_de(w, lang);
  if (options_.strict_languages) {
    throw Error(ErrorKind::UnsupportedLanguage,
                std::string("no scansion-grade phonology for '") +
                    std::string(lang_code(lang)) +
                    "' (set strict_languages=false for best effort)");
  }
  return syllabify_generic(w, lang);
}

std::size_t Phonology::stress_position(std::string_view word,
                                       Lang lang) const {
  WordPhonology p = syllabify_word(word, lang);
  return p.stress_index.value_or(0);
}

// --------------------------------------------------------------------
// Spanish
// --------------------------------------------------------------------

WordPhonology Phonology::syllabify_es(const std::u32string& w) const {
  // Segment pass: digraphs (ch, ll, rr, qu, gu+e/i) become single
  // consonant segments; mute h is its own segment kind so that vowel
  // grouping can see through it.
  std::vector<Seg> segs;
  for (size_t i = 0; i < w.size(); ++i) {
    char32_t c = w[i];
    char32_t next = i + 1 < w.size() ? w[i + 1] : 0;
    if (c == U'c' && next == U'h') {
      segs.push_back({Seg::Cons, U"ch"});
      ++i;
    } else if (c == U'l' && next == U'l') {
      segs.push_back({Seg::Cons, U"ll"});
      ++i;
    } else if (c == U'r' && next == U'r') {
      segs.push_back({Seg::Cons, U"rr"});
      ++i;
    } else if (c == U'q' && next == U'u') {
      segs.push_back({Seg::Cons, U"qu"});  // silent u
      ++i;
    } else if (c == U'g' && next == U'u' && i + 2 < w.size() &&
               (w[i + 2] == U'e' || w[i + 2] == U'i' || w[i + 2] == kAcuteE ||
                w[i + 2] == kAcuteI)) {
      segs.push_back({Seg::Cons, U"gu"});  // silent u (gue/gui)
      ++i;
    } else if (c == U'h') {
      segs.push_back({Seg::MuteH, U"h"});
    } else if (es_any_vowel(c)) {
      bool vowel_y = (c != U'y') || (next == 0 || !es_any_vowel(next));
      if (!vowel_y) {
        segs.push_back({Seg::Cons, std::u32string(1, c)});
        continue;
      }
      Seg s{Seg::Vowel, std::u32string(1, c)};
      if (c == kUmlautI) s.no_diphthong = true;
      if (c == kUmlautU) {
        // ü after g is the ordinary güe/güi glide; elsewhere it is the
        // poets' dieresis mark (süave) and must not form a diphthong.
        bool after_g = !segs.empty() && segs.back().kind == Seg::Cons &&
                       segs.back().text == U"g";
        if (!after_g) s.no_diphthong = true;
      }
      segs.push_back(std::move(s));
    } else {
      segs.push_back({Seg::Cons, std::u32string(1, c)});
    }
  }

  // Vowel runs: maximal vowel sequences where mute h does not break
  // adjacency. Group each run into nuclei.
  std::vector<int> nucleus_of(segs.size(), -1);
  int nuclei = 0;
  auto is_strong = [](const Seg& s) { return es_strong_vowel(s.text[0]); };
  auto is_weak_unaccented = [](const Seg& s) {
    return es_weak_vowel(s.text[0]) && !s.no_diphthong;
  };
  auto diphthong_pair = [&](const Seg& a, const Seg& b) {
    if (a.no_diphthong || b.no_diphthong) return false;
    char32_t ca = a.text[0], cb = b.text[0];
    // Two weak vowels always pair (orthographic convention), even when
    // the second is accented (lingüística, huí).
    if (es_weak_vowel(ca) && (es_weak_vowel(cb) || es_accented_weak(cb)))
      return true;
    if (es_accented_weak(ca) && es_weak_vowel(cb)) return true;
    // Strong + weak (either order) pairs unless the weak one carries the
    // accent (día, baúl).
    if (es_strong_vowel(ca) && es_weak_vowel(cb)) return true;
    if (es_weak_vowel(ca) && es_strong_vowel(cb)) return true;
    return false;
  };

  for (size_t i = 0; i < segs.size(); ++i) {
    if (segs[i].kind != Seg::Vowel || nucleus_of[i] != -1) continue;
    // Collect the vowel run starting here.
    std::vector<size_t> run;
    size_t j = i;
    while (j < segs.size()) {
      if (segs[j].kind == Seg::Vowel) {
        run.push_back(j);
        ++j;
      } else if (segs[j].kind == Seg::MuteH && j + 1 < segs.size() &&
                 segs[j + 1].kind == Seg::Vowel) {
        ++j;  // transparent
      } else {
        break;
      }
    }
    // Nucleus grouping within the run.
    size_t k = 0;
    while (k < run.size()) {
      int id = nuclei++;
      nucleus_of[run[k]] = id;
      size_t len = 1;
      while (k + len < run.size() && len < 3) {
        const Seg& prev = segs[run[k + len - 1]];
        const Seg& cur = segs[run[k + len]];
        if (len == 2) {
          // Triphthong: weak + strong + weak only.
          const Seg& first = segs[run[k]];
          if (is_weak_unaccented(first) && is_strong(prev) &&
              is_weak_unaccented(cur)) {
            nucleus_of[run[k + len]] = id;
            ++len;
            continue;
          }
          break;
        }
        if (!diphthong_pair(prev, cur)) break;
        // Weak vowel flanked by two strong vowels glides rightward
        // (ca-ca-hue-te): leave it for the next nucleus.
        if (is_strong(prev) && is_weak_unaccented(cur) &&
            k + len + 1 < run.size() &&
            is_strong(segs[run[k + len + 1]]) &&
            diphthong_pair(cur, segs[run[k + len + 1]])) {
          break;
        }
        nucleus_of[run[k + len]] = id;
        ++len;
      }
      k += len;
    }
  }

  if (nuclei == 0) {
    throw Error(ErrorKind::NoVowel,
                "no syllabic nucleus in: " + utf8::encode(w));
  }

  // Mute h inside a nucleus (diphthong across h) joins that nucleus.
  for (size_t i = 1; i + 1 < segs.size(); ++i) {
    if (segs[i].kind == Seg::MuteH && nucleus_of[i - 1] != -1 &&
        nucleus_of[i - 1] == nucleus_of[i + 1]) {
      nucleus_of[i] = nucleus_of[i - 1];
    }
  }

  // Syllable boundaries: maximize the legal onset of the following
  // syllable (a single consonant segment is always legal, two only for
  // obstruent+liquid pairs).
  std::vector<size_t> syllable_start;  // segment index
  syllable_start.push_back(0);
  int seen = 0;
  for (size_t i = 0; i < segs.size() && seen < nuclei - 1; ++i) {
    if (nucleus_of[i] == -1 || nucleus_of[i] != seen) continue;
    // i = last segment of nucleus `seen` (keep scanning to its end).
    size_t end = i;
    while (end + 1 < segs.size() && nucleus_of[end + 1] == seen) ++end;
    size_t next_nucleus = end + 1;
    while (next_nucleus < segs.size() && nucleus_of[next_nucleus] == -1)
      ++next_nucleus;
    size_t n_cons = next_nucleus - end - 1;
    size_t onset;
    if (n_cons <= 1) {
      onset = n_cons;
    } else if (es_onset_pair(segs[next_nucleus - 2].text,
                             segs[next_nucleus - 1].text)) {
      onset = 2;
    } else {
      onset = 1;
    }
    syllable_start.push_back(next_nucleus - onset);
    ++seen;
    i = end;
  }

  WordPhonology out;
  out.word = utf8::encode(w);
  for (size_t s = 0; s < syllable_start.size(); ++s) {
    size_t from = syllable_start[s];
    size_t to = s + 1 < syllable_start.size() ? syllable_start[s + 1]
                                              : segs.size();
    std::u32string text;
    for (size_t i = from; i < to; ++i) text += segs[i].text;
    out.syllables.push_back(utf8::encode(text));
  }

  // Stress: the written accent wins; otherwise penultimate when the
  // word ends in a plain vowel, n or s (final y counts as a consonant),
  // else final. Monosyllables are stressed.
  std::optional<size_t> accent_syllable;
  {
    size_t syl = 0, consumed = 0;
    std::u32string cur = utf8::decode(out.syllables[0]);
    for (size_t i = 0; i < w.size(); ++i) {
      if (consumed == cur.size()) {
        ++syl;
        consumed = 0;
        cur = utf8::decode(out.syllables[syl]);
      }
      if (es_accented(w[i]) && !accent_syllable) accent_syllable = syl;
      ++consumed;
    }
  }
  if (accent_syllable) {
    out.stress_index = *accent_syllable;
  } else if (out.syllables.size() == 1) {
    out.stress_index = 0;
  } else {
    char32_t last = 0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      if (*it != U'\'' && *it != 0x2019) {
        last = *it;
        break;
      }
    }
    bool penult = last == U'a' || last == U'e' || last == U'i' ||
                  last == U'o' || last == U'u' || last == U'n' || last == U's';
    out.stress_index = penult ? out.syllables.size() - 2
                              : out.syllables.size() - 1;
  }
  return out;
}

// --------------------------------------------------------------------
// English / German (lexicon first, heuristic fallback)
// --------------------------------------------------------------------

namespace {

// Nucleus positions for the en heuristic, with the silent-e family of
// rules: final -e / -es / -ed are non-syllabic except after t/d (-ed),
// after s/x/z/c/g (-es) and in consonant+le endings (ta-ble, bat-tled).
std::vector<bool> en_nucleus_mask(const std::u32string& w) {
  std::vector<bool> vowel(w.size(), false);
  for (size_t i = 0; i < w.size(); ++i) {
    char32_t c = w[i];
    if (!en_vowel(c)) continue;
    if (c == U'y' && i + 1 < w.size() && en_vowel(w[i + 1]) &&
        w[i + 1] != U'y') {
      continue;  // consonantal y (yes, beyond)
    }
    if (c == U'u' && i > 0 && w[i - 1] == U'q') continue;  // qu
    vowel[i] = true;
  }
  size_t n_vowels = std::count(vowel.begin(), vowel.end(), true);
  if (n_vowels <= 1) return vowel;

  auto drop_final_e = [&](size_t e_pos) {
    if (!vowel[e_pos] || w[e_pos] != U'e') return;
    if (e_pos == 0 || en_vowel(w[e_pos - 1])) return;  // "ee", "ue"
    char32_t before = w[e_pos - 1];
    // consonant + le : syllabic (little, battled)
    if (before == U'l' && e_pos >= 2 && !en_vowel(w[e_pos - 2])) return;
    vowel[e_pos] = false;
  };

  size_t n = w.size();
  if (w.back() == U'e') {
    drop_final_e(n - 1);
  } else if (n >= 2 && w[n - 1] == U's' && w[n - 2] == U'e') {
    if (n >= 3) {
      char32_t b = w[n - 3];
      if (b != U's' && b != U'x' && b != U'z' && b != U'c' && b != U'g') {
        drop_final_e(n - 2);
      }
    }
  } else if (n >= 2 && w[n - 1] == U'd' && w[n - 2] == U'e') {
    if (n >= 3) {
      char32_t b = w[n - 3];
      if (b != U't' && b != U'd') drop_final_e(n - 2);
    }
  }
  return vowel;
}

std::vector<bool> de_nucleus_mask(const std::u32string& w) {
  std::vector<bool> vowel(w.size(), false);
  for (size_t i = 0; i < w.size(); ++i) {
    char32_t c = w[i];
    if (!de_vowel(c)) continue;
    if (c == U'y' && i + 1 < w.size() && de_vowel(w[i + 1])) continue;
    if (c == U'u' && i > 0 && w[i - 1] == U'q') continue;
    vowel[i] = true;
  }
  return vowel;
}

}  // namespace

WordPhonology Phonology::syllabify_en_de(const std::u32string& w,
                                         Lang lang) const {
  WordPhonology out;
  out.word = utf8::encode(w);

  auto lex = lexicon_[static_cast<int>(lang)].find(out.word);
  if (lex != lexicon_[static_cast<int>(lang)].end()) {
    out.syllables = lex->second.syllables;
    out.stress_index = lex->second.stress;
    return out;
  }

  std::vector<bool> nucleus =
      lang == Lang::en ? en_nucleus_mask(w) : de_nucleus_mask(w);

  // Group adjacent nucleus letters into vowel clusters; an elision
  // apostrophe between vowels joins them (o'er scans as one syllable).
  std::vector<std::pair<size_t, size_t>> clusters;  // [from, to)
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] == U'\'' && !clusters.empty() && clusters.back().second == i &&
        i + 1 < w.size() && nucleus[i + 1]) {
      clusters.back().second = i + 1;
      continue;
    }
    if (!nucleus[i]) continue;
    if (!clusters.empty() && clusters.back().second == i) {
      clusters.back().second = i + 1;
    } else {
      clusters.push_back({i, i + 1});
    }
  }
  if (clusters.empty()) {
    throw Error(ErrorKind::NoVowel,
                "no syllabic nucleus in: " + out.word);
  }

  const auto& onsets = lang == Lang::en ? en_onsets() : de_onsets();
  std::vector<size_t> starts{0};
  for (size_t c = 0; c + 1 < clusters.size(); ++c) {
    size_t gap_from = clusters[c].second;
    size_t gap_to = clusters[c + 1].first;
    size_t n_cons = gap_to - gap_from;
    size_t onset = std::min<size_t>(n_cons, 1);
    for (size_t len = 2; len <= std::min<size_t>(n_cons, 4); ++len) {
      std::u32string tail = w.substr(gap_to - len, len);
      if (in_onset_table(onsets, tail)) onset = len;
    }
    starts.push_back(gap_to - onset);
  }

  for (size_t s = 0; s < starts.size(); ++s) {
    size_t from = starts[s];
    size_t to = s + 1 < starts.size() ? starts[s + 1] : w.size();
    out.syllables.push_back(utf8::encode(w.substr(from, to - from)));
  }
  out.stress_index =
      out.syllables.size() == 1 ? 0 : out.syllables.size() - 2;
  return out;
}

// --------------------------------------------------------------------
// Generic best-effort splitter (non-scansion-grade languages)
// --------------------------------------------------------------------

WordPhonology Phonology::syllabify_generic(const std::u32string& w,
                                           Lang lang) const {
  WordPhonology out;
  out.word = utf8::encode(w);
  out.low_confidence = true;

  if (lang == Lang::zh) {
    // One ideograph, one syllable; other marks stick to the previous
    // character.
    bool any = false;
    for (char32_t c : w) any = any || utf8::is_cjk(c);
    if (!any) {
      throw Error(ErrorKind::NoVowel, "no syllabic nucleus in: " + out.word);
    }
    for (char32_t c : w) {
      if (utf8::is_cjk(c) || out.syllables.empty()) {
        out.syllables.push_back(utf8::encode(c));
      } else {
        out.syllables.back() += utf8::encode(c);
      }
    }
    out.stress_index = 0;
    return out;
  }

  std::vector<std::pair<size_t, size_t>> clusters;
  for (size_t i = 0; i < w.size(); ++i) {
    if (!generic_vowel(w[i], lang)) continue;
    if (!clusters.empty() && clusters.back().second == i) {
      clusters.back().second = i + 1;
    } else {
      clusters.push_back({i, i + 1});
    }
  }
  if (clusters.empty()) {
    throw Error(ErrorKind::NoVowel, "no syllabic nucleus in: " + out.word);
  }

  // One consonant to the next onset, the rest stay in the coda.
  std::vector<size_t> starts{0};
  for (size_t c = 0; c + 1 < clusters.size(); ++c) {
    size_t gap_from = clusters[c].second;
    size_t gap_to = clusters[c + 1].first;
    size_t onset = std::min<size_t>(gap_to - gap_from, 1);
    starts.push_back(gap_to - onset);
  }

  for (size_t s = 0; s < starts.size(); ++s) {
    size_t from = starts[s];
    size_t to = s + 1 < starts.size() ? starts[s + 1] : w.size();
    out.syllables.push_back(utf8::encode(w.substr(from, to - from)));
  }
  out.stress_index =
      out.syllables.size() == 1 ? 0 : out.syllables.size() - 2;
  return out;
}

// --------------------------------------------------------------------
// Helpers used by scansion and rhyme
// --------------------------------------------------------------------

std::optional<std::pair<std::string, std::string>> Phonology::split_diphthong(
    std::string_view syllable, Lang lang) const {
  std::u32string s = utf8::decode(syllable);
  // Find the vowel cluster (mute h transparent for es).
  std::vector<size_t> vowels;
  for (size_t i = 0; i < s.size(); ++i) {
    if (is_vowel_letter(s[i], lang)) vowels.push_back(i);
  }
  if (vowels.size() < 2) return std::nullopt;
  // Adjacent (or h-separated, es) vowel pair required.
  for (size_t k = 0; k + 1 < vowels.size(); ++k) {
    size_t a = vowels[k], b = vowels[k + 1];
    bool adjacent = b == a + 1;
    bool h_gap = lang == Lang::es && b == a + 2 && s[a + 1] == U'h';
    if (!adjacent && !h_gap) continue;
    // Split after the first vowel; an intervening h goes rightward.
    size_t cut = a + 1;
    return std::make_pair(utf8::encode(s.substr(0, cut)),
                          utf8::encode(s.substr(cut)));
  }
  return std::nullopt;
}

std::size_t Phonology::stressed_vowel_offset(std::string_view syllable,
                                             Lang lang) const {
  std::u32string s = utf8::decode(syllable);
  std::vector<size_t> vowels;
  for (size_t i = 0; i < s.size(); ++i) {
    if (is_vowel_letter(s[i], lang)) vowels.push_back(i);
  }
  if (vowels.empty()) return 0;
  if (lang == Lang::es) {
    for (size_t i : vowels) {
      if (es_accented(s[i])) return i;
    }
    for (size_t i : vowels) {
      if (es_strong_vowel(s[i])) return i;
    }
    // All-weak nucleus (ui/iu): the last weak vowel carries the beat;
    // the silent u of qu/gu never does.
    for (auto it = vowels.rbegin(); it != vowels.rend(); ++it) {
      char32_t c = s[*it];
      bool silent = (c == U'u' && *it > 0 &&
                     (s[*it - 1] == U'q' || s[*it - 1] == U'g'));
      if (!silent) return *it;
    }
    return vowels.back();
  }
  // en/de: first vowel of the cluster approximates the rhyme vowel.
  for (size_t i : vowels) {
    bool silent = (s[i] == U'u' && i > 0 && s[i - 1] == U'q');
    if (!silent) return i;
  }
  return vowels.front();
}

}  // namespace verso::phonology
