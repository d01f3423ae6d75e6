#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "verso/language.hpp"

namespace verso::phonology {

/// A word split into syllables with one primary stress.
/// Invariants: syllables concatenate to `word` exactly, every syllable
/// has a vowel, stress_index < syllables.size() when present.
struct WordPhonology {
  std::string word;  // normalized (lowercased, diacritics kept)
  std::vector<std::string> syllables;
  std::optional<std::size_t> stress_index;
  bool low_confidence = false;
};

struct PhonologyOptions {
  /// When true (default), syllabifying a language without scansion-grade
  /// rules (anything but es/en/de) throws UnsupportedLanguage instead of
  /// returning a best-effort, low-confidence split.
  bool strict_languages = true;
};

/// Rule tables plus the syllabification and stress engines. All methods
/// are const and the tables are immutable after construction, so a
/// single instance can serve any number of threads.
class Phonology {
 public:
  /// Loads lexicons and closed-class word lists from `data_dir`
  /// (en_lexicon.tsv, de_lexicon.tsv, {es,en,de}_function_words.txt).
  explicit Phonology(const std::filesystem::path& data_dir,
                     PhonologyOptions options = {});

  /// Tables baked to empty; heuristics only. Mostly useful in tests.
  explicit Phonology(PhonologyOptions options = {});

  WordPhonology syllabify_word(std::string_view word, Lang lang) const;

  /// Index of the lexically stressed syllable; same errors as
  /// syllabify_word.
  std::size_t stress_position(std::string_view word, Lang lang) const;

  /// True when `word` is on the language's unstressed closed-class list.
  bool is_function_word(std::string_view word, Lang lang) const;

  bool is_vowel_letter(char32_t cp, Lang lang) const;

  /// Splits a syllable whose nucleus is a diphthong/triphthong into two
  /// parts (dieresis). Empty when the nucleus has a single vowel.
  std::optional<std::pair<std::string, std::string>> split_diphthong(
      std::string_view syllable, Lang lang) const;

  /// Codepoint offset of the rhyme-bearing vowel inside a stressed
  /// syllable: the accented vowel if any, else the first open vowel of
  /// the nucleus (es), else the first/last vowel as appropriate.
  std::size_t stressed_vowel_offset(std::string_view syllable, Lang lang) const;

  const PhonologyOptions& options() const { return options_; }

 private:
  struct LexiconEntry {
    std::vector<std::string> syllables;
    std::size_t stress = 0;
  };

  WordPhonology syllabify_es(const std::u32string& w) const;
  WordPhonology syllabify_en_de(const std::u32string& w, Lang lang) const;
  WordPhonology syllabify_generic(const std::u32string& w, Lang lang) const;

  void load_lexicon(const std::filesystem::path& file, Lang lang);
  void load_function_words(const std::filesystem::path& file, Lang lang);

  PhonologyOptions options_;
  std::unordered_map<std::string, LexiconEntry> lexicon_[kLangCount];
  std::unordered_set<std::string> function_words_[kLangCount];
};

}  // namespace verso::phonology
