#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "verso/language.hpp"
#include "verso/phonology.hpp"

namespace verso::rhyme {

/// Verse tail from the last stressed vowel onward, in a folded,
/// sound-approximating spelling. `vowels_only` drops the consonants.
struct RhymeEnding {
  std::string full;
  std::string vowels_only;
};

enum class RhymeMode { Consonance, Assonance };

/// Detector output classes. `Mixed` is never produced by the detector;
/// it exists for annotations and catalog rules that accept either mode.
enum class RhymeType { Consonance, Assonance, Mixed, None };

std::string_view rhyme_type_name(RhymeType t);

struct RhymeScheme {
  std::vector<std::string> labels;  // per verse: "a".."z"/"A".."Z" or "-"
  RhymeType rhyme_type = RhymeType::None;

  std::string to_string() const;  // labels concatenated
};

/// Consonance compares the full endings, assonance only the vowels.
bool rhyme_match(const RhymeEnding& a, const RhymeEnding& b, RhymeMode mode);

/// First-use-order relabeling (case-insensitive); '-' is kept. Two
/// schemes describe the same rhyme structure iff their canonical forms
/// are equal.
std::string canonical_scheme(const std::vector<std::string>& labels);

class Rhymer {
 public:
  /// `data_dir` supplies the Spanish folding table (es_folding.tsv).
  Rhymer(const phonology::Phonology& ph, const std::filesystem::path& data_dir);

  /// No folding rules; endings compare by raw lowercase spelling.
  explicit Rhymer(const phonology::Phonology& ph);

  RhymeEnding rhyme_ending(std::string_view verse, Lang lang) const;

  /// Consonance grouping first; if a verse left unrhymed by consonance
  /// pairs with another verse under assonance, the whole stanza is
  /// regrouped by assonance. Label case follows each verse's metrical
  /// length (lowercase up to 8, uppercase above).
  RhymeScheme detect_rhyme_scheme(const std::vector<std::string>& verses,
                                  Lang lang,
                                  const std::vector<std::size_t>& lengths) const;

  /// Applies the language's orthography-to-sound folding to an ending.
  std::string fold(std::string_view ending, Lang lang) const;

  const phonology::Phonology& phonology() const { return ph_; }

 private:
  struct FoldRule {
    std::u32string pattern;
    std::u32string replacement;
    bool at_end = false;
  };

  const phonology::Phonology& ph_;
  std::vector<FoldRule> es_rules_;
};

}  // namespace verso::rhyme
