#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace verso {

/// Languages covered by the verse corpus tooling. Scansion-grade
/// phonology is only guaranteed for es/en/de; the rest get best-effort
/// treatment (see phonology.hpp).
enum class Lang {
  es,
  en,
  de,
  fr,
  it,
  pt,
  cs,
  fi,
  hu,
  ru,
  ar,
  zh,
};

inline constexpr int kLangCount = 12;

std::optional<Lang> parse_lang(std::string_view code);
std::string_view lang_code(Lang lang);

/// True for the three languages with full rule/lexicon support.
inline bool scansion_grade(Lang lang) {
  return lang == Lang::es || lang == Lang::en || lang == Lang::de;
}

}  // namespace verso
