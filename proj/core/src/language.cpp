#include "verso/language.hpp"

#include <array>

namespace verso {

namespace {
constexpr std::array<std::string_view, kLangCount> kCodes = {
    "es", "en", "de", "fr", "it", "pt", "cs", "fi", "hu", "ru", "ar", "zh"};
}

std::optional<Lang> parse_lang(std::string_view code) {
  for (int i = 0; i < kLangCount; ++i) {
    if (kCodes[i] == code) return static_cast<Lang>(i);
  }
  return std::nullopt;
}

std::string_view lang_code(Lang lang) { return kCodes[static_cast<int>(lang)]; }

}  // namespace verso
