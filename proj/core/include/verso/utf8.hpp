#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace verso::utf8 {

/// Decodes UTF-8 into codepoints. Invalid byte sequences decode to
/// U+FFFD, one replacement per bogus byte, so downstream code never
/// sees broken indices.
std::u32string decode(std::string_view text);

std::string encode(char32_t cp);
std::string encode(std::u32string_view text);

bool is_space(char32_t cp);
bool is_zero_width(char32_t cp);
bool is_punctuation(char32_t cp);
bool is_combining_mark(char32_t cp);

char32_t to_lower(char32_t cp);
std::u32string to_lower(std::u32string_view text);

/// CJK unified ideographs (plus extension A); used for zh word counting
/// and syllabification, where one character is one syllable.
bool is_cjk(char32_t cp);

/// Composes base + combining-mark sequences into precomposed codepoints
/// (canonical composition). Marks are consumed left to right; sequences
/// already in composed form pass through unchanged.
std::u32string compose_nfc(std::u32string_view text);

}  // namespace verso::utf8
