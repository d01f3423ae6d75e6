#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "verso/language.hpp"
#include "verso/phonology.hpp"

namespace verso::scansion {

/// Stressed/unstressed sequence over {'+','-'}, one symbol per metrical
/// syllable.
struct MetricalPattern {
  std::string symbols;

  static MetricalPattern parse(std::string_view text);
  std::size_t size() const { return symbols.size(); }
};

enum class DeviceKind { Synalepha, SynalephaBroken, Syneresis, Dieresis };

std::string_view device_kind_name(DeviceKind kind);

struct DeviceEvent {
  DeviceKind kind;
  std::size_t position;  // unit index at which the device acts
};

/// One phonological syllable of a verse, before devices apply.
struct VerseSyllable {
  std::string text;
  bool stressed = false;
  std::size_t word_index = 0;
  bool word_initial = false;
  bool word_final = false;
};

struct Unit {
  std::string text;
  bool stressed = false;
};

struct ScannedVerse {
  std::string verse;
  std::vector<Unit> units;
  MetricalPattern pattern;
  std::size_t metrical_length = 0;
  std::vector<DeviceEvent> devices;
  bool low_confidence = false;  // phonology was best-effort somewhere
  bool capped = false;          // enumeration stopped at the cap
  bool off_target = false;      // no candidate hit the requested length
};

enum class FinalStress { Oxytone, Paroxytone, Proparoxytone };

inline constexpr std::size_t kDefaultCandidateCap = 256;

/// Per-word syllabification concatenated in verse order, closed-class
/// words demoted to unstressed. A vowel-less elision token (th') fuses
/// into the neighbouring word's syllable here, before any device logic.
std::vector<VerseSyllable> phonological_syllables(
    std::string_view verse, Lang lang, const phonology::Phonology& ph);

/// All device combinations: each synalepha site independently applied or
/// broken, each syneresis/dieresis site independently applied. Candidates
/// are produced in a deterministic order (fewest broken synalephas first,
/// then fewest word-internal devices, positions left to right) and the
/// enumeration stops at `cap`, flagging the results.
std::vector<ScannedVerse> enumerate_scansions(
    std::string_view verse, Lang lang, const phonology::Phonology& ph,
    std::size_t cap = kDefaultCandidateCap);

/// Picks one candidate. With a target length: candidates matching the
/// target, tie-broken by (fewest broken synalephas, fewest
/// syneresis/dieresis events, leftmost device positions); when nothing
/// matches, the closest-length candidate is returned with `off_target`
/// set. Without a target: all synalephas applied, no word-internal
/// devices.
ScannedVerse scan_verse(std::string_view verse, Lang lang,
                        const phonology::Phonology& ph,
                        std::optional<std::size_t> target_length = {},
                        std::size_t cap = kDefaultCandidateCap);

/// Spanish metrical length: unit count +1 for an oxytone ending, -1 for
/// a proparoxytone one. English and German count units as they are.
std::size_t metrical_length_rule(const MetricalPattern& pattern,
                                 FinalStress final_word_stress, Lang lang);

/// Stress class of a verse ending, read off the pattern's last '+'.
FinalStress final_stress_from_pattern(const MetricalPattern& pattern);

}  // namespace verso::scansion
