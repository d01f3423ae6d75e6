#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "verso/language.hpp"
#include "verso/phonology.hpp"
#include "verso/rhyme.hpp"

namespace verso::stanza {

struct StanzaAnalysis {
  std::vector<std::string> verses;
  std::vector<std::size_t> lengths;
  rhyme::RhymeScheme scheme;
  std::string annotation;  // e.g. "8a 8- 6b 8a 8a 6b"
};

struct LengthConstraint {
  enum Kind { Any, Exact, Set } kind = Any;
  std::vector<std::size_t> values;

  bool accepts(std::size_t len) const;
};

struct SchemePattern {
  enum Kind { Any, Literal, Tiled } kind = Any;
  std::string text;  // letters, '-' and '?' (Literal); block (Tiled)
};

enum class RuleMode { Consonance, Assonance, None, Any };

/// One catalog row. `lengths` holds either a single constraint applied
/// to every verse or one constraint per verse (exact verse count only).
struct StanzaTypeRule {
  std::string name;
  std::size_t min_verses = 0;
  std::size_t max_verses = 0;  // SIZE_MAX-like sentinel via max()
  std::vector<LengthConstraint> lengths;
  bool lengths_per_verse = false;
  SchemePattern scheme;
  RuleMode mode = RuleMode::Any;

  bool matches(const StanzaAnalysis& analysis) const;

  /// More exact constraints rank higher; see the catalog docs.
  int specificity() const;
};

using Catalog = std::vector<StanzaTypeRule>;

/// Parses and validates a catalog file: schema errors carry the line
/// number, duplicate names and unsatisfiable rules are rejected.
Catalog load_catalog(const std::filesystem::path& file);

/// Minimal synthetic analysis satisfying the rule; used for the
/// load-time satisfiability check and by property tests.
StanzaAnalysis synthesize_minimal(const StanzaTypeRule& rule);

/// Scans every verse (no target length), detects the rhyme scheme and
/// renders the annotation.
StanzaAnalysis analyze_stanza(const std::vector<std::string>& verses,
                              Lang lang, const rhyme::Rhymer& rhymer);

struct RankedMatch {
  std::string name;
  int score;
};

/// Every satisfied rule, ranked by (specificity desc, name asc). An
/// empty result means the stanza type is unknown.
std::vector<RankedMatch> classify_stanza(const StanzaAnalysis& analysis,
                                         const Catalog& catalog);

std::string render_annotation(const std::vector<std::size_t>& lengths,
                              const rhyme::RhymeScheme& scheme);

/// Inverse of render_annotation (labels keep their case).
std::pair<std::vector<std::size_t>, std::vector<std::string>>
parse_annotation(std::string_view annotation);

}  // namespace verso::stanza
