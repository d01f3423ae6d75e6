#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "verso/language.hpp"

namespace verso::corpus {

struct CorpusRecord {
  std::string verse;
  Lang language = Lang::es;
  std::string source;
  std::optional<std::string> poem_id;
  std::optional<std::size_t> stanza_index;
  std::optional<std::size_t> verse_index;
  /// Present when the input already carries a train/validation/test
  /// assignment (pass-through splitting).
  std::optional<std::string> split;
};

struct LangCount {
  std::uint64_t verses = 0;
  std::uint64_t words = 0;
};

struct CorpusStats {
  std::array<LangCount, kLangCount> per_language{};
  std::uint64_t duplicates_removed = 0;
  std::uint64_t malformed_skipped = 0;

  LangCount totals() const;
  CorpusStats& operator+=(const CorpusStats& other);
};

/// Unicode NFC composition, zero-width stripping, whitespace collapse
/// and trim. Case, punctuation and diacritics are preserved. An empty
/// result marks a droppable record.
std::string normalize_verse(std::string_view text);

/// Whitespace tokens for space-delimited scripts; for zh every CJK
/// character counts as a word.
std::uint64_t word_count(std::string_view verse, Lang lang);

/// Streaming first-occurrence dedup keyed on (language, normalized
/// verse). Memory grows with the number of distinct verses only (64-bit
/// key set).
class Deduplicator {
 public:
  /// Normalizes the record; returns it if this is the first occurrence,
  /// nullopt for duplicates and malformed (empty) records. Stats
  /// accumulate across calls.
  std::optional<CorpusRecord> push(CorpusRecord record);

  const CorpusStats& stats() const { return stats_; }

 private:
  std::unordered_set<std::uint64_t> seen_;
  CorpusStats stats_;
};

/// Convenience wrapper over Deduplicator for in-memory corpora.
std::pair<std::vector<CorpusRecord>, CorpusStats> dedup_corpus(
    const std::vector<CorpusRecord>& records);

CorpusStats corpus_stats(const std::vector<CorpusRecord>& records);

struct SplitResult {
  std::vector<CorpusRecord> train;
  std::vector<CorpusRecord> validation;
  std::vector<CorpusRecord> test;
};

enum class SplitGrouping { None, PoemId };

/// Deterministic split under (seed, input order). Groups (poem_id when
/// grouping is PoemId) land in exactly one part; part sizes follow the
/// fractions by largest remainder, so they are within one group of
/// exact. Records keep their input order inside each part.
SplitResult split_dataset(const std::vector<CorpusRecord>& records,
                          std::array<double, 3> fractions, std::uint64_t seed,
                          SplitGrouping grouping = SplitGrouping::None);

/// Pass-through mode: routes records by their `split` field
/// (train/validation/test; dev and val are accepted for validation).
SplitResult route_existing_splits(const std::vector<CorpusRecord>& records);

// ---- adapters -------------------------------------------------------

using RecordSink = std::function<void(CorpusRecord)>;

/// One verse per line; blank lines advance the stanza counter.
void read_plaintext(std::istream& in, Lang lang, const std::string& source,
                    const RecordSink& sink);

/// Minimal TEI reader: collects <l> element text, <lg> advances the
/// stanza counter. Tags inside <l> are stripped; the five XML entities
/// and numeric character references are decoded.
void read_tei(std::istream& in, Lang lang, const std::string& source,
              const RecordSink& sink);

/// Canonical JSON-lines: {verse, language, source, poem_id?,
/// stanza_index?, verse_index?, split?}.
void read_jsonl(std::istream& in, const RecordSink& sink);

void write_jsonl(std::ostream& out, const CorpusRecord& record);

}  // namespace verso::corpus
