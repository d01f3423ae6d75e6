#include "verso/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "verso/error.hpp"
#include "verso/rng.hpp"
#include "verso/utf8.hpp"

namespace verso::corpus {

LangCount CorpusStats::totals() const {
  LangCount t;
  for (const LangCount& c : per_language) {
    t.verses += c.verses;
    t.words += c.words;
  }
  return t;
}

CorpusStats& CorpusStats::operator+=(const CorpusStats& other) {
  for (int i = 0; i < kLangCount; ++i) {
    per_language[i].verses += other.per_language[i].verses;
    per_language[i].words += other.per_language[i].words;
  }
  duplicates_removed += other.duplicates_removed;
  malformed_skipped += other.malformed_skipped;
  return *this;
}

std::string normalize_verse(std::string_view text) {
  std::u32string decoded = utf8::decode(text);
  decoded = utf8::compose_nfc(decoded);
  std::u32string out;
  out.reserve(decoded.size());
  bool pending_space = false;
  for (char32_t c : decoded) {
    if (utf8::is_zero_width(c)) continue;
    if (utf8::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return utf8::encode(out);
}

std::uint64_t word_count(std::string_view verse, Lang lang) {
  std::u32string text = utf8::decode(verse);
  if (lang == Lang::zh) {
    std::uint64_t n = 0;
    for (char32_t c : text) {
      if (utf8::is_cjk(c)) ++n;
    }
    return n;
  }
  std::uint64_t n = 0;
  bool in_word = false;
  for (char32_t c : text) {
    if (utf8::is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

std::optional<CorpusRecord> Deduplicator::push(CorpusRecord record) {
  record.verse = normalize_verse(record.verse);
  if (record.verse.empty()) {
    ++stats_.malformed_skipped;
    return std::nullopt;
  }
  std::uint64_t key = fnv1a(record.verse.data(), record.verse.size(),
                            0xCBF29CE484222325ull ^
                                (static_cast<std::uint64_t>(record.language)
                                 << 56));
  if (!seen_.insert(key).second) {
    ++stats_.duplicates_removed;
    return std::nullopt;
  }
  LangCount& c = stats_.per_language[static_cast<int>(record.language)];
  ++c.verses;
  c.words += word_count(record.verse, record.language);
  return record;
}

std::pair<std::vector<CorpusRecord>, CorpusStats> dedup_corpus(
    const std::vector<CorpusRecord>& records) {
  Deduplicator dedup;
  std::vector<CorpusRecord> out;
  for (const CorpusRecord& r : records) {
    if (auto kept = dedup.push(r)) out.push_back(std::move(*kept));
  }
  return {std::move(out), dedup.stats()};
}

CorpusStats corpus_stats(const std::vector<CorpusRecord>& records) {
  CorpusStats stats;
  for (const CorpusRecord& r : records) {
    LangCount& c = stats.per_language[static_cast<int>(r.language)];
    ++c.verses;
    c.words += word_count(r.verse, r.language);
  }
  return stats;
}

SplitResult split_dataset(const std::vector<CorpusRecord>& records,
                          std::array<double, 3> fractions, std::uint64_t seed,
                          SplitGrouping grouping) {
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "nothing to split");
  }
  double sum = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(sum - 1.0) > 1e-9 || fractions[0] < 0 || fractions[1] < 0 ||
      fractions[2] < 0) {
    throw Error(ErrorKind::InvalidFractions,
                "fractions must be non-negative and sum to 1");
  }

  // Group keys in first-appearance order.
  std::vector<std::string> keys;
  std::unordered_map<std::string, std::size_t> key_index;
  std::vector<std::size_t> group_of(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    std::string key;
    if (grouping == SplitGrouping::PoemId && records[i].poem_id) {
      key = "p:" + *records[i].poem_id;
    } else {
      key = "i:" + std::to_string(i);
    }
    auto [it, inserted] = key_index.try_emplace(key, keys.size());
    if (inserted) keys.push_back(key);
    group_of[i] = it->second;
  }

  std::vector<std::size_t> order(keys.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  deterministic_shuffle(order, seed);

  // Largest-remainder apportionment over groups.
  std::size_t n = keys.size();
  std::array<std::size_t, 3> sizes;
  std::array<double, 3> ideal;
  std::size_t assigned = 0;
  for (int p = 0; p < 3; ++p) {
    ideal[p] = fractions[p] * static_cast<double>(n);
    sizes[p] = static_cast<std::size_t>(ideal[p]);
    assigned += sizes[p];
  }
  while (assigned < n) {
    int best = 0;
    double best_frac = -1;
    for (int p = 0; p < 3; ++p) {
      double frac = ideal[p] - static_cast<double>(sizes[p]);
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        best = p;
      }
    }
    ++sizes[best];
    ++assigned;
  }

  std::vector<int> part_of_group(n);
  for (size_t i = 0; i < n; ++i) {
    int part = i < sizes[0] ? 0 : i < sizes[0] + sizes[1] ? 1 : 2;
    part_of_group[order[i]] = part;
  }

  SplitResult out;
  for (size_t i = 0; i < records.size(); ++i) {
    switch (part_of_group[group_of[i]]) {
      case 0:
        out.train.push_back(records[i]);
        break;
      case 1:
        out.validation.push_back(records[i]);
        break;
      default:
        out.test.push_back(records[i]);
        break;
    }
  }
  return out;
}

SplitResult route_existing_splits(const std::vector<CorpusRecord>& records) {
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "nothing to split");
  }
  SplitResult out;
  for (const CorpusRecord& r : records) {
    std::string tag = r.split.value_or("");
    if (tag == "train") {
      out.train.push_back(r);
    } else if (tag == "validation" || tag == "val" || tag == "dev") {
      out.validation.push_back(r);
    } else if (tag == "test") {
      out.test.push_back(r);
    } else {
      throw Error(ErrorKind::ParseError,
                  "record without usable split tag: '" + tag + "'");
    }
  }
  return out;
}

// ---- adapters -------------------------------------------------------

void read_plaintext(std::istream& in, Lang lang, const std::string& source,
                    const RecordSink& sink) {
  std::string line;
  std::size_t stanza = 0, verse = 0;
  bool saw_verse = false;
  while (std::getline(in, line)) {
    std::string norm = normalize_verse(line);
    if (norm.empty()) {
      if (saw_verse) {
        ++stanza;
        verse = 0;
        saw_verse = false;
      }
      continue;
    }
    CorpusRecord r;
    r.verse = std::move(norm);
    r.language = lang;
    r.source = source;
    r.stanza_index = stanza;
    r.verse_index = verse++;
    saw_verse = true;
    sink(std::move(r));
  }
}

namespace {

std::string decode_entities(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out += text[i++];
      continue;
    }
    size_t semi = text.find(';', i);
    if (semi == std::string::npos || semi - i > 10) {
      out += text[i++];
      continue;
    }
    std::string name = text.substr(i + 1, semi - i - 1);
    if (name == "amp") {
      out += '&';
    } else if (name == "lt") {
      out += '<';
    } else if (name == "gt") {
      out += '>';
    } else if (name == "quot") {
      out += '"';
    } else if (name == "apos") {
      out += '\'';
    } else if (!name.empty() && name[0] == '#') {
      try {
        char32_t cp = name[1] == 'x' || name[1] == 'X'
                          ? std::stoul(name.substr(2), nullptr, 16)
                          : std::stoul(name.substr(1));
        out += utf8::encode(cp);
      } catch (const std::exception&) {
        out += text.substr(i, semi - i + 1);
      }
    } else {
      out += text.substr(i, semi - i + 1);
    }
    i = semi + 1;
  }
  return out;
}

}  // namespace

void read_tei(std::istream& in, Lang lang, const std::string& source,
              const RecordSink& sink) {
  std::string xml((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  std::size_t stanza = 0, verse = 0;
  bool in_line = false;
  std::string buffer;
  size_t i = 0;

  auto emit = [&]() {
    std::string norm = normalize_verse(decode_entities(buffer));
    buffer.clear();
    if (norm.empty()) return;
    CorpusRecord r;
    r.verse = std::move(norm);
    r.language = lang;
    r.source = source;
    r.stanza_index = stanza;
    r.verse_index = verse++;
    sink(std::move(r));
  };

  while (i < xml.size()) {
    if (xml[i] != '<') {
      if (in_line) buffer += xml[i];
      ++i;
      continue;
    }
    size_t close = xml.find('>', i);
    if (close == std::string::npos) break;
    std::string tag = xml.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.empty()) continue;
    bool closing = tag[0] == '/';
    if (closing) tag = tag.substr(1);
    // element name
    size_t name_end = tag.find_first_of(" \t\r\n/");
    std::string name = tag.substr(0, name_end);
    bool self_closing = !tag.empty() && tag.back() == '/';

    if (name == "l") {
      if (closing) {
        if (in_line) emit();
        in_line = false;
      } else if (!self_closing) {
        in_line = true;
        buffer.clear();
      }
    } else if (name == "lg") {
      if (!closing) {
        if (verse > 0) ++stanza;
        verse = 0;
      }
    } else if (in_line) {
      // Inline markup inside <l> (e.g. <seg>, <hi>) separates nothing;
      // replace the tag with a space so words do not glue together.
      buffer += ' ';
    }
  }
}

void read_jsonl(std::istream& in, const RecordSink& sink) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    CorpusRecord r;
    if (!j.contains("verse") || !j.contains("language")) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) +
                      ": record needs 'verse' and 'language'");
    }
    r.verse = j["verse"].get<std::string>();
    auto lang = parse_lang(j["language"].get<std::string>());
    if (!lang) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": unknown language '" +
                      j["language"].get<std::string>() + "'");
    }
    r.language = *lang;
    if (j.contains("source")) r.source = j["source"].get<std::string>();
    if (j.contains("poem_id")) r.poem_id = j["poem_id"].get<std::string>();
    if (j.contains("stanza_index"))
      r.stanza_index = j["stanza_index"].get<std::size_t>();
    if (j.contains("verse_index"))
      r.verse_index = j["verse_index"].get<std::size_t>();
    if (j.contains("split")) r.split = j["split"].get<std::string>();
    sink(std::move(r));
  }
}

void write_jsonl(std::ostream& out, const CorpusRecord& record) {
  nlohmann::ordered_json j;
  j["verse"] = record.verse;
  j["language"] = std::string(lang_code(record.language));
  j["source"] = record.source;
  if (record.poem_id) j["poem_id"] = *record.poem_id;
  if (record.stanza_index) j["stanza_index"] = *record.stanza_index;
  if (record.verse_index) j["verse_index"] = *record.verse_index;
  if (record.split) j["split"] = *record.split;
  out << j.dump() << '\n';
}

}  // namespace verso::corpus
