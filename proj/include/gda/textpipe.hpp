#pragma once

#include "gda/table.hpp"

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gda {

enum class Script {
    latin,
    greek,
    cyrillic,
    armenian,
    hebrew,
    arabic,
    devanagari,
    thai,
    hangul,
    hiragana,
    katakana,
    han,
    inherited,  // combining marks, take the script of their base letter
    none,       // not a letter
};

const char* to_string(Script s);
Script script_from_string(const std::string& s);

/// Script of a code point; Script::none for non-letters.
Script script_of(char32_t cp);

/// Simple one-to-one lowercase mapping for Latin, Greek and Cyrillic.
char32_t to_lower(char32_t cp);

/// Decode UTF-8, throwing InputError with the byte offset of the first bad sequence.
std::u32string decode_utf8(std::string_view bytes);
void append_utf8(std::string& out, char32_t cp);

/// Words by class ("prepositions", "verb-parts", "abbreviations", ...).
struct Stoplist {
    std::map<std::string, std::string> word_class;  // lowercase word -> class

    /// Reads a list file: `[class]` section headers followed by one word per
    /// line; `#` starts a comment.
    static Stoplist load(const std::filesystem::path& path);
    void merge(const Stoplist& other);
    std::set<std::string> classes() const;
};

/// Stoplists shipped for `languages` (e.g. "en", "fr", "es") under `dir`.
Stoplist load_stoplists(const std::filesystem::path& dir, const std::vector<std::string>& languages);

struct FilterPolicy {
    std::size_t min_occurrences = 1000;
    std::set<std::string> stopword_classes;
    Stoplist stoplist;
    std::set<Script> scripts;  // allowed scripts; empty allows all
    bool lowercase = true;
    bool keep_empty_segments = false;
};

struct RejectedToken {
    std::string token;
    Script script;
};

struct TokenStream {
    std::vector<std::string> tokens;
    std::vector<RejectedToken> rejected;  // dropped by the script filter
};

/// Tokens are maximal runs of letters, keeping apostrophes that sit between
/// two letters. Digits, punctuation and whitespace separate tokens.
TokenStream tokenize(std::string_view text, const FilterPolicy& policy);

enum class DropReason { script, stopword, rare, empty_segment };

const char* to_string(DropReason r);

struct FilterRecord {
    std::string item;  // term, or segment id for empty_segment
    DropReason reason;
    std::string detail;

    friend bool operator==(const FilterRecord&, const FilterRecord&) = default;
};

struct RawSegment {
    std::string id;
    std::string text;
};

struct Segment {
    std::string id;
    std::map<std::string, std::size_t> counts;
};

struct SegmentedCorpus {
    std::vector<Segment> segments;
    std::map<std::string, std::size_t> vocabulary;  // corpus frequency before filtering
    std::vector<std::string> retained;              // descending frequency, then lexicographic
    std::vector<FilterRecord> filter_log;

    std::size_t token_count() const;
};

/// Tokenize every segment (optionally on several threads) and count terms.
/// The result does not depend on `threads`.
SegmentedCorpus build_corpus(const std::vector<RawSegment>& segments, const FilterPolicy& policy,
                             unsigned threads = 1);

/// Drop stopword classes and rare terms, then empty segments. Each dropped
/// term is logged once, with its first applicable reason.
SegmentedCorpus apply_filter(SegmentedCorpus corpus, const FilterPolicy& policy);

enum class CrosstabMode { presence, frequency };

struct Crosstab {
    ContingencyTable table;
    std::vector<std::string> zero_rows;  // segments with no retained term
};

/// Segments x retained terms.
Crosstab crosstab(const SegmentedCorpus& corpus, CrosstabMode mode);

/// One segment per regular file in `dir`, in filename order, id = filename.
std::vector<RawSegment> segment_files(const std::filesystem::path& dir);

/// Split at lines starting with `marker`. With `separate_preamble` the text
/// before the first marker is its own segment; otherwise it joins the first.
std::vector<RawSegment> segment_by_marker(std::string_view text, std::string_view marker,
                                          bool separate_preamble);

struct TimedRecord {
    std::string timestamp;  // ISO-8601
    std::string text;
};

/// UTC calendar day of an ISO-8601 timestamp: `YYYY-MM-DD`, optionally
/// followed by `THH:MM[:SS[.fff]]` and `Z` or a `+HH:MM`/`-HH:MM` offset.
std::chrono::sys_days parse_utc_day(std::string_view timestamp);

/// One segment per UTC day from the first to the last record's day, ids
/// `YYYY-MM-DD`. Days without records are kept (empty) only when asked.
std::vector<RawSegment> segment_by_day(const std::vector<TimedRecord>& records, bool keep_empty_days);

}  // namespace gda
