#pragma once

#include "expectq/calendar.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace expectq {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

/// A whitespace-delimited token with its byte range and the range of its
/// "core" (the token with leading/trailing punctuation stripped).
struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t core_begin = 0;
    std::size_t core_end = 0;
};

std::vector<TokenSpan> token_spans(std::string_view text);

/// Whitespace split, no other processing.
std::vector<std::string_view> split_words(std::string_view text);

/// Lowercased token cores; tokens that are pure punctuation are dropped.
std::vector<std::string> normalized_tokens(std::string_view text);

std::string to_lower(std::string_view s);

/// Word-per-line lexicon; blank lines and '#' comments are skipped. Entries
/// are lowercased.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Transcripts
// ---------------------------------------------------------------------------

struct Transcript {
    std::string call_id;
    std::string ticker;
    FiscalQuarter fiscal_quarter;
    Date call_date;
    std::string text;
};

struct TextChunk {
    std::string call_id;
    std::size_t chunk_index = 0;
    std::string text;
    std::size_t word_count = 0;
};

enum class DuplicatePolicy { Reject, KeepFirst };

/// JSON key names for the transcript fields.
struct TranscriptSchema {
    std::string call_id = "call_id";
    std::string ticker = "ticker";
    std::string fiscal_quarter = "fiscal_quarter";
    std::string call_date = "call_date";
    std::string text = "text";
};

struct IngestOptions {
    TranscriptSchema schema;
    DuplicatePolicy duplicates = DuplicatePolicy::Reject;
};

/// Reads line-delimited JSON. Blank lines are skipped; record numbers in
/// errors are 1-based line numbers.
std::vector<Transcript> ingest_transcripts(std::istream& in, const IngestOptions& options = {});
std::vector<Transcript> ingest_transcripts_file(const std::filesystem::path& path,
                                                const IngestOptions& options = {});

/// One JSON line per transcript, keys in schema order.
void write_transcripts(std::ostream& out, const std::vector<Transcript>& corpus);

inline constexpr std::size_t kDefaultChunkWords = 2500;

/// Greedy split into consecutive runs of at most `max_words` words, joined
/// by single spaces.
std::vector<TextChunk> chunk(const Transcript& t, std::size_t max_words = kDefaultChunkWords);

// ---------------------------------------------------------------------------
// Identity masking
// ---------------------------------------------------------------------------

struct MaskRules {
    int year_min = 1900;
    int year_max = 2099;
    std::unordered_set<std::string> month_lexicon = default_months();
    /// Entity names; multi-word entries match consecutive tokens.
    std::vector<std::string> entity_lexicon;
    std::string mask_token = "###";

    static std::unordered_set<std::string> default_months();
    void validate() const;
};

/// Replaces the core of every matching token with the mask token.
/// Punctuation around a core and all whitespace are kept byte-for-byte.
std::string mask_identity(std::string_view text, const MaskRules& rules);
TextChunk mask_identity(const TextChunk& c, const MaskRules& rules);

// ---------------------------------------------------------------------------
// Sentiment
// ---------------------------------------------------------------------------

struct SentimentLexicon {
    std::unordered_set<std::string> positive;
    std::unordered_set<std::string> negative;

    static SentimentLexicon from_files(const std::filesystem::path& positive,
                                       const std::filesystem::path& negative);
    void validate() const;
};

/// (P - N) / (P + N) over token counts, 0 when there are no hits.
double lm_sentiment(std::string_view text, const SentimentLexicon& lex);

// ---------------------------------------------------------------------------
// Bigrams
// ---------------------------------------------------------------------------

/// Suffix-rule lemmatizer used for bigram tables.
std::string lemmatize(std::string_view word);

struct BigramCount {
    std::string bigram;
    std::size_t count = 0;
    bool operator==(const BigramCount&) const = default;
};

std::unordered_set<std::string> default_time_words();

/// Most frequent adjacent-token bigrams within each document, excluding
/// pairs where either token (raw or lemmatized) is a stopword or a time
/// word. Ranked by count descending, ties lexicographic.
std::vector<BigramCount> top_bigrams(const std::vector<std::string>& texts, std::size_t k,
                                     const std::unordered_set<std::string>& stopwords,
                                     const std::unordered_set<std::string>& time_words);

void write_bigrams_csv(std::ostream& out, const std::vector<BigramCount>& rows);

}  // namespace expectq
