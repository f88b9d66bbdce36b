#pragma once

#include "expectq/corpus.hpp"
#include "expectq/error.hpp"

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace expectq {

enum class PolicyKind { Investment, Dividend, Employment };

std::string_view to_string(PolicyKind p) noexcept;
PolicyKind parse_policy(std::string_view name);

enum class Choice { DecreaseSubstantially, Decrease, NoChange, Increase, IncreaseSubstantially, NoInformation };

std::string_view to_string(Choice c) noexcept;
/// -1, -0.5, 0, 0.5, 1; NoInformation maps to 0.
double score_of(Choice c) noexcept;

// ---------------------------------------------------------------------------
// Prompts
// ---------------------------------------------------------------------------

struct Prompt {
    PolicyKind policy = PolicyKind::Investment;
    std::string header;
    std::string body;

    /// Full text sent to the model: header, blank line, chunk.
    std::string text() const;
};

/// Verbatim instruction block. Dividend and Employment share the
/// two-question block; the answer position selects the policy.
std::string_view prompt_header(PolicyKind policy) noexcept;

/// 1-based position of the policy's question in its prompt.
int question_number(PolicyKind policy) noexcept;

Prompt build_prompt(PolicyKind policy, const TextChunk& chunk);

// ---------------------------------------------------------------------------
// Responses
// ---------------------------------------------------------------------------

struct ChunkScore {
    std::string call_id;
    std::size_t chunk_index = 0;
    PolicyKind policy = PolicyKind::Investment;
    Choice choice = Choice::NoInformation;
    std::string explanation;
    double score = 0.0;
};

/// Extracts the "choice - explanation" answer for `policy`. Throws
/// ParseError when no choice phrase is present.
ChunkScore parse_response(std::string_view raw, PolicyKind policy);

enum class ParseErrorPolicy { TreatAsNoInformation, Exclude };

struct CallScore {
    std::string call_id;
    PolicyKind policy = PolicyKind::Investment;
    double mean_score = 0.0;    // NaN when no chunk could be scored
    double maxabs_score = 0.0;  // NaN when no chunk could be scored
    std::size_t n_chunks = 0;
    std::size_t n_errors = 0;
};

double aggregate_mean(std::span<const double> scores);
double aggregate_mean(std::span<const ChunkScore> scores);

/// Score with the largest magnitude; 0 when that magnitude is reached by
/// scores of both signs.
double aggregate_maxabs(std::span<const double> scores);
double aggregate_maxabs(std::span<const ChunkScore> scores);

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

struct ProviderConfig {
    enum class Backend { Remote, Stub };

    Backend backend = Backend::Stub;
    std::string endpoint;  // remote only, e.g. https://api.example.com/v1/chat/completions
    std::string model_name = "gpt-3.5-turbo";
    double temperature = 0.0;
    std::size_t max_concurrency = 4;
    std::size_t max_attempts = 3;
    std::vector<std::chrono::milliseconds> backoff{std::chrono::milliseconds(500), std::chrono::milliseconds(2000)};
    std::chrono::seconds timeout{60};
    std::filesystem::path cache_path;
    std::filesystem::path stub_rules;
    /// Environment variable holding the bearer credential.
    std::string api_key_env = "EXPECTQ_API_KEY";

    void validate() const;
};

class Provider {
public:
    virtual ~Provider() = default;
    /// Throws Error{TransportError} for retryable failures and
    /// Error{ProviderRefusal} for final ones.
    virtual std::string complete(const Prompt& prompt) = 0;
};

struct StubRule {
    PolicyKind policy;
    std::string phrase;  // lowercase
    Choice choice;
};

/// Offline backend: the first rule (in file order) whose phrase occurs in
/// the chunk decides the answer.
class StubProvider final : public Provider {
public:
    explicit StubProvider(std::vector<StubRule> rules);
    static StubProvider from_file(const std::filesystem::path& path);

    std::string complete(const Prompt& prompt) override;
    /// Answer line for one question, without numbering.
    std::string answer(PolicyKind policy, std::string_view chunk_text) const;

    const std::vector<StubRule>& rules() const noexcept { return rules_; }

private:
    std::vector<StubRule> rules_;
};

/// Chat-completion client over HTTP(S).
class RemoteProvider final : public Provider {
public:
    RemoteProvider(ProviderConfig config, std::string api_key);
    std::string complete(const Prompt& prompt) override;

    static std::string request_body(const ProviderConfig& config, const Prompt& prompt);
    /// Content of the first choice's message; ProviderRefusal when absent.
    static std::string extract_content(std::string_view response_body);

private:
    ProviderConfig config_;
    std::string api_key_;
    std::string scheme_host_port_;
    std::string path_;
};

std::unique_ptr<Provider> make_provider(const ProviderConfig& config);

// ---------------------------------------------------------------------------
// Response cache
// ---------------------------------------------------------------------------

struct CacheEntry {
    std::string key;
    std::string model;
    std::string prompt_sha256;
    std::string response;
    std::string timestamp;
};

/// Append-only line-delimited JSON store keyed by (model, prompt hash).
/// Empty path keeps the cache in memory only.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path path = {});

    static std::string make_key(std::string_view model, std::string_view prompt_sha256);

    std::optional<std::string> find(const std::string& key) const;
    /// Appends unless the key is already stored; returns whether it appended.
    bool insert(CacheEntry entry);
    std::size_t size() const;

private:
    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, std::string> entries_;
};

// ---------------------------------------------------------------------------
// Query engine
// ---------------------------------------------------------------------------

struct QueryOutcome {
    std::string prompt_sha256;
    std::optional<std::string> response;
    std::optional<Errc> error;
    std::string error_message;
    bool cache_hit = false;
    std::size_t attempts = 0;
};

/// Cache lookup, then provider calls with retry/backoff. `query_all` keeps at
/// most `max_concurrency` provider calls in flight.
class QueryEngine {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    QueryEngine(ProviderConfig config, std::unique_ptr<Provider> provider, ResponseCache& cache);

    QueryOutcome query(const Prompt& prompt);
    std::vector<QueryOutcome> query_all(std::span<const Prompt> prompts);

    void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }
    std::size_t provider_calls() const noexcept { return provider_calls_.load(); }
    std::size_t peak_in_flight() const noexcept { return peak_in_flight_.load(); }
    const ProviderConfig& config() const noexcept { return config_; }

private:
    ProviderConfig config_;
    std::unique_ptr<Provider> provider_;
    ResponseCache& cache_;
    Sleeper sleeper_;
    std::atomic<std::size_t> provider_calls_{0};
    std::atomic<std::size_t> in_flight_{0};
    std::atomic<std::size_t> peak_in_flight_{0};
};

// ---------------------------------------------------------------------------
// Batch driver
// ---------------------------------------------------------------------------

struct ScoreOptions {
    std::size_t max_words = kDefaultChunkWords;
    std::optional<MaskRules> mask;
    ParseErrorPolicy on_parse_error = ParseErrorPolicy::TreatAsNoInformation;
};

struct ChunkRecord {
    ChunkScore score;
    std::string prompt_sha256;
    bool cache_hit = false;
    bool included = false;  // contributed to the call aggregate
    std::optional<Errc> error;
    std::string error_message;
};

struct ScoreRun {
    std::vector<CallScore> calls;     // corpus order x policy order
    std::vector<ChunkRecord> chunks;
};

ScoreRun score_corpus(const std::vector<Transcript>& corpus, std::span<const PolicyKind> policies,
                      QueryEngine& engine, const ScoreOptions& options = {});

void write_call_scores_csv(std::ostream& out, const std::vector<CallScore>& rows);
std::vector<CallScore> read_call_scores_csv(std::istream& in);
void write_chunk_scores_csv(std::ostream& out, const std::vector<ChunkRecord>& rows);

/// Pearson correlation of mean scores over (call_id, policy) pairs present
/// in both tables. NaN when fewer than two pairs or zero variance.
double score_correlation(const std::vector<CallScore>& a, const std::vector<CallScore>& b);

}  // namespace expectq
