#pragma once

#include "expectq/econometrics.hpp"
#include "expectq/events.hpp"
#include "expectq/fundamentals.hpp"
#include "expectq/qmodel.hpp"
#include "expectq/scoring.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace expectq {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Stage { Ingest, Mask, Score, Panel, Regress, Events, Simulate, VerifyModel, Report };

std::string_view to_string(Stage s) noexcept;
std::optional<Stage> parse_stage(std::string_view name) noexcept;

struct RunConfig {
    /// Relative paths in the config file resolve against this directory.
    std::filesystem::path base_dir;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 1;

    struct Paths {
        std::filesystem::path transcripts;
        std::filesystem::path fundamentals;
        std::filesystem::path scores;  // defaults to <out>/call_scores.csv
        std::filesystem::path events;  // defaults to <out>/events.csv when present
        std::filesystem::path panel;   // regress input; defaults to <out>/panel.csv
        std::filesystem::path simulated_panel;  // defaults to <out>/simulated_panel.csv
        std::filesystem::path daily_returns;
        std::filesystem::path monthly_returns;
        std::filesystem::path daily_factors;
        std::filesystem::path monthly_factors;
        std::filesystem::path entity_lexicon;
        std::filesystem::path positive_words;
        std::filesystem::path negative_words;
        std::filesystem::path stopwords;
        std::filesystem::path model_grid;
    } paths;

    ProviderConfig provider;

    std::vector<PolicyKind> policies{PolicyKind::Investment};
    std::size_t max_words = kDefaultChunkWords;
    bool mask_before_scoring = false;
    ParseErrorPolicy on_parse_error = ParseErrorPolicy::TreatAsNoInformation;
    std::size_t bigram_top = 25;

    int mask_year_min = 1900;
    int mask_year_max = 2099;
    std::string mask_token = "###";

    enum class PanelSource { Observed, Simulated };
    PanelSource panel_source = PanelSource::Observed;
    bool winsorize = true;
    double winsor_tail = 0.01;
    WinsorMode winsor_mode = WinsorMode::Pooled;
    std::vector<std::string> winsor_columns;  // empty: every derived ratio column present
    AssembleOptions assemble;

    std::vector<std::filesystem::path> spec_files;

    EventOptions events;
    SimulationConfig simulation;
};

/// Parses a config object; relative paths resolve against `base_dir`.
/// Unknown keys raise ConfigError.
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<PolicyKind> policy;
    std::optional<ProviderConfig::Backend> provider;
    std::optional<std::filesystem::path> out;
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

/// Records hashed inputs, parameters and outputs of one stage. Written to
/// <out>/manifests/<stage>.json with no timestamps or credentials.
class Manifest {
public:
    Manifest(Stage stage, const RunConfig& config);

    void add_input(std::string_view label, const std::filesystem::path& path);
    void add_output(const std::filesystem::path& path);
    void set(std::string_view key, nlohmann::ordered_json value);
    std::filesystem::path write() const;

    const nlohmann::ordered_json& json() const noexcept { return doc_; }

private:
    std::string display(const std::filesystem::path& path) const;

    const RunConfig& config_;
    Stage stage_;
    nlohmann::ordered_json doc_;
};

struct StageResult {
    int exit_code = 0;
    std::vector<std::filesystem::path> outputs;
    std::string summary;
};

/// Runs one stage. Throws Error on failure; ConfigError for missing or
/// unusable configuration.
StageResult run_stage(Stage stage, const RunConfig& config);

/// Builds the call-level panel (scores, sentiment, events) keyed by ticker
/// and fiscal quarter.
Panel build_call_panel(const std::vector<Transcript>& corpus, const std::vector<CallScore>& scores);

/// Writes `<out>/planted_comparison.json` style record comparing estimates
/// with a planted truth.
struct PlantedComparison {
    std::string label;
    double planted = 0.0;
    double estimated = 0.0;
    double tolerance = 0.0;  // absolute
    bool within() const noexcept;
};

std::vector<PlantedComparison> compare_with_truth(const ResultTable& table, const PlantedTruth& truth);

}  // namespace expectq
