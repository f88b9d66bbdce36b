#include "expectq/pipeline.hpp"

#include "expectq/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <initializer_list>

namespace expectq {

namespace {

using nlohmann::json;

constexpr std::pair<Stage, std::string_view> kStages[] = {
    {Stage::Ingest, "ingest"},   {Stage::Mask, "mask"},         {Stage::Score, "score"},
    {Stage::Panel, "panel"},     {Stage::Regress, "regress"},   {Stage::Events, "events"},
    {Stage::Simulate, "simulate"}, {Stage::VerifyModel, "verify-model"}, {Stage::Report, "report"},
};

void check_keys(const json& j, std::string_view section, std::initializer_list<std::string_view> known) {
    if (!j.is_object()) throw Error(Errc::ConfigError, fmt::format("config section '{}' must be an object", section));
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw Error(Errc::ConfigError, fmt::format("unknown key '{}' in config section '{}'", key, section));
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    if (value.empty()) return {};
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

}  // namespace

std::string_view to_string(Stage s) noexcept {
    for (const auto& [stage, name] : kStages)
        if (stage == s) return name;
    return "?";
}

std::optional<Stage> parse_stage(std::string_view name) noexcept {
    for (const auto& [stage, n] : kStages)
        if (n == name) return stage;
    return std::nullopt;
}

RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    RunConfig c;
    c.base_dir = base_dir;
    check_keys(j, "<root>",
               {"output_dir", "seed", "paths", "provider", "scoring", "mask", "panel", "regress", "events", "simulate",
                "model"});
    try {
        if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
        else c.output_dir = base_dir / "out";
        c.seed = j.value("seed", c.seed);

        if (j.contains("paths")) {
            const auto& p = j["paths"];
            const std::pair<const char*, std::filesystem::path RunConfig::Paths::*> fields[] = {
                {"transcripts", &RunConfig::Paths::transcripts},
                {"fundamentals", &RunConfig::Paths::fundamentals},
                {"scores", &RunConfig::Paths::scores},
                {"events", &RunConfig::Paths::events},
                {"panel", &RunConfig::Paths::panel},
                {"simulated_panel", &RunConfig::Paths::simulated_panel},
                {"daily_returns", &RunConfig::Paths::daily_returns},
                {"monthly_returns", &RunConfig::Paths::monthly_returns},
                {"daily_factors", &RunConfig::Paths::daily_factors},
                {"monthly_factors", &RunConfig::Paths::monthly_factors},
                {"entity_lexicon", &RunConfig::Paths::entity_lexicon},
                {"positive_words", &RunConfig::Paths::positive_words},
                {"negative_words", &RunConfig::Paths::negative_words},
                {"stopwords", &RunConfig::Paths::stopwords},
                {"model_grid", &RunConfig::Paths::model_grid},
            };
            if (!p.is_object()) throw Error(Errc::ConfigError, "config section 'paths' must be an object");
            for (const auto& [key, value] : p.items()) {
                auto it = std::find_if(std::begin(fields), std::end(fields), [&](const auto& f) { return key == f.first; });
                if (it == std::end(fields)) throw Error(Errc::ConfigError, fmt::format("unknown path '{}'", key));
                c.paths.*(it->second) = resolve(base_dir, value.get<std::string>());
            }
        }

        if (j.contains("provider")) {
            const auto& p = j["provider"];
            check_keys(p, "provider",
                       {"backend", "endpoint", "model", "temperature", "max_concurrency", "max_attempts", "backoff_ms",
                        "timeout_s", "cache", "stub_rules", "api_key_env"});
            if (p.contains("backend")) {
                const auto b = p["backend"].get<std::string>();
                if (b == "stub") c.provider.backend = ProviderConfig::Backend::Stub;
                else if (b == "remote") c.provider.backend = ProviderConfig::Backend::Remote;
                else throw Error(Errc::ConfigError, fmt::format("unknown provider backend '{}'", b));
            }
            c.provider.endpoint = p.value("endpoint", c.provider.endpoint);
            c.provider.model_name = p.value("model", c.provider.model_name);
            c.provider.temperature = p.value("temperature", c.provider.temperature);
            c.provider.max_concurrency = p.value("max_concurrency", c.provider.max_concurrency);
            c.provider.max_attempts = p.value("max_attempts", c.provider.max_attempts);
            if (p.contains("backoff_ms")) {
                c.provider.backoff.clear();
                for (const auto& ms : p["backoff_ms"]) c.provider.backoff.emplace_back(ms.get<long>());
            }
            if (p.contains("timeout_s")) c.provider.timeout = std::chrono::seconds(p["timeout_s"].get<long>());
            if (p.contains("cache")) c.provider.cache_path = resolve(base_dir, p["cache"].get<std::string>());
            if (p.contains("stub_rules")) c.provider.stub_rules = resolve(base_dir, p["stub_rules"].get<std::string>());
            c.provider.api_key_env = p.value("api_key_env", c.provider.api_key_env);
        }

        if (j.contains("scoring")) {
            const auto& s = j["scoring"];
            check_keys(s, "scoring", {"policies", "max_words", "mask", "on_parse_error", "bigram_top"});
            if (s.contains("policies")) {
                c.policies.clear();
                for (const auto& p : s["policies"]) c.policies.push_back(parse_policy(p.get<std::string>()));
            }
            c.max_words = s.value("max_words", c.max_words);
            c.mask_before_scoring = s.value("mask", c.mask_before_scoring);
            if (s.contains("on_parse_error")) {
                const auto v = s["on_parse_error"].get<std::string>();
                if (v == "no_information") c.on_parse_error = ParseErrorPolicy::TreatAsNoInformation;
                else if (v == "exclude") c.on_parse_error = ParseErrorPolicy::Exclude;
                else throw Error(Errc::ConfigError, fmt::format("unknown on_parse_error '{}'", v));
            }
            c.bigram_top = s.value("bigram_top", c.bigram_top);
        }

        if (j.contains("mask")) {
            const auto& m = j["mask"];
            check_keys(m, "mask", {"year_min", "year_max", "mask_token"});
            c.mask_year_min = m.value("year_min", c.mask_year_min);
            c.mask_year_max = m.value("year_max", c.mask_year_max);
            c.mask_token = m.value("mask_token", c.mask_token);
        }

        if (j.contains("panel")) {
            const auto& p = j["panel"];
            check_keys(p, "panel",
                       {"source", "winsorize", "winsor_tail", "winsor_mode", "winsor_columns", "lead_columns",
                        "lead_min", "lead_max"});
            if (p.contains("source")) {
                const auto v = p["source"].get<std::string>();
                if (v == "observed") c.panel_source = RunConfig::PanelSource::Observed;
                else if (v == "simulated") c.panel_source = RunConfig::PanelSource::Simulated;
                else throw Error(Errc::ConfigError, fmt::format("unknown panel source '{}'", v));
            }
            c.winsorize = p.value("winsorize", c.winsorize);
            c.winsor_tail = p.value("winsor_tail", c.winsor_tail);
            if (p.contains("winsor_mode")) {
                const auto v = p["winsor_mode"].get<std::string>();
                if (v == "pooled") c.winsor_mode = WinsorMode::Pooled;
                else if (v == "per_period") c.winsor_mode = WinsorMode::PerPeriod;
                else throw Error(Errc::ConfigError, fmt::format("unknown winsor_mode '{}'", v));
            }
            c.winsor_columns = p.value("winsor_columns", c.winsor_columns);
            c.assemble.lead_columns = p.value("lead_columns", c.assemble.lead_columns);
            c.assemble.lead_min = p.value("lead_min", c.assemble.lead_min);
            c.assemble.lead_max = p.value("lead_max", c.assemble.lead_max);
        }

        if (j.contains("regress")) {
            const auto& r = j["regress"];
            check_keys(r, "regress", {"specs"});
            for (const auto& s : r.value("specs", json::array())) c.spec_files.push_back(resolve(base_dir, s.get<std::string>()));
        }

        if (j.contains("events")) {
            const auto& e = j["events"];
            check_keys(e, "events", {"beta_window", "beta_min_obs", "alpha_months", "alpha_min_months", "car_horizons"});
            c.events.betas.window = e.value("beta_window", c.events.betas.window);
            c.events.betas.min_obs = e.value("beta_min_obs", c.events.betas.min_obs);
            c.events.quarterly.estimation_months = e.value("alpha_months", c.events.quarterly.estimation_months);
            c.events.quarterly.min_months = e.value("alpha_min_months", c.events.quarterly.min_months);
            c.events.car_horizons = e.value("car_horizons", c.events.car_horizons);
        }

        if (j.contains("simulate")) c.simulation = simulation_from_json(j["simulate"]);

        if (j.contains("model")) {
            const auto& m = j["model"];
            check_keys(m, "model", {"grid"});
            if (m.contains("grid")) c.paths.model_grid = resolve(base_dir, m["grid"].get<std::string>());
        }
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("bad config value: {}", e.what()));
    }
    if (!(c.winsor_tail > 0.0 && c.winsor_tail < 0.5))
        throw Error(Errc::ConfigError, fmt::format("winsor_tail {} outside (0, 0.5)", c.winsor_tail));
    if (c.max_words < 1) throw Error(Errc::ConfigError, "max_words must be >= 1");
    if (c.policies.empty()) throw Error(Errc::ConfigError, "no scoring policies configured");
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, fmt::format("cannot open config {}", path.string()));
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("{}: {}", path.string(), e.what()));
    }
    auto base = path.parent_path();
    if (base.empty()) base = ".";
    return config_from_json(j, base);
}

void apply_overrides(RunConfig& c, const Overrides& o) {
    if (o.seed) c.seed = *o.seed;
    if (o.policy) c.policies = {*o.policy};
    if (o.provider) c.provider.backend = *o.provider;
    if (o.out) c.output_dir = *o.out;
}

}  // namespace expectq
