// expectq: batch pipeline driver.
//
//   expectq <stage> --config run.json [--seed N] [--policy P] [--provider stub|remote] [--out DIR]

#include "expectq/error.hpp"
#include "expectq/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <iostream>

namespace {

int fail(std::string_view stage, const std::string& kind, const std::string& message) {
    nlohmann::ordered_json j;
    j["stage"] = std::string(stage);
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
    return kind == "ConfigError" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace expectq;

    CLI::App app{"Expected-policy scoring and panel analysis pipeline"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string policy;
    std::string provider;
    std::string out;

    const char* stages[] = {"ingest", "mask", "score", "panel", "regress", "events", "simulate", "verify-model", "report"};
    const char* help[] = {
        "normalize transcripts and compute dictionary sentiment",
        "mask years, months and listed entities",
        "score transcript chunks through the configured provider",
        "build the firm-quarter panel",
        "estimate the regression specs",
        "compute CARs, quarterly alphas, earnings surprise and forecast revisions",
        "generate a synthetic panel with planted coefficients",
        "check the model propositions on a parameter grid",
        "render the result tables",
    };
    for (std::size_t i = 0; i < std::size(stages); ++i) {
        auto* sub = app.add_subcommand(stages[i], help[i]);
        sub->add_option("--config", config_path, "run configuration (JSON)");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--policy", policy, "investment|dividend|employment");
        sub->add_option("--provider", provider, "remote|stub");
        sub->add_option("--out", out, "output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const auto* sub = app.get_subcommands().front();
    const auto name = sub->get_name();
    const auto stage = *parse_stage(name);

    try {
        RunConfig config;
        if (!config_path.empty()) {
            config = load_config(config_path);
        } else {
            if (stage != Stage::Simulate && stage != Stage::VerifyModel)
                throw Error(Errc::ConfigError, fmt::format("stage '{}' requires --config", name));
            config.base_dir = ".";
            config.output_dir = "out";
        }
        Overrides o;
        o.seed = seed;
        if (!policy.empty()) o.policy = parse_policy(policy);
        if (provider == "stub") o.provider = ProviderConfig::Backend::Stub;
        else if (provider == "remote") o.provider = ProviderConfig::Backend::Remote;
        else if (!provider.empty()) throw Error(Errc::ConfigError, fmt::format("unknown provider '{}'", provider));
        if (!out.empty()) o.out = out;
        apply_overrides(config, o);

        const auto result = run_stage(stage, config);
        std::cerr << fmt::format("[{}] {}\n", name, result.summary);
        return result.exit_code;
    } catch (const Error& e) {
        return fail(name, std::string(to_string(e.code())), e.what());
    } catch (const std::exception& e) {
        return fail(name, "InternalError", e.what());
    }
}
