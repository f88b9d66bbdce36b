#include "expectq/scoring.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>

namespace expectq {

void ProviderConfig::validate() const {
    if (max_concurrency < 1) throw Error(Errc::ConfigError, "max_concurrency must be at least 1");
    if (max_attempts < 1) throw Error(Errc::ConfigError, "max_attempts must be at least 1");
    if (model_name.empty()) throw Error(Errc::ConfigError, "model_name must be set");
    if (backend == Backend::Remote && endpoint.empty())
        throw Error(Errc::ConfigError, "remote backend requires an endpoint");
    if (backend == Backend::Stub && stub_rules.empty())
        throw Error(Errc::ConfigError, "stub backend requires a rule table path");
}

// ---------------------------------------------------------------------------
// Stub
// ---------------------------------------------------------------------------

namespace {

Choice parse_choice_name(std::string_view name) {
    auto n = to_lower(name);
    for (auto& c : n) {
        if (c == ' ' || c == '-') c = '_';
    }
    if (n == "decrease_substantially") return Choice::DecreaseSubstantially;
    if (n == "decrease") return Choice::Decrease;
    if (n == "no_change") return Choice::NoChange;
    if (n == "increase") return Choice::Increase;
    if (n == "increase_substantially") return Choice::IncreaseSubstantially;
    if (n == "no_information") return Choice::NoInformation;
    throw Error(Errc::ConfigError, fmt::format("unknown choice '{}' in stub rules", name));
}

}  // namespace

StubProvider::StubProvider(std::vector<StubRule> rules) : rules_(std::move(rules)) {
    for (auto& r : rules_) r.phrase = to_lower(r.phrase);
}

StubProvider StubProvider::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, fmt::format("cannot open stub rules '{}'", path.string()));
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::ConfigError, fmt::format("stub rules '{}': {}", path.string(), e.what()));
    }
    std::vector<StubRule> rules;
    for (const auto& r : j.at("rules")) {
        rules.push_back({parse_policy(r.at("policy").get<std::string>()), r.at("phrase").get<std::string>(),
                         parse_choice_name(r.at("choice").get<std::string>())});
    }
    return StubProvider(std::move(rules));
}

std::string StubProvider::answer(PolicyKind policy, std::string_view chunk_text) const {
    const auto text = to_lower(chunk_text);
    for (const auto& r : rules_) {
        if (r.policy != policy || r.phrase.empty()) continue;
        if (text.find(r.phrase) == std::string::npos) continue;
        if (r.choice == Choice::NoInformation) return "no information is provided.";
        return fmt::format("{} - The excerpt states \"{}\".", to_string(r.choice), r.phrase);
    }
    return "no information is provided.";
}

std::string StubProvider::complete(const Prompt& prompt) {
    if (prompt.policy == PolicyKind::Investment) return answer(PolicyKind::Investment, prompt.body);
    return fmt::format("1. {}\n2. {}", answer(PolicyKind::Dividend, prompt.body),
                       answer(PolicyKind::Employment, prompt.body));
}

// ---------------------------------------------------------------------------
// Remote
// ---------------------------------------------------------------------------

RemoteProvider::RemoteProvider(ProviderConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
    const auto scheme = config_.endpoint.find("://");
    if (scheme == std::string::npos)
        throw Error(Errc::ConfigError, fmt::format("endpoint '{}' lacks a scheme", config_.endpoint));
    const auto slash = config_.endpoint.find('/', scheme + 3);
    scheme_host_port_ = config_.endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
}

std::string RemoteProvider::request_body(const ProviderConfig& config, const Prompt& prompt) {
    nlohmann::ordered_json j;
    j["model"] = config.model_name;
    j["messages"] = nlohmann::ordered_json::array({{{"role", "user"}, {"content", prompt.text()}}});
    j["temperature"] = config.temperature;
    return j.dump();
}

std::string RemoteProvider::extract_content(std::string_view response_body) {
    try {
        auto j = nlohmann::json::parse(response_body);
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (!content.is_string() || content.get<std::string>().empty())
            throw Error(Errc::ProviderRefusal, "empty message content");
        return content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ProviderRefusal, fmt::format("malformed completion response: {}", e.what()));
    }
}

std::string RemoteProvider::complete(const Prompt& prompt) {
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto res = client.Post(path_, headers, request_body(config_, prompt), "application/json");
    if (!res)
        throw Error(Errc::TransportError,
                    fmt::format("request to {} failed: {}", config_.endpoint, httplib::to_string(res.error())));
    if (res->status == 429 || res->status >= 500)
        throw Error(Errc::TransportError, fmt::format("HTTP {} from {}", res->status, config_.endpoint));
    if (res->status < 200 || res->status >= 300)
        throw Error(Errc::ProviderRefusal,
                    fmt::format("HTTP {} from {}: {}", res->status, config_.endpoint, res->body.substr(0, 200)));
    return extract_content(res->body);
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config) {
    config.validate();
    if (config.backend == ProviderConfig::Backend::Stub)
        return std::make_unique<StubProvider>(StubProvider::from_file(config.stub_rules));
    const char* key = std::getenv(config.api_key_env.c_str());
    return std::make_unique<RemoteProvider>(config, key ? std::string(key) : std::string{});
}

}  // namespace expectq
