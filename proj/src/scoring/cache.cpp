#include "expectq/scoring.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <ctime>
#include <fstream>

namespace expectq {

ResponseCache::ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.empty() || !std::filesystem::exists(path_)) return;
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw Error(Errc::Io, fmt::format("cannot read cache '{}'", path_.string()));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            entries_.emplace(j.at("key").get<std::string>(), j.at("response").get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::Io, fmt::format("cache '{}' line {}: {}", path_.string(), line_no, e.what()));
        }
    }
}

std::string ResponseCache::make_key(std::string_view model, std::string_view prompt_sha256) {
    return fmt::format("{}:{}", model, prompt_sha256);
}

std::optional<std::string> ResponseCache::find(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

bool ResponseCache::insert(CacheEntry entry) {
    std::lock_guard lock(mu_);
    if (entries_.contains(entry.key)) return false;
    if (!path_.empty()) {
        if (entry.timestamp.empty()) {
            std::time_t now = std::time(nullptr);
            std::tm tm{};
            gmtime_r(&now, &tm);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
            entry.timestamp = buf;
        }
        nlohmann::ordered_json j;
        j["key"] = entry.key;
        j["model"] = entry.model;
        j["prompt_sha256"] = entry.prompt_sha256;
        j["response"] = entry.response;
        j["timestamp"] = entry.timestamp;
        if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
        std::ofstream out(path_, std::ios::binary | std::ios::app);
        if (!out) throw Error(Errc::Io, fmt::format("cannot append to cache '{}'", path_.string()));
        out << j.dump() << '\n';
    }
    entries_.emplace(std::move(entry.key), std::move(entry.response));
    return true;
}

std::size_t ResponseCache::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

}  // namespace expectq
