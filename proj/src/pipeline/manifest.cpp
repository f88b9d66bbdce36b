#include "expectq/pipeline.hpp"

#include "expectq/error.hpp"
#include "expectq/hash.hpp"

#include <fmt/format.h>

#include <fstream>

namespace expectq {

namespace fs = std::filesystem;

Manifest::Manifest(Stage stage, const RunConfig& config) : config_(config), stage_(stage) {
    doc_["tool"] = "expectq";
    doc_["version"] = std::string(kVersion);
    doc_["stage"] = std::string(to_string(stage));
    doc_["seed"] = config.seed;
    doc_["inputs"] = nlohmann::ordered_json::array();
    doc_["parameters"] = nlohmann::ordered_json::object();
    doc_["outputs"] = nlohmann::ordered_json::array();
}

std::string Manifest::display(const fs::path& path) const {
    const auto abs = fs::weakly_canonical(path);
    const auto out = fs::weakly_canonical(config_.output_dir);
    const auto rel = abs.lexically_relative(out);
    if (!rel.empty() && *rel.begin() != "..") return "$OUT/" + rel.generic_string();
    const auto base = fs::weakly_canonical(config_.base_dir.empty() ? fs::path(".") : config_.base_dir);
    const auto from_base = abs.lexically_relative(base);
    if (!from_base.empty()) return from_base.generic_string();
    return abs.generic_string();
}

void Manifest::add_input(std::string_view label, const fs::path& path) {
    doc_["inputs"].push_back({{"label", std::string(label)}, {"path", display(path)}, {"sha256", sha256_file_hex(path)}});
}

void Manifest::add_output(const fs::path& path) { doc_["outputs"].push_back(display(path)); }

void Manifest::set(std::string_view key, nlohmann::ordered_json value) { doc_["parameters"][std::string(key)] = std::move(value); }

fs::path Manifest::write() const {
    nlohmann::ordered_json doc = doc_;
    auto& outputs = doc["outputs"];
    nlohmann::ordered_json hashed = nlohmann::ordered_json::array();
    for (const auto& o : outputs) {
        const auto name = o.get<std::string>();
        fs::path p = name.rfind("$OUT/", 0) == 0 ? config_.output_dir / name.substr(5) : config_.base_dir / name;
        hashed.push_back({{"path", name}, {"sha256", fs::exists(p) ? sha256_file_hex(p) : std::string{}}});
    }
    outputs = std::move(hashed);

    const auto dir = config_.output_dir / "manifests";
    fs::create_directories(dir);
    const auto path = dir / fmt::format("{}.json", to_string(stage_));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, fmt::format("cannot write {}", path.string()));
    out << doc.dump(2) << '\n';
    return path;
}

}  // namespace expectq
