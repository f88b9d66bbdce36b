#pragma once

// Loaders for tests/fixtures/scoring.

#include "expectq/csv.hpp"
#include "expectq/scoring.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace fixture {

inline std::filesystem::path scoring_dir() { return std::filesystem::path(EXPECTQ_FIXTURE_DIR) / "scoring"; }

/// Chunk size the fixture corpus was built for.
inline constexpr std::size_t kFixtureMaxWords = 40;

struct LabelledResponse {
    expectq::PolicyKind policy;
    std::string response;
    std::string label;  // choice name or PARSE_ERROR
};

inline std::vector<LabelledResponse> labelled_responses() {
    std::ifstream in(scoring_dir() / "responses.jsonl");
    std::vector<LabelledResponse> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        out.push_back({expectq::parse_policy(j.at("policy").get<std::string>()), j.at("response").get<std::string>(),
                       j.at("label").get<std::string>()});
    }
    return out;
}

/// Choice names as written in the label files.
inline expectq::Choice choice_from_label(std::string label) {
    label = expectq::to_lower(label);
    using expectq::Choice;
    if (label == "increase substantially") return Choice::IncreaseSubstantially;
    if (label == "increase") return Choice::Increase;
    if (label == "no change") return Choice::NoChange;
    if (label == "decrease") return Choice::Decrease;
    if (label == "decrease substantially") return Choice::DecreaseSubstantially;
    if (label == "no information" || label == "no information is provided") return Choice::NoInformation;
    throw std::runtime_error("unknown label " + label);
}

using LabelKey = std::tuple<std::string, expectq::PolicyKind, std::size_t>;

inline std::map<LabelKey, expectq::Choice> chunk_labels() {
    const auto t = expectq::read_csv_file(scoring_dir() / "labels.csv");
    const auto c_id = t.require_column("call_id");
    const auto c_pol = t.require_column("policy");
    const auto c_idx = t.require_column("chunk_index");
    const auto c_choice = t.require_column("choice");
    std::map<LabelKey, expectq::Choice> out;
    for (const auto& r : t.rows)
        out[{r[c_id], expectq::parse_policy(r[c_pol]), std::stoul(r[c_idx])}] = choice_from_label(r[c_choice]);
    return out;
}

struct Aggregate {
    std::size_t n_chunks;
    long mean_num, mean_den, maxabs_num, maxabs_den;
};

inline std::map<std::pair<std::string, expectq::PolicyKind>, Aggregate> aggregates() {
    const auto t = expectq::read_csv_file(scoring_dir() / "aggregates.csv");
    std::map<std::pair<std::string, expectq::PolicyKind>, Aggregate> out;
    for (const auto& r : t.rows) {
        out[{r[t.require_column("call_id")], expectq::parse_policy(r[t.require_column("policy")])}] =
            Aggregate{std::stoul(r[t.require_column("n_chunks")]), std::stol(r[t.require_column("mean_num")]),
                      std::stol(r[t.require_column("mean_den")]), std::stol(r[t.require_column("maxabs_num")]),
                      std::stol(r[t.require_column("maxabs_den")])};
    }
    return out;
}

}  // namespace fixture
