#include "expectq/scoring.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>

namespace expectq {

namespace {

struct Phrase {
    std::string_view text;
    Choice choice;
};

constexpr std::array<Phrase, 19> kPhrases{{
    {"no information is provided", Choice::NoInformation},
    {"no information provided", Choice::NoInformation},
    {"no relevant information", Choice::NoInformation},
    {"no information", Choice::NoInformation},
    {"increase substantially", Choice::IncreaseSubstantially},
    {"substantially increase", Choice::IncreaseSubstantially},
    {"substantial increase", Choice::IncreaseSubstantially},
    {"increase significantly", Choice::IncreaseSubstantially},
    {"significantly increase", Choice::IncreaseSubstantially},
    {"decrease substantially", Choice::DecreaseSubstantially},
    {"substantially decrease", Choice::DecreaseSubstantially},
    {"substantial decrease", Choice::DecreaseSubstantially},
    {"decrease significantly", Choice::DecreaseSubstantially},
    {"significantly decrease", Choice::DecreaseSubstantially},
    {"no change", Choice::NoChange},
    {"no changes", Choice::NoChange},
    {"unchanged", Choice::NoChange},
    {"increase", Choice::Increase},
    {"decrease", Choice::Decrease},
}};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n\"'");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Lowercase, non-alphanumerics folded to single spaces.
std::string normalize(std::string_view s) {
    std::string out;
    bool space = true;
    for (unsigned char c : s) {
        if (std::isalnum(c)) {
            out.push_back(static_cast<char>(std::tolower(c)));
            space = false;
        } else if (!space) {
            out.push_back(' ');
            space = true;
        }
    }
    if (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::optional<Choice> find_choice(std::string_view raw) {
    const auto s = normalize(raw);
    std::optional<Choice> best;
    std::size_t best_pos = std::string::npos;
    std::size_t best_len = 0;
    for (const auto& p : kPhrases) {
        std::size_t pos = 0;
        while ((pos = s.find(p.text, pos)) != std::string::npos) {
            const auto end = pos + p.text.size();
            const bool bounded = (pos == 0 || s[pos - 1] == ' ') && (end == s.size() || s[end] == ' ');
            if (bounded) {
                if (pos < best_pos || (pos == best_pos && p.text.size() > best_len)) {
                    best = p.choice;
                    best_pos = pos;
                    best_len = p.text.size();
                }
                break;
            }
            ++pos;
        }
    }
    return best;
}

struct Marker {
    int number;
    std::size_t begin;  // position of the digit
    std::size_t end;    // first byte after "1." / "2)"
};

std::vector<Marker> find_markers(std::string_view raw, bool line_start_only) {
    std::vector<Marker> out;
    for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
        if ((raw[i] != '1' && raw[i] != '2') || (raw[i + 1] != '.' && raw[i + 1] != ')')) continue;
        if (i + 2 < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i + 2]))) continue;
        std::size_t j = i;
        while (j > 0 && (raw[j - 1] == ' ' || raw[j - 1] == '\t')) --j;
        const bool at_line_start = j == 0 || raw[j - 1] == '\n';
        const bool after_space = i == 0 || std::isspace(static_cast<unsigned char>(raw[i - 1]));
        if (line_start_only ? !at_line_start : !after_space) continue;
        out.push_back({raw[i] - '0', i, i + 2});
    }
    return out;
}

// Answer text for question `number`; nullopt when the response has no
// answer at that position.
std::optional<std::string_view> select_answer(std::string_view raw, int number) {
    auto has = [&](const std::vector<Marker>& ms) {
        return std::any_of(ms.begin(), ms.end(), [&](const Marker& m) { return m.number == number; });
    };
    auto markers = find_markers(raw, true);
    if (markers.empty() || !has(markers)) {
        auto inline_markers = find_markers(raw, false);
        if (markers.empty() || has(inline_markers)) markers = std::move(inline_markers);
    }
    if (markers.empty()) {
        if (number == 1) return raw;
        return std::nullopt;
    }
    for (std::size_t m = 0; m < markers.size(); ++m) {
        if (markers[m].number != number) continue;
        const auto stop = m + 1 < markers.size() ? markers[m + 1].begin : raw.size();
        return raw.substr(markers[m].end, stop - markers[m].end);
    }
    return std::nullopt;
}

}  // namespace

ChunkScore parse_response(std::string_view raw, PolicyKind policy) {
    ChunkScore out;
    out.policy = policy;
    if (trim(raw).empty()) throw Error(Errc::ParseError, "empty response");

    auto answer = select_answer(raw, question_number(policy));
    if (!answer) {
        out.choice = Choice::NoInformation;
        out.score = 0.0;
        return out;
    }
    const auto segment = trim(*answer);

    std::string_view choice_part = segment;
    std::string_view explanation;
    for (std::string_view sep : {" - ", " – ", " — "}) {
        if (auto p = segment.find(sep); p != std::string_view::npos) {
            choice_part = segment.substr(0, p);
            explanation = trim(segment.substr(p + sep.size()));
            break;
        }
    }

    auto choice = find_choice(choice_part);
    if (!choice)
        throw Error(Errc::ParseError, fmt::format("no choice phrase in response '{}'", segment.substr(0, 120)));
    out.choice = *choice;
    out.score = score_of(*choice);
    out.explanation = std::string(explanation);
    if (out.explanation.empty() && out.choice != Choice::NoInformation) out.explanation = std::string(segment);
    return out;
}

}  // namespace expectq
