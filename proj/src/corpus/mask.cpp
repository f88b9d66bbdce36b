#include "expectq/corpus.hpp"
#include "expectq/error.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

namespace expectq {

std::unordered_set<std::string> MaskRules::default_months() {
    return {"january", "february", "march",   "april",    "may",      "june",
            "july",    "august",   "september", "october", "november", "december",
            "jan",     "feb",      "mar",     "apr",      "jun",      "jul",
            "aug",     "sep",      "sept",    "oct",      "nov",      "dec"};
}

void MaskRules::validate() const {
    if (mask_token.empty()) throw Error(Errc::InvalidArgument, "mask_token must be non-empty");
    if (year_min > year_max) throw Error(Errc::InvalidArgument, "year_min exceeds year_max");
}

namespace {

bool is_year(std::string_view core, int lo, int hi) {
    if (core.size() != 4) return false;
    int v = 0;
    auto [ptr, ec] = std::from_chars(core.data(), core.data() + core.size(), v);
    return ec == std::errc{} && ptr == core.data() + core.size() && v >= lo && v <= hi;
}

// Entity token sequences keyed by their first token, longest first.
using EntityIndex = std::unordered_map<std::string, std::vector<std::vector<std::string>>>;

EntityIndex index_entities(const std::vector<std::string>& lexicon) {
    EntityIndex idx;
    for (const auto& e : lexicon) {
        auto toks = normalized_tokens(e);
        if (toks.empty()) continue;
        idx[toks.front()].push_back(std::move(toks));
    }
    for (auto& [_, seqs] : idx) {
        std::sort(seqs.begin(), seqs.end(), [](const auto& a, const auto& b) {
            return a.size() != b.size() ? a.size() > b.size() : a < b;
        });
    }
    return idx;
}

}  // namespace

std::string mask_identity(std::string_view text, const MaskRules& rules) {
    rules.validate();
    const auto spans = token_spans(text);
    std::vector<std::string> cores(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i)
        cores[i] = to_lower(text.substr(spans[i].core_begin, spans[i].core_end - spans[i].core_begin));

    const auto entities = index_entities(rules.entity_lexicon);
    std::vector<bool> masked(spans.size(), false);
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (cores[i].empty()) continue;
        if (is_year(cores[i], rules.year_min, rules.year_max) || rules.month_lexicon.contains(cores[i])) {
            masked[i] = true;
            continue;
        }
        auto it = entities.find(cores[i]);
        if (it == entities.end()) continue;
        for (const auto& seq : it->second) {
            if (i + seq.size() > spans.size()) continue;
            if (std::equal(seq.begin(), seq.end(), cores.begin() + static_cast<std::ptrdiff_t>(i))) {
                std::fill_n(masked.begin() + static_cast<std::ptrdiff_t>(i), seq.size(), true);
                break;
            }
        }
    }

    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (!masked[i]) continue;
        out.append(text.substr(pos, spans[i].core_begin - pos));
        out.append(rules.mask_token);
        pos = spans[i].core_end;
    }
    out.append(text.substr(pos));
    return out;
}

TextChunk mask_identity(const TextChunk& c, const MaskRules& rules) {
    TextChunk out = c;
    out.text = mask_identity(c.text, rules);
    out.word_count = split_words(out.text).size();
    return out;
}

}  // namespace expectq
