#include "expectq/corpus.hpp"
#include "expectq/csv.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <ostream>

namespace expectq {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// Undo consonant doubling ("plann" -> "plan") or restore a silent e
// ("reduc" -> "reduce") after an -ing/-ed strip.
std::string restore_stem(std::string stem) {
    const auto n = stem.size();
    if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
        stem[n - 1] != 's' && stem[n - 1] != 'z') {
        stem.pop_back();
        return stem;
    }
    constexpr std::array<char, 4> kSilentE{'c', 'v', 'u', 'z'};
    if (std::find(kSilentE.begin(), kSilentE.end(), stem.back()) != kSilentE.end()) stem.push_back('e');
    return stem;
}

}  // namespace

std::string lemmatize(std::string_view word) {
    std::string w(word);
    if (w.size() <= 3 || !std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isalpha(c); }))
        return w;
    if (ends_with(w, "ies") && w.size() >= 5) return w.substr(0, w.size() - 3) + "y";
    if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
    if (ends_with(w, "ches") || ends_with(w, "shes") || ends_with(w, "xes") || ends_with(w, "zes"))
        return w.substr(0, w.size() - 2);
    if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
    if (ends_with(w, "s")) return w.substr(0, w.size() - 1);
    if (ends_with(w, "ing") && w.size() >= 6) return restore_stem(w.substr(0, w.size() - 3));
    if (ends_with(w, "ed") && w.size() >= 5) return restore_stem(w.substr(0, w.size() - 2));
    return w;
}

std::unordered_set<std::string> default_time_words() {
    return {"year",   "years",    "quarter", "quarters", "month",   "months", "week",   "weeks",
            "day",    "days",     "annual",  "annually", "quarterly", "monthly", "today", "yesterday",
            "fiscal", "q1",       "q2",      "q3",       "q4",      "ytd",    "period", "periods"};
}

std::vector<BigramCount> top_bigrams(const std::vector<std::string>& texts, std::size_t k,
                                     const std::unordered_set<std::string>& stopwords,
                                     const std::unordered_set<std::string>& time_words) {
    if (k < 1) return {};
    auto excluded = [&](const std::string& raw, const std::string& lemma) {
        return stopwords.contains(raw) || stopwords.contains(lemma) || time_words.contains(raw) ||
               time_words.contains(lemma);
    };

    std::map<std::string, std::size_t> counts;
    for (const auto& text : texts) {
        const auto raw = normalized_tokens(text);
        std::vector<std::string> lemmas;
        std::vector<bool> drop;
        lemmas.reserve(raw.size());
        for (const auto& r : raw) {
            lemmas.push_back(lemmatize(r));
            drop.push_back(excluded(r, lemmas.back()));
        }
        for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
            if (drop[i] || drop[i + 1]) continue;
            ++counts[lemmas[i] + " " + lemmas[i + 1]];
        }
    }

    std::vector<BigramCount> ranked;
    ranked.reserve(counts.size());
    for (auto& [bigram, n] : counts) ranked.push_back({bigram, n});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const BigramCount& a, const BigramCount& b) { return a.count > b.count; });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

void write_bigrams_csv(std::ostream& out, const std::vector<BigramCount>& rows) {
    out << "bigram,count\n";
    for (const auto& r : rows) {
        const std::string fields[] = {r.bigram, std::to_string(r.count)};
        write_csv_row(out, fields);
    }
}

}  // namespace expectq
