#include "expectq/corpus.hpp"
#include "expectq/error.hpp"

#include <fmt/format.h>

namespace expectq {

SentimentLexicon SentimentLexicon::from_files(const std::filesystem::path& positive,
                                              const std::filesystem::path& negative) {
    SentimentLexicon lex;
    for (auto& w : read_word_list(positive)) lex.positive.insert(std::move(w));
    for (auto& w : read_word_list(negative)) lex.negative.insert(std::move(w));
    lex.validate();
    return lex;
}

void SentimentLexicon::validate() const {
    if (positive.empty() && negative.empty()) throw Error(Errc::InvalidArgument, "sentiment lexicon is empty");
    for (const auto& w : positive) {
        if (negative.contains(w))
            throw Error(Errc::InvalidArgument, fmt::format("'{}' is in both sentiment lists", w));
    }
}

double lm_sentiment(std::string_view text, const SentimentLexicon& lex) {
    lex.validate();
    long pos = 0;
    long neg = 0;
    for (const auto& tok : normalized_tokens(text)) {
        if (lex.positive.contains(tok)) ++pos;
        else if (lex.negative.contains(tok)) ++neg;
    }
    if (pos + neg == 0) return 0.0;
    return static_cast<double>(pos - neg) / static_cast<double>(pos + neg);
}

}  // namespace expectq
