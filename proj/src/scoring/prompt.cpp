#include "expectq/scoring.hpp"

#include <fmt/format.h>

namespace expectq {

namespace {

// Single-question block; the typographic quotes are part of the text.
constexpr std::string_view kInvestmentHeader =
    "The following text is an excerpt from a company's earnings call transcripts. "
    "You are a finance expert. Based on this text only, please answer the following question. "
    "How does the firm plan to change its capital spending over the next year? "
    "There are five choices: Increase substantially, increase, no change, decrease, and decrease substantially. "
    "Please select one of the above five choices for each question and provide a one-sentence explanation "
    "of your choice for each question. "
    "The format for the answer to each question should be “choice - explanation.” "
    "If no relevant information is provided related to the question, answer “no information is provided.”";

constexpr std::string_view kDividendEmploymentHeader =
    "The following text is an excerpt from a company's earnings call transcripts. "
    "You are a finance expert. Based on this text only, please answer the following questions. "
    "1. How does the firm plan to change its dividend payment over the next year? "
    "2. How does the firm plan to change its number of employees over the next year? "
    "There are five choices: Increase substantially, increase, no change, decrease, and decrease substantially. "
    "Please select one of the above five choices for each question and provide a one-sentence explanation "
    "of your choice for each question. "
    "The format for the answer to each question should be \"choice - explanation.\" "
    "If no relevant information is provided related to the question, answer \"no information is provided. "
    "Please answer each question independently.\"";

}  // namespace

std::string_view to_string(PolicyKind p) noexcept {
    switch (p) {
        case PolicyKind::Investment: return "investment";
        case PolicyKind::Dividend: return "dividend";
        case PolicyKind::Employment: return "employment";
    }
    return "investment";
}

PolicyKind parse_policy(std::string_view name) {
    const auto lower = to_lower(name);
    if (lower == "investment") return PolicyKind::Investment;
    if (lower == "dividend") return PolicyKind::Dividend;
    if (lower == "employment") return PolicyKind::Employment;
    throw Error(Errc::InvalidArgument, fmt::format("unknown policy '{}'", name));
}

std::string_view to_string(Choice c) noexcept {
    switch (c) {
        case Choice::DecreaseSubstantially: return "Decrease substantially";
        case Choice::Decrease: return "Decrease";
        case Choice::NoChange: return "No change";
        case Choice::Increase: return "Increase";
        case Choice::IncreaseSubstantially: return "Increase substantially";
        case Choice::NoInformation: return "No information is provided";
    }
    return "No information is provided";
}

double score_of(Choice c) noexcept {
    switch (c) {
        case Choice::DecreaseSubstantially: return -1.0;
        case Choice::Decrease: return -0.5;
        case Choice::NoChange: return 0.0;
        case Choice::Increase: return 0.5;
        case Choice::IncreaseSubstantially: return 1.0;
        case Choice::NoInformation: return 0.0;
    }
    return 0.0;
}

std::string_view prompt_header(PolicyKind policy) noexcept {
    return policy == PolicyKind::Investment ? kInvestmentHeader : kDividendEmploymentHeader;
}

int question_number(PolicyKind policy) noexcept { return policy == PolicyKind::Employment ? 2 : 1; }

std::string Prompt::text() const { return header + "\n\n" + body; }

Prompt build_prompt(PolicyKind policy, const TextChunk& chunk) {
    if (split_words(chunk.text).empty())
        throw Error(Errc::InvalidArgument, fmt::format("chunk {} of '{}' is empty", chunk.chunk_index, chunk.call_id));
    return Prompt{policy, std::string(prompt_header(policy)), chunk.text};
}

}  // namespace expectq
