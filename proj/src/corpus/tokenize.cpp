#include "expectq/corpus.hpp"
#include "expectq/error.hpp"

#include <fmt/format.h>

#include <cctype>
#include <fstream>

namespace expectq {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Byte length of a punctuation mark starting at text[i], or 0. Covers ASCII
// punctuation plus typographic quotes, dashes and the ellipsis (U+2010..U+2026).
std::size_t punct_len_at(std::string_view text, std::size_t i) {
    auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) return std::ispunct(c) ? 1 : 0;
    if (c == 0xE2 && i + 2 < text.size()) {
        auto c1 = static_cast<unsigned char>(text[i + 1]);
        auto c2 = static_cast<unsigned char>(text[i + 2]);
        if (c1 == 0x80 && c2 >= 0x90 && c2 <= 0xA6) return 3;
    }
    return 0;
}

// Same test for a mark ending at text[end-1].
std::size_t punct_len_before(std::string_view text, std::size_t begin, std::size_t end) {
    auto c = static_cast<unsigned char>(text[end - 1]);
    if (c < 0x80) return std::ispunct(c) ? 1 : 0;
    if (end - begin >= 3 && static_cast<unsigned char>(text[end - 3]) == 0xE2)
        return punct_len_at(text, end - 3);
    return 0;
}

}  // namespace

std::vector<TokenSpan> token_spans(std::string_view text) {
    std::vector<TokenSpan> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && is_space(text[i])) ++i;
        if (i >= n) break;
        TokenSpan t;
        t.begin = i;
        while (i < n && !is_space(text[i])) ++i;
        t.end = i;
        t.core_begin = t.begin;
        t.core_end = t.end;
        while (t.core_begin < t.core_end) {
            auto len = punct_len_at(text, t.core_begin);
            if (len == 0 || t.core_begin + len > t.core_end) break;
            t.core_begin += len;
        }
        while (t.core_end > t.core_begin) {
            auto len = punct_len_before(text, t.core_begin, t.core_end);
            if (len == 0) break;
            t.core_end -= len;
        }
        out.push_back(t);
    }
    return out;
}

std::vector<std::string_view> split_words(std::string_view text) {
    std::vector<std::string_view> out;
    for (const auto& t : token_spans(text)) out.push_back(text.substr(t.begin, t.end - t.begin));
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> normalized_tokens(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& t : token_spans(text)) {
        if (t.core_end > t.core_begin)
            out.push_back(to_lower(text.substr(t.core_begin, t.core_end - t.core_begin)));
    }
    return out;
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, fmt::format("cannot open word list '{}'", path.string()));
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        out.push_back(to_lower(std::string_view(line).substr(b, e - b + 1)));
    }
    return out;
}

}  // namespace expectq
