#include "expectq/corpus.hpp"
#include "expectq/error.hpp"

#include <fmt/format.h>

namespace expectq {

std::vector<TextChunk> chunk(const Transcript& t, std::size_t max_words) {
    if (max_words < 1) throw Error(Errc::InvalidArgument, "max_words must be at least 1");
    const auto words = split_words(t.text);
    if (words.empty()) throw Error(Errc::EmptyTranscript, fmt::format("transcript '{}' has no words", t.call_id));

    std::vector<TextChunk> out;
    out.reserve(words.size() / max_words + 1);
    for (std::size_t start = 0; start < words.size(); start += max_words) {
        const std::size_t stop = std::min(words.size(), start + max_words);
        TextChunk c;
        c.call_id = t.call_id;
        c.chunk_index = out.size();
        c.word_count = stop - start;
        for (std::size_t i = start; i < stop; ++i) {
            if (i > start) c.text.push_back(' ');
            c.text.append(words[i]);
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace expectq
