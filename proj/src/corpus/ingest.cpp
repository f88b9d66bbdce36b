#include "expectq/corpus.hpp"
#include "expectq/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace expectq {

namespace {

using nlohmann::json;

std::string required_string(const json& rec, const std::string& key, std::size_t record_no) {
    auto it = rec.find(key);
    if (it == rec.end() || it->is_null())
        throw Error(Errc::MissingField, fmt::format("record {}: missing field '{}'", record_no, key));
    if (!it->is_string())
        throw Error(Errc::MissingField, fmt::format("record {}: field '{}' is not a string", record_no, key));
    auto s = it->get<std::string>();
    if (s.empty())
        throw Error(Errc::MissingField, fmt::format("record {}: field '{}' is empty", record_no, key));
    return s;
}

}  // namespace

std::vector<Transcript> ingest_transcripts(std::istream& in, const IngestOptions& options) {
    const auto& schema = options.schema;
    std::vector<Transcript> corpus;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t record_no = 0;
    while (std::getline(in, line)) {
        ++record_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(Errc::InvalidArgument, fmt::format("record {}: invalid JSON ({})", record_no, e.what()));
        }
        if (!rec.is_object())
            throw Error(Errc::InvalidArgument, fmt::format("record {}: not a JSON object", record_no));

        Transcript t;
        t.call_id = required_string(rec, schema.call_id, record_no);
        t.ticker = required_string(rec, schema.ticker, record_no);
        auto fq = required_string(rec, schema.fiscal_quarter, record_no);
        auto date = required_string(rec, schema.call_date, record_no);
        t.text = required_string(rec, schema.text, record_no);
        if (split_words(t.text).empty())
            throw Error(Errc::MissingField, fmt::format("record {}: field '{}' has no words", record_no, schema.text));
        t.fiscal_quarter = parse_fiscal_quarter(fq);
        t.call_date = parse_iso_date(date);
        auto year = static_cast<int>(std::chrono::year_month_day{t.call_date}.year());
        if (year < 1900 || year > 2099)
            throw Error(Errc::UnparseableDate,
                        fmt::format("record {}: call_date '{}' outside 1900-2099", record_no, date));

        if (!seen.insert(t.call_id).second) {
            if (options.duplicates == DuplicatePolicy::Reject)
                throw Error(Errc::DuplicateCallId, fmt::format("duplicate call_id '{}' (record {})", t.call_id, record_no));
            continue;
        }
        corpus.push_back(std::move(t));
    }
    return corpus;
}

std::vector<Transcript> ingest_transcripts_file(const std::filesystem::path& path, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, fmt::format("cannot open transcripts '{}'", path.string()));
    return ingest_transcripts(in, options);
}

void write_transcripts(std::ostream& out, const std::vector<Transcript>& corpus) {
    for (const auto& t : corpus) {
        nlohmann::ordered_json j;
        j["call_id"] = t.call_id;
        j["ticker"] = t.ticker;
        j["fiscal_quarter"] = to_string(t.fiscal_quarter);
        j["call_date"] = to_string(t.call_date);
        j["text"] = t.text;
        out << j.dump() << '\n';
    }
}

}  // namespace expectq
