#include "expectq/csv.hpp"
#include "expectq/scoring.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

namespace expectq {

ScoreRun score_corpus(const std::vector<Transcript>& corpus, std::span<const PolicyKind> policies,
                      QueryEngine& engine, const ScoreOptions& options) {
    ScoreRun run;
    if (corpus.empty() || policies.empty()) return run;
    if (options.mask) options.mask->validate();

    // Chunk once per call, then build every prompt so the engine can batch.
    std::vector<std::vector<TextChunk>> chunks_by_call;
    chunks_by_call.reserve(corpus.size());
    for (const auto& t : corpus) {
        auto chunks = chunk(t, options.max_words);
        if (options.mask) {
            for (auto& c : chunks) c = mask_identity(c, *options.mask);
        }
        chunks_by_call.push_back(std::move(chunks));
    }

    std::vector<Prompt> prompts;
    for (const auto& chunks : chunks_by_call) {
        for (auto policy : policies) {
            for (const auto& c : chunks) prompts.push_back(build_prompt(policy, c));
        }
    }
    const auto outcomes = engine.query_all(prompts);

    std::size_t k = 0;
    for (std::size_t call = 0; call < corpus.size(); ++call) {
        const auto& chunks = chunks_by_call[call];
        for (auto policy : policies) {
            CallScore row;
            row.call_id = corpus[call].call_id;
            row.policy = policy;
            std::vector<double> scores;
            for (const auto& c : chunks) {
                const auto& outcome = outcomes[k++];
                ChunkRecord rec;
                rec.prompt_sha256 = outcome.prompt_sha256;
                rec.cache_hit = outcome.cache_hit;
                rec.score.call_id = c.call_id;
                rec.score.chunk_index = c.chunk_index;
                rec.score.policy = policy;
                if (outcome.response) {
                    try {
                        auto parsed = parse_response(*outcome.response, policy);
                        rec.score.choice = parsed.choice;
                        rec.score.explanation = std::move(parsed.explanation);
                        rec.score.score = parsed.score;
                        rec.included = true;
                    } catch (const Error& e) {
                        rec.error = e.code();
                        rec.error_message = e.what();
                        rec.score.choice = Choice::NoInformation;
                        rec.score.score = 0.0;
                        rec.included = options.on_parse_error == ParseErrorPolicy::TreatAsNoInformation;
                    }
                } else {
                    rec.error = outcome.error.value_or(Errc::TransportError);
                    rec.error_message = outcome.error_message;
                }
                if (rec.error) ++row.n_errors;
                if (rec.included) scores.push_back(rec.score.score);
                run.chunks.push_back(std::move(rec));
            }
            row.n_chunks = scores.size();
            if (scores.empty()) {
                row.mean_score = std::numeric_limits<double>::quiet_NaN();
                row.maxabs_score = std::numeric_limits<double>::quiet_NaN();
            } else {
                row.mean_score = aggregate_mean(scores);
                row.maxabs_score = aggregate_maxabs(scores);
            }
            run.calls.push_back(std::move(row));
        }
    }
    return run;
}

void write_call_scores_csv(std::ostream& out, const std::vector<CallScore>& rows) {
    out << "call_id,policy,mean_score,maxabs_score,n_chunks,n_errors\n";
    for (const auto& r : rows) {
        const std::string fields[] = {r.call_id,
                                      std::string(to_string(r.policy)),
                                      format_number(r.mean_score),
                                      format_number(r.maxabs_score),
                                      std::to_string(r.n_chunks),
                                      std::to_string(r.n_errors)};
        write_csv_row(out, fields);
    }
}

std::vector<CallScore> read_call_scores_csv(std::istream& in) {
    const auto t = read_csv(in);
    const auto c_id = t.require_column("call_id");
    const auto c_pol = t.require_column("policy");
    const auto c_mean = t.require_column("mean_score");
    const auto c_max = t.require_column("maxabs_score");
    const auto c_n = t.require_column("n_chunks");
    const auto c_err = t.column("n_errors");
    std::vector<CallScore> rows;
    rows.reserve(t.rows.size());
    for (const auto& r : t.rows) {
        CallScore s;
        s.call_id = r[c_id];
        s.policy = parse_policy(r[c_pol]);
        s.mean_score = parse_number(r[c_mean]);
        s.maxabs_score = parse_number(r[c_max]);
        s.n_chunks = static_cast<std::size_t>(parse_number(r[c_n]));
        if (c_err && !r[*c_err].empty()) s.n_errors = static_cast<std::size_t>(parse_number(r[*c_err]));
        rows.push_back(std::move(s));
    }
    return rows;
}

void write_chunk_scores_csv(std::ostream& out, const std::vector<ChunkRecord>& rows) {
    out << "call_id,chunk_index,policy,choice,score,included,error,prompt_sha256,explanation\n";
    for (const auto& r : rows) {
        const std::string fields[] = {r.score.call_id,
                                      std::to_string(r.score.chunk_index),
                                      std::string(to_string(r.score.policy)),
                                      std::string(to_string(r.score.choice)),
                                      format_number(r.score.score),
                                      r.included ? "1" : "0",
                                      r.error ? std::string(to_string(*r.error)) : std::string{},
                                      r.prompt_sha256,
                                      r.score.explanation};
        write_csv_row(out, fields);
    }
}

double score_correlation(const std::vector<CallScore>& a, const std::vector<CallScore>& b) {
    std::map<std::pair<std::string, PolicyKind>, double> lookup;
    for (const auto& r : b) {
        if (!std::isnan(r.mean_score)) lookup[{r.call_id, r.policy}] = r.mean_score;
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& r : a) {
        if (std::isnan(r.mean_score)) continue;
        auto it = lookup.find({r.call_id, r.policy});
        if (it == lookup.end()) continue;
        x.push_back(r.mean_score);
        y.push_back(it->second);
    }
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    if (x.size() < 2) return nan;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return nan;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace expectq
