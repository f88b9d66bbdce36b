#include "expectq/scoring.hpp"

#include <cmath>

namespace expectq {

double aggregate_mean(std::span<const double> scores) {
    if (scores.empty()) throw Error(Errc::EmptyInput, "cannot average an empty score list");
    double sum = 0.0;
    for (double s : scores) sum += s;
    return sum / static_cast<double>(scores.size());
}

double aggregate_maxabs(std::span<const double> scores) {
    if (scores.empty()) throw Error(Errc::EmptyInput, "cannot take maxabs of an empty score list");
    double m = 0.0;
    for (double s : scores) m = std::max(m, std::abs(s));
    if (m == 0.0) return 0.0;
    bool pos = false;
    bool neg = false;
    for (double s : scores) {
        if (s == m) pos = true;
        if (s == -m) neg = true;
    }
    if (pos && neg) return 0.0;
    return pos ? m : -m;
}

namespace {

std::vector<double> values_of(std::span<const ChunkScore> scores) {
    if (scores.empty()) return {};
    std::vector<double> v;
    v.reserve(scores.size());
    for (const auto& s : scores) {
        if (s.call_id != scores.front().call_id || s.policy != scores.front().policy)
            throw Error(Errc::InvalidArgument, "chunk scores span more than one call/policy");
        v.push_back(s.score);
    }
    return v;
}

}  // namespace

double aggregate_mean(std::span<const ChunkScore> scores) { return aggregate_mean(values_of(scores)); }

double aggregate_maxabs(std::span<const ChunkScore> scores) { return aggregate_maxabs(values_of(scores)); }

}  // namespace expectq
