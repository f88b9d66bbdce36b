#include "expectq/events.hpp"

#include "expectq/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace expectq {

int day_key(Date d) noexcept { return static_cast<int>(d.time_since_epoch().count()); }
Date date_of_day_key(int key) noexcept { return Date{std::chrono::days{key}}; }

void ReturnSeries::validate() const {
    if (keys.size() != returns.size())
        throw Error(Errc::InvalidArgument, fmt::format("firm {}: key/return length mismatch", firm_id));
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i > 0 && keys[i] <= keys[i - 1])
            throw Error(Errc::InvalidArgument, fmt::format("firm {}: dates not strictly increasing", firm_id));
        if (!(returns[i] > -1.0) && !std::isnan(returns[i]))
            throw Error(Errc::InvalidArgument, fmt::format("firm {}: return {} <= -1", firm_id, returns[i]));
    }
}

std::optional<double> ReturnSeries::at(int key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) return std::nullopt;
    const double r = returns[static_cast<std::size_t>(it - keys.begin())];
    if (std::isnan(r)) return std::nullopt;
    return r;
}

ReturnSeries monthly_returns(const ReturnSeries& daily) {
    ReturnSeries out;
    out.firm_id = daily.firm_id;
    for (std::size_t i = 0; i < daily.keys.size(); ++i) {
        if (std::isnan(daily.returns[i])) continue;
        const int m = month_index(date_of_day_key(daily.keys[i]));
        if (out.keys.empty() || out.keys.back() != m) {
            out.keys.push_back(m);
            out.returns.push_back(0.0);
        }
        out.returns.back() = (1.0 + out.returns.back()) * (1.0 + daily.returns[i]) - 1.0;
    }
    return out;
}

void FactorPanel::validate() const {
    if (names.size() != columns.size()) throw Error(Errc::InvalidArgument, "factor panel: name/column mismatch");
    for (const auto& c : columns)
        if (c.size() != keys.size()) throw Error(Errc::InvalidArgument, "factor panel: misaligned factor column");
    if (rf.size() != keys.size()) throw Error(Errc::InvalidArgument, "factor panel: misaligned risk-free rate");
    for (std::size_t i = 1; i < keys.size(); ++i)
        if (keys[i] <= keys[i - 1]) throw Error(Errc::InvalidArgument, "factor panel: dates not strictly increasing");
}

std::optional<std::size_t> FactorPanel::position(int key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - keys.begin());
}

std::size_t FactorPanel::lower_bound(int key) const {
    return static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin());
}

const std::vector<double>& FactorPanel::column(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return columns[i];
    throw Error(Errc::MissingInput, fmt::format("factor '{}' not in factor file", name));
}

FactorModel carhart4() { return {"carhart4", {"mktrf", "smb", "hml", "umd"}}; }
FactorModel ff5() { return {"ff5", {"mktrf", "smb", "hml", "rmw", "cma"}}; }
FactorModel q5() { return {"q5", {"mktrf", "q_me", "q_ia", "q_roe", "q_eg"}}; }

}  // namespace expectq
