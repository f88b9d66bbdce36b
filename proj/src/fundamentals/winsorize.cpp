#include "expectq/error.hpp"
#include "expectq/fundamentals.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace expectq {

double quantile_linear(std::vector<double> values, double p) {
    std::erase_if(values, [](double v) { return std::isnan(v); });
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

WinsorBounds clamp_rows(std::vector<double>& col, const std::vector<std::size_t>& rows, double tail) {
    std::vector<double> vals;
    vals.reserve(rows.size());
    for (auto r : rows) vals.push_back(col[r]);
    WinsorBounds b;
    b.lower = quantile_linear(vals, tail);
    b.upper = quantile_linear(vals, 1.0 - tail);
    if (std::isnan(b.lower)) return b;
    for (auto r : rows) {
        double& v = col[r];
        if (std::isnan(v)) continue;
        if (v < b.lower) {
            v = b.lower;
            ++b.clamped;
        } else if (v > b.upper) {
            v = b.upper;
            ++b.clamped;
        }
    }
    return b;
}

}  // namespace

WinsorReport winsorize(Panel& panel, std::span<const std::string> columns, double tail, WinsorMode mode) {
    if (!(tail > 0.0 && tail < 0.5)) throw Error(Errc::InvalidArgument, fmt::format("tail {} outside (0, 0.5)", tail));
    WinsorReport report;
    for (const auto& name : columns) {
        auto& col = panel.column(name);
        if (mode == WinsorMode::Pooled) {
            std::vector<std::size_t> all(panel.rows());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            report[name] = clamp_rows(col, all, tail);
            continue;
        }
        std::map<int, std::vector<std::size_t>> by_period;
        for (std::size_t i = 0; i < panel.rows(); ++i) by_period[panel.period()[i]].push_back(i);
        for (const auto& [period, rows] : by_period) {
            report[fmt::format("{}@{}", name, to_string(FiscalQuarter::from_index(period)))] = clamp_rows(col, rows, tail);
        }
    }
    return report;
}

}  // namespace expectq
