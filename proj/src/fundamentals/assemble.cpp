#include "expectq/error.hpp"
#include "expectq/fundamentals.hpp"

#include <fmt/format.h>

#include <limits>

namespace expectq {

Panel assemble_panel(const Panel& calls, const Panel& fundamentals, const AssembleOptions& options,
                     AssembleReport* report) {
    AssembleReport rep;
    rep.call_rows = calls.rows();
    rep.fundamental_rows = fundamentals.rows();

    // Forces key-uniqueness checks on both sides before joining.
    if (calls.rows()) calls.find_row(calls.firm()[0], calls.period()[0]);
    if (fundamentals.rows()) fundamentals.find_row(fundamentals.firm()[0], fundamentals.period()[0]);

    Panel out;
    for (const auto& n : calls.column_names()) out.ensure_column(n);
    for (const auto& n : fundamentals.column_names()) {
        if (calls.has(n))
            throw Error(Errc::JoinKeyCollision, fmt::format("column '{}' exists on both sides of the join", n));
        out.ensure_column(n);
    }

    std::vector<bool> used(fundamentals.rows(), false);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < calls.rows(); ++i) {
        auto j = fundamentals.find_row(calls.firm()[i], calls.period()[i]);
        if (!j) {
            ++rep.calls_without_fundamentals;
            continue;
        }
        used[*j] = true;
        pairs.emplace_back(i, *j);
    }
    rep.matched = pairs.size();
    for (bool u : used) rep.fundamentals_without_call += u ? 0 : 1;

    for (const auto& [i, j] : pairs) {
        std::string industry = calls.industry()[i].empty() ? fundamentals.industry()[j] : calls.industry()[i];
        out.add_row(calls.firm()[i], calls.period()[i], std::move(industry), calls.call_id()[i]);
    }
    for (const auto& n : calls.column_names()) {
        const auto& src = calls.column(n);
        auto& dst = out.column(n);
        for (std::size_t r = 0; r < pairs.size(); ++r) dst[r] = src[pairs[r].first];
    }
    for (const auto& n : fundamentals.column_names()) {
        const auto& src = fundamentals.column(n);
        auto& dst = out.column(n);
        for (std::size_t r = 0; r < pairs.size(); ++r) dst[r] = src[pairs[r].second];
    }

    for (const auto& name : options.lead_columns) {
        const Panel* source = calls.has(name) ? &calls : fundamentals.has(name) ? &fundamentals : nullptr;
        if (!source) throw Error(Errc::MissingInput, fmt::format("lead column '{}' not found", name));
        const auto& src = source->column(name);
        for (int h = options.lead_min; h <= options.lead_max; ++h) {
            std::vector<double> lead(out.rows(), std::numeric_limits<double>::quiet_NaN());
            for (std::size_t r = 0; r < out.rows(); ++r) {
                if (auto k = source->find_row(out.firm()[r], out.period()[r] + h)) lead[r] = src[*k];
            }
            out.set_column(fmt::format("{}_lead{}", name, h), std::move(lead));
        }
    }
    if (report) *report = rep;
    return out;
}

}  // namespace expectq
