#include "expectq/csv.hpp"
#include "expectq/error.hpp"
#include "expectq/fundamentals.hpp"

#include <fmt/format.h>

#include <fstream>
#include <limits>
#include <utility>

namespace expectq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using RawField = std::pair<const char*, double RawFirmQuarter::*>;

const std::vector<RawField>& raw_fields() {
    static const std::vector<RawField> fields{
        {"book_assets", &RawFirmQuarter::book_assets},
        {"capx", &RawFirmQuarter::capx},
        {"rd", &RawFirmQuarter::rd},
        {"sga", &RawFirmQuarter::sga},
        {"ppe", &RawFirmQuarter::ppe},
        {"long_term_debt", &RawFirmQuarter::long_term_debt},
        {"short_term_debt", &RawFirmQuarter::short_term_debt},
        {"shares_out", &RawFirmQuarter::shares_out},
        {"price_qtr_end", &RawFirmQuarter::price_qtr_end},
        {"price_call_day0", &RawFirmQuarter::price_call_day0},
        {"price_call_day1", &RawFirmQuarter::price_call_day1},
        {"price_call_day5", &RawFirmQuarter::price_call_day5},
        {"current_assets", &RawFirmQuarter::current_assets},
        {"income_before_extraordinary", &RawFirmQuarter::income_before_extraordinary},
        {"depreciation", &RawFirmQuarter::depreciation},
        {"sales", &RawFirmQuarter::sales},
        {"retained_earnings", &RawFirmQuarter::retained_earnings},
        {"current_liabilities", &RawFirmQuarter::current_liabilities},
        {"operating_income_before_depreciation", &RawFirmQuarter::operating_income_before_depreciation},
        {"eps", &RawFirmQuarter::eps},
        {"ebit", &RawFirmQuarter::ebit},
        {"hhi", &RawFirmQuarter::hhi},
        {"top4shares", &RawFirmQuarter::top4shares},
        {"life1", &RawFirmQuarter::life1},
        {"life2", &RawFirmQuarter::life2},
        {"life3", &RawFirmQuarter::life3},
        {"life4", &RawFirmQuarter::life4},
        {"analyst_capex_consensus_pre", &RawFirmQuarter::analyst_capex_consensus_pre},
        {"analyst_capex_consensus_post", &RawFirmQuarter::analyst_capex_consensus_post},
    };
    return fields;
}

}  // namespace

RawFirmQuarter::RawFirmQuarter() {
    for (const auto& [_, member] : raw_fields()) this->*member = kNaN;
}

const std::vector<std::string>& raw_numeric_fields() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : raw_fields()) out.emplace_back(name);
        return out;
    }();
    return names;
}

std::vector<RawFirmQuarter> read_fundamentals_csv(std::istream& in) {
    const auto t = read_csv(in);
    const auto c_firm = t.require_column("firm_id");
    const auto c_fq = t.require_column("fiscal_quarter");
    const auto c_ind = t.column("industry");
    std::vector<std::pair<std::size_t, double RawFirmQuarter::*>> present;
    for (const auto& [name, member] : raw_fields()) {
        if (auto c = t.column(name)) present.emplace_back(*c, member);
    }
    std::vector<RawFirmQuarter> rows;
    rows.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        RawFirmQuarter raw;
        raw.firm_id = r[c_firm];
        if (raw.firm_id.empty()) throw Error(Errc::MissingField, fmt::format("fundamentals row {}: empty firm_id", i + 1));
        raw.fiscal_quarter = parse_fiscal_quarter(r[c_fq]);
        if (c_ind) raw.industry = r[*c_ind];
        for (const auto& [c, member] : present) {
            try {
                raw.*member = parse_number(r[c]);
            } catch (const Error& e) {
                throw Error(Errc::InvalidArgument,
                            fmt::format("fundamentals row {}, column '{}': {}", i + 1, t.header[c], e.what()));
            }
        }
        rows.push_back(std::move(raw));
    }
    return rows;
}

std::vector<RawFirmQuarter> read_fundamentals_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, fmt::format("cannot open fundamentals '{}'", path.string()));
    return read_fundamentals_csv(in);
}

}  // namespace expectq
