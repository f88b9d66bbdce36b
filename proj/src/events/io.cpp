#include "expectq/events.hpp"

#include "expectq/csv.hpp"
#include "expectq/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace expectq {

namespace {

int parse_key(const std::string& text, bool monthly) {
    return monthly ? parse_month_index(text) : day_key(parse_iso_date(text));
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, fmt::format("cannot open {}", path.string()));
    return in;
}

}  // namespace

std::map<std::string, ReturnSeries, std::less<>> read_returns_csv(std::istream& in, bool monthly) {
    const auto table = read_csv(in);
    const auto c_firm = table.require_column("firm_id");
    const auto c_key = table.require_column(monthly ? "month" : "date");
    const auto c_ret = table.require_column("ret");
    std::map<std::string, std::vector<std::pair<int, double>>> raw;
    for (const auto& row : table.rows) raw[row[c_firm]].emplace_back(parse_key(row[c_key], monthly), parse_number(row[c_ret]));

    std::map<std::string, ReturnSeries, std::less<>> out;
    for (auto& [firm, obs] : raw) {
        std::sort(obs.begin(), obs.end());
        ReturnSeries s;
        s.firm_id = firm;
        for (const auto& [k, r] : obs) {
            s.keys.push_back(k);
            s.returns.push_back(r);
        }
        s.validate();
        out.emplace(firm, std::move(s));
    }
    return out;
}

FactorPanel read_factors_csv(std::istream& in, bool monthly) {
    const auto table = read_csv(in);
    const auto c_key = table.require_column(monthly ? "month" : "date");
    const auto c_rf = table.require_column("rf");
    FactorPanel p;
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i == c_key || i == c_rf) continue;
        p.names.push_back(table.header[i]);
        cols.push_back(i);
    }
    p.columns.resize(cols.size());
    std::vector<std::size_t> order(table.rows.size());
    std::vector<int> keys;
    for (const auto& row : table.rows) keys.push_back(parse_key(row[c_key], monthly));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
    for (auto i : order) {
        const auto& row = table.rows[i];
        p.keys.push_back(keys[i]);
        p.rf.push_back(parse_number(row[c_rf]));
        for (std::size_t k = 0; k < cols.size(); ++k) p.columns[k].push_back(parse_number(row[cols[k]]));
    }
    p.validate();
    return p;
}

std::map<std::string, ReturnSeries, std::less<>> read_returns_file(const std::filesystem::path& path, bool monthly) {
    auto in = open(path);
    return read_returns_csv(in, monthly);
}

FactorPanel read_factors_file(const std::filesystem::path& path, bool monthly) {
    auto in = open(path);
    return read_factors_csv(in, monthly);
}

void write_events_csv(std::span<const EventRow> rows, std::ostream& out) {
    write_csv_row(out, std::vector<std::string>{"call_id", "firm_id", "fiscal_quarter", "car_0_1", "car_0_3", "car_0_5",
                                                "ff5_alpha_q", "q5_alpha_q", "ret_q", "earnings_surprise",
                                                "analyst_forecast_change", "errors"});
    for (const auto& r : rows) {
        std::string errors;
        for (const auto& e : r.errors) errors += (errors.empty() ? "" : "; ") + e;
        write_csv_row(out, std::vector<std::string>{
                               r.call_id, r.firm_id, to_string(r.fiscal_quarter), format_number(r.car_0_1),
                               format_number(r.car_0_3), format_number(r.car_0_5), format_number(r.ff5_alpha_q),
                               format_number(r.q5_alpha_q), format_number(r.ret_q), format_number(r.earnings_surprise),
                               format_number(r.analyst_forecast_change), errors});
    }
}

std::vector<EventRow> read_events_csv(std::istream& in) {
    const auto t = read_csv(in);
    auto col = [&](std::string_view n) { return t.require_column(n); };
    const auto c_call = col("call_id"), c_firm = col("firm_id"), c_fq = col("fiscal_quarter");
    const auto c1 = col("car_0_1"), c3 = col("car_0_3"), c5 = col("car_0_5"), cf = col("ff5_alpha_q"),
               cq = col("q5_alpha_q"), cr = col("ret_q"), cs = col("earnings_surprise"),
               ca = col("analyst_forecast_change");
    const auto ce = t.column("errors");
    std::vector<EventRow> rows;
    for (const auto& row : t.rows) {
        EventRow r;
        r.call_id = row[c_call];
        r.firm_id = row[c_firm];
        r.fiscal_quarter = parse_fiscal_quarter(row[c_fq]);
        r.car_0_1 = parse_number(row[c1]);
        r.car_0_3 = parse_number(row[c3]);
        r.car_0_5 = parse_number(row[c5]);
        r.ff5_alpha_q = parse_number(row[cf]);
        r.q5_alpha_q = parse_number(row[cq]);
        r.ret_q = parse_number(row[cr]);
        r.earnings_surprise = parse_number(row[cs]);
        r.analyst_forecast_change = parse_number(row[ca]);
        if (ce && !row[*ce].empty()) {
            std::stringstream ss(row[*ce]);
            std::string part;
            while (std::getline(ss, part, ';')) {
                if (!part.empty() && part.front() == ' ') part.erase(0, 1);
                r.errors.push_back(part);
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace expectq
