#include "expectq/error.hpp"
#include "expectq/fundamentals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace expectq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using RowField = std::pair<const char*, double PanelRow::*>;

const std::vector<RowField>& row_fields() {
    static const std::vector<RowField> fields{
        {"capital_expenditure_pct", &PanelRow::capital_expenditure_pct},
        {"physical_capital", &PanelRow::physical_capital},
        {"intangible_capital", &PanelRow::intangible_capital},
        {"total_capital", &PanelRow::total_capital},
        {"physical_investment", &PanelRow::physical_investment},
        {"intangible_investment", &PanelRow::intangible_investment},
        {"total_investment", &PanelRow::total_investment},
        {"rd_pct", &PanelRow::rd_pct},
        {"total_q", &PanelRow::total_q},
        {"total_q_c0", &PanelRow::total_q_c0},
        {"total_q_c1", &PanelRow::total_q_c1},
        {"total_q_c5", &PanelRow::total_q_c5},
        {"total_cash_flow", &PanelRow::total_cash_flow},
        {"leverage", &PanelRow::leverage},
        {"size", &PanelRow::size},
        {"z_score", &PanelRow::z_score},
        {"profitability", &PanelRow::profitability},
        {"sales_growth", &PanelRow::sales_growth},
        {"hhi", &PanelRow::hhi},
        {"top4shares", &PanelRow::top4shares},
        {"life1", &PanelRow::life1},
        {"life2", &PanelRow::life2},
        {"life3", &PanelRow::life3},
        {"life4", &PanelRow::life4},
        {"capx", &PanelRow::capx},
        {"eps", &PanelRow::eps},
        {"price_qtr_end", &PanelRow::price_qtr_end},
        {"analyst_capex_consensus_pre", &PanelRow::analyst_capex_consensus_pre},
        {"analyst_capex_consensus_post", &PanelRow::analyst_capex_consensus_post},
    };
    return fields;
}

// NaN-propagating ratio; a non-positive or missing denominator gives NaN.
double ratio(double num, double den) {
    if (std::isnan(num) || !(den > 0.0)) return kNaN;
    return num / den;
}

}  // namespace

PanelRow::PanelRow() {
    for (const auto& [_, member] : row_fields()) this->*member = kNaN;
}

const std::vector<std::string>& panel_row_columns() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : row_fields()) out.emplace_back(name);
        return out;
    }();
    return names;
}

PanelRow derive_row(const RawFirmQuarter& raw, const CapitalStocks& stocks, std::optional<double> prior_sales) {
    PanelRow row;
    row.firm_id = raw.firm_id;
    row.fiscal_quarter = raw.fiscal_quarter;
    row.industry = raw.industry;

    auto note = [&row](const char* name, double v) {
        if (std::isnan(v)) row.missing.emplace_back(name);
    };
    note("book_assets", raw.book_assets);
    note("capx", raw.capx);
    note("ppe", raw.ppe);
    note("long_term_debt", raw.long_term_debt);
    note("short_term_debt", raw.short_term_debt);
    note("shares_out", raw.shares_out);
    note("price_qtr_end", raw.price_qtr_end);
    note("current_assets", raw.current_assets);
    note("income_before_extraordinary", raw.income_before_extraordinary);
    note("depreciation", raw.depreciation);
    note("sales", raw.sales);
    note("retained_earnings", raw.retained_earnings);
    note("current_liabilities", raw.current_liabilities);
    note("operating_income_before_depreciation", raw.operating_income_before_depreciation);

    const double assets = raw.book_assets;
    const double total = stocks.total();
    const double debt = raw.long_term_debt + raw.short_term_debt;

    row.capital_expenditure_pct = 100.0 * ratio(raw.capx, assets);
    row.physical_capital = stocks.physical;
    row.intangible_capital = stocks.intangible;
    row.total_capital = total;
    row.physical_investment = 100.0 * ratio(raw.capx, total);
    row.intangible_investment = 100.0 * ratio(stocks.intangible_investment, total);
    row.total_investment = row.physical_investment + row.intangible_investment;
    row.rd_pct = 100.0 * ratio(std::isnan(raw.rd) ? 0.0 : raw.rd, total);

    auto q_at = [&](double price) {
        const double num = raw.shares_out * price + debt - raw.current_assets;
        return ratio(num, total);
    };
    row.total_q = q_at(raw.price_qtr_end);
    row.total_q_c0 = q_at(raw.price_call_day0);
    row.total_q_c1 = q_at(raw.price_call_day1);
    row.total_q_c5 = q_at(raw.price_call_day5);
    if (!(total > 0.0)) row.missing.emplace_back("total_capital");

    const double after_tax_intangible = (1.0 - kMarginalTaxRate) * stocks.intangible_investment;
    row.total_cash_flow = ratio(raw.income_before_extraordinary + raw.depreciation + after_tax_intangible, total);

    const double equity = raw.shares_out * raw.price_qtr_end;
    row.leverage = ratio(debt, debt + equity);
    row.size = assets > 0.0 ? std::log(assets) : kNaN;
    row.z_score = ratio(3.3 * raw.operating_income_before_depreciation + raw.sales + 1.4 * raw.retained_earnings +
                            1.2 * (raw.current_assets - raw.current_liabilities),
                        assets);
    const double ebit = std::isnan(raw.ebit) ? raw.operating_income_before_depreciation - raw.depreciation : raw.ebit;
    row.profitability = ratio(ebit, assets);
    if (prior_sales && *prior_sales > 0.0 && !std::isnan(raw.sales))
        row.sales_growth = 100.0 * (raw.sales - *prior_sales) / *prior_sales;

    row.hhi = raw.hhi;
    row.top4shares = raw.top4shares;
    row.life1 = raw.life1;
    row.life2 = raw.life2;
    row.life3 = raw.life3;
    row.life4 = raw.life4;
    row.capx = raw.capx;
    row.eps = raw.eps;
    row.price_qtr_end = raw.price_qtr_end;
    row.analyst_capex_consensus_pre = raw.analyst_capex_consensus_pre;
    row.analyst_capex_consensus_post = raw.analyst_capex_consensus_post;
    return row;
}

std::vector<PanelRow> derive_panel_rows(std::vector<RawFirmQuarter> raw, const IntangibleOptions& options,
                                        DeriveReport* report) {
    DeriveReport rep;
    rep.input_rows = raw.size();
    std::stable_sort(raw.begin(), raw.end(), [](const RawFirmQuarter& a, const RawFirmQuarter& b) {
        return a.firm_id != b.firm_id ? a.firm_id < b.firm_id : a.fiscal_quarter < b.fiscal_quarter;
    });

    std::vector<PanelRow> out;
    out.reserve(raw.size());
    std::size_t begin = 0;
    while (begin < raw.size()) {
        std::size_t end = begin;
        while (end < raw.size() && raw[end].firm_id == raw[begin].firm_id) ++end;

        std::vector<int> periods;
        std::vector<double> rd;
        std::vector<double> sga;
        for (std::size_t i = begin; i < end; ++i) {
            periods.push_back(raw[i].fiscal_quarter.index());
            rd.push_back(raw[i].rd);
            sga.push_back(raw[i].sga);
        }
        const auto series = intangible_capital(periods, rd, sga, options);
        rep.filled_missing_intangibles += series.filled_missing;

        for (std::size_t i = begin; i < end; ++i) {
            const auto& r = raw[i];
            if (!(r.book_assets > 0.0)) {
                ++rep.dropped_missing_assets;
                continue;
            }
            CapitalStocks stocks{r.ppe, series.stock[i - begin], series.investment[i - begin]};
            std::optional<double> prior;
            if (i > begin) prior = raw[i - 1].sales;
            out.push_back(derive_row(r, stocks, prior));
        }
        begin = end;
    }
    if (report) *report = rep;
    return out;
}

Panel to_panel(const std::vector<PanelRow>& rows) {
    Panel p;
    for (const auto& name : panel_row_columns()) p.ensure_column(name);
    for (const auto& row : rows) {
        const auto r = p.add_row(row.firm_id, row.fiscal_quarter.index(), row.industry);
        for (const auto& [name, member] : row_fields()) p.column(name)[r] = row.*member;
    }
    return p;
}

}  // namespace expectq
