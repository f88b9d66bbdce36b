#pragma once

#include "expectq/calendar.hpp"
#include "expectq/panel.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace expectq {

/// One firm-quarter of accounting and market inputs. NaN marks a missing
/// value; amounts are in a common currency unit.
struct RawFirmQuarter {
    std::string firm_id;
    FiscalQuarter fiscal_quarter;
    std::string industry;

    double book_assets;
    double capx;
    double rd;
    double sga;
    double ppe;
    double long_term_debt;
    double short_term_debt;
    double shares_out;
    double price_qtr_end;
    double price_call_day0;
    double price_call_day1;
    double price_call_day5;
    double current_assets;
    double income_before_extraordinary;
    double depreciation;
    double sales;
    double retained_earnings;
    double current_liabilities;
    double operating_income_before_depreciation;
    double eps;
    // optional
    double ebit;
    double hhi;
    double top4shares;
    double life1;
    double life2;
    double life3;
    double life4;
    double analyst_capex_consensus_pre;
    double analyst_capex_consensus_post;

    RawFirmQuarter();
};

/// Numeric CSV column names in RawFirmQuarter declaration order.
const std::vector<std::string>& raw_numeric_fields();

std::vector<RawFirmQuarter> read_fundamentals_csv(std::istream& in);
std::vector<RawFirmQuarter> read_fundamentals_csv_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Capital stocks
// ---------------------------------------------------------------------------

inline constexpr double kIntangibleDepreciation = 0.025;  // per quarter
inline constexpr double kSgaIntangibleShare = 0.3;
inline constexpr double kMarginalTaxRate = 0.3;

enum class SeedRule {
    SteadyState,  // G_0 = first investment / delta
    Zero,
};

/// G_t = (1 - delta) G_{t-1} + investment_t, starting from `seed` (the stock
/// before the first observation). Returns G_1..G_n.
std::vector<double> perpetual_inventory(std::span<const double> investment, double delta, double seed);

struct IntangibleOptions {
    double delta = kIntangibleDepreciation;
    SeedRule seed = SeedRule::SteadyState;
};

struct IntangibleSeries {
    std::vector<double> investment;  // rd + 0.3 * sga, missing parts as 0
    std::vector<double> stock;
    std::size_t filled_missing = 0;
};

/// Quarterly intangible stock for one firm; `periods` are FiscalQuarter
/// indices and must be consecutive (NonConsecutiveQuarters otherwise).
IntangibleSeries intangible_capital(std::span<const int> periods, std::span<const double> rd,
                                    std::span<const double> sga, const IntangibleOptions& options = {});

/// (market_cap + debt_book - current_assets) / total_capital.
double total_q(double market_cap, double debt_book, double current_assets, double total_capital);

// ---------------------------------------------------------------------------
// Derived rows
// ---------------------------------------------------------------------------

struct CapitalStocks {
    double physical = 0.0;
    double intangible = 0.0;
    double intangible_investment = 0.0;  // level, rd + 0.3 * sga
    double total() const noexcept { return physical + intangible; }
};

/// Firm-quarter variables. Percent-scaled fields carry a _pct suffix or are
/// documented as percent; NaN marks a value whose inputs were missing.
struct PanelRow {
    std::string firm_id;
    FiscalQuarter fiscal_quarter;
    std::string industry;

    double capital_expenditure_pct;  // capx / book assets, percent
    double physical_capital;
    double intangible_capital;
    double total_capital;
    double physical_investment;      // percent of total capital
    double intangible_investment;    // percent of total capital
    double total_investment;         // percent of total capital
    double rd_pct;                   // percent of total capital
    double total_q;
    double total_q_c0;
    double total_q_c1;
    double total_q_c5;
    double total_cash_flow;
    double leverage;
    double size;
    double z_score;
    double profitability;
    double sales_growth;  // percent, quarter over quarter
    double hhi;
    double top4shares;
    double life1;
    double life2;
    double life3;
    double life4;
    // pass-through inputs used by event variables
    double capx;
    double eps;
    double price_qtr_end;
    double analyst_capex_consensus_pre;
    double analyst_capex_consensus_post;

    std::vector<std::string> missing;  // inputs that were unavailable

    PanelRow();
};

/// Panel column names produced from PanelRow, in output order.
const std::vector<std::string>& panel_row_columns();

PanelRow derive_row(const RawFirmQuarter& raw, const CapitalStocks& stocks,
                    std::optional<double> prior_sales = std::nullopt);

struct DeriveReport {
    std::size_t input_rows = 0;
    std::size_t dropped_missing_assets = 0;
    std::size_t filled_missing_intangibles = 0;
};

/// Groups by firm, builds capital stocks and derives every row. Rows
/// without positive book assets are dropped after the stock recursion.
std::vector<PanelRow> derive_panel_rows(std::vector<RawFirmQuarter> raw, const IntangibleOptions& options = {},
                                        DeriveReport* report = nullptr);

Panel to_panel(const std::vector<PanelRow>& rows);

// ---------------------------------------------------------------------------
// Winsorization
// ---------------------------------------------------------------------------

/// Linear interpolation between order statistics, h = (n - 1) p.
double quantile_linear(std::vector<double> values, double p);

enum class WinsorMode { Pooled, PerPeriod };

struct WinsorBounds {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t clamped = 0;
};

/// column -> bounds (pooled mode) or "column@period" -> bounds (per period).
using WinsorReport = std::map<std::string, WinsorBounds>;

/// Two-sided clamp at the tail and 1 - tail quantiles. NaN cells are
/// ignored. tail must lie in (0, 0.5).
WinsorReport winsorize(Panel& panel, std::span<const std::string> columns, double tail = 0.01,
                       WinsorMode mode = WinsorMode::Pooled);

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

struct AssembleOptions {
    std::vector<std::string> lead_columns{"capital_expenditure_pct", "physical_investment", "intangible_investment",
                                          "total_investment"};
    int lead_min = 2;
    int lead_max = 10;
};

struct AssembleReport {
    std::size_t call_rows = 0;
    std::size_t fundamental_rows = 0;
    std::size_t matched = 0;
    std::size_t calls_without_fundamentals = 0;
    std::size_t fundamentals_without_call = 0;
};

/// Inner join of call-level rows with fundamentals on (firm, quarter).
/// Lead columns `<name>_lead<h>` are read from whichever side holds `name`,
/// so gaps in either table give NaN leads.
Panel assemble_panel(const Panel& calls, const Panel& fundamentals, const AssembleOptions& options = {},
                     AssembleReport* report = nullptr);

}  // namespace expectq
