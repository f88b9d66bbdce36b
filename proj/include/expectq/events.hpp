#pragma once

#include "expectq/calendar.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace expectq {

/// Day key: days since 1970-01-01. Month key: year*12 + month - 1.
int day_key(Date d) noexcept;
Date date_of_day_key(int key) noexcept;

/// Simple returns of one firm keyed by day or month. Decimal units.
struct ReturnSeries {
    std::string firm_id;
    std::vector<int> keys;  // strictly increasing
    std::vector<double> returns;

    void validate() const;  // returns > -1, keys increasing
    std::optional<double> at(int key) const;
};

/// Compounds daily returns within each calendar month.
ReturnSeries monthly_returns(const ReturnSeries& daily);

/// Factor returns on one calendar (daily or monthly), decimal units.
/// The key list doubles as the trading calendar.
struct FactorPanel {
    std::vector<int> keys;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    std::vector<double> rf;

    void validate() const;
    std::optional<std::size_t> position(int key) const;
    /// First position whose key is >= `key`.
    std::size_t lower_bound(int key) const;
    const std::vector<double>& column(std::string_view name) const;
};

struct FactorModel {
    std::string name;
    std::vector<std::string> factors;
};

FactorModel carhart4();  // mktrf, smb, hml, umd
FactorModel ff5();       // mktrf, smb, hml, rmw, cma
FactorModel q5();        // mktrf, q_me, q_ia, q_roe, q_eg

struct Loadings {
    std::vector<std::string> factors;
    double alpha = 0.0;
    Eigen::VectorXd beta;
    std::size_t n_obs = 0;
};

struct BetaOptions {
    int window = 100;   // trading days before day 0
    int min_obs = 60;
    FactorModel model = carhart4();
};

/// Day 0: first trading day on or after the event date.
std::size_t event_day_position(const FactorPanel& factors, Date event_date);

/// OLS of excess stock return on the model factors (with intercept) over
/// the window of trading days preceding day 0. Throws InsufficientHistory.
Loadings estimate_betas(const ReturnSeries& stock, const FactorPanel& factors, Date event_date,
                        const BetaOptions& options = {});

/// Excess return minus beta'f for trading days 0..horizon. The intercept is
/// not subtracted. Throws MissingWindowDay.
std::vector<double> abnormal_returns(const ReturnSeries& stock, const FactorPanel& factors, const Loadings& loadings,
                                     Date event_date, int horizon);

/// Sum of abnormal returns over days 0..horizon, in percent.
double car(const ReturnSeries& stock, const FactorPanel& factors, const Loadings& loadings, Date event_date,
           int horizon);

/// Mean monthly abnormal return * 12, in percent.
double annualized_alpha(std::span<const double> monthly_abnormal);

struct QuarterlyOptions {
    int estimation_months = 36;  // trailing months before the quarter
    int min_months = 24;
};

/// Annualized mean factor-adjusted monthly return over the three months of
/// `quarter`, loadings from the trailing window. Throws IncompleteQuarter
/// or InsufficientHistory.
double adjusted_quarterly_return(const ReturnSeries& monthly, const FactorPanel& factors, const FactorModel& model,
                                 FiscalQuarter quarter, const QuarterlyOptions& options = {});

/// Compounded raw return over the quarter's three months, annualized (x4), in percent.
double raw_quarterly_return(const ReturnSeries& monthly, FiscalQuarter quarter);

/// (eps_t - eps_{t-4}) / price_t. Throws NonpositivePrice.
double earnings_surprise(double eps_t, double eps_t_minus_4, double price_t);

/// (post - pre) / capex_t * 100. Throws NonpositiveCapex.
double analyst_forecast_change(double pre_consensus, double post_consensus, double capex_t);

// ---------------------------------------------------------------------------
// Batch
// ---------------------------------------------------------------------------

struct EventInput {
    std::string call_id;
    std::string firm_id;
    Date call_date{};
    FiscalQuarter fiscal_quarter;
    double eps_t = std::numeric_limits<double>::quiet_NaN();
    double eps_t_minus_4 = std::numeric_limits<double>::quiet_NaN();
    double price_t = std::numeric_limits<double>::quiet_NaN();
    double consensus_pre = std::numeric_limits<double>::quiet_NaN();
    double consensus_post = std::numeric_limits<double>::quiet_NaN();
    double capex_t = std::numeric_limits<double>::quiet_NaN();
};

struct EventRow {
    std::string call_id;
    std::string firm_id;
    FiscalQuarter fiscal_quarter;
    double car_0_1 = std::numeric_limits<double>::quiet_NaN();
    double car_0_3 = std::numeric_limits<double>::quiet_NaN();
    double car_0_5 = std::numeric_limits<double>::quiet_NaN();
    double ff5_alpha_q = std::numeric_limits<double>::quiet_NaN();
    double q5_alpha_q = std::numeric_limits<double>::quiet_NaN();
    double ret_q = std::numeric_limits<double>::quiet_NaN();
    double earnings_surprise = std::numeric_limits<double>::quiet_NaN();
    double analyst_forecast_change = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> errors;  // "field: reason" for each value left missing
};

struct EventOptions {
    BetaOptions betas;
    QuarterlyOptions quarterly;
    std::vector<int> car_horizons{1, 3, 5};
};

struct MarketData {
    std::map<std::string, ReturnSeries, std::less<>> daily;    // by firm
    std::map<std::string, ReturnSeries, std::less<>> monthly;  // by firm; derived from daily when absent
    FactorPanel daily_factors;
    FactorPanel monthly_factors;
};

/// Computes every EventRow field it can; per-field failures are recorded in
/// `errors` and leave the value missing.
std::vector<EventRow> compute_events(std::span<const EventInput> inputs, const MarketData& data,
                                     const EventOptions& options = {});

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// firm_id,date,ret (date ISO) or firm_id,month,ret (YYYY-MM).
std::map<std::string, ReturnSeries, std::less<>> read_returns_csv(std::istream& in, bool monthly);
/// date,<factor...>,rf or month,<factor...>,rf.
FactorPanel read_factors_csv(std::istream& in, bool monthly);
std::map<std::string, ReturnSeries, std::less<>> read_returns_file(const std::filesystem::path& path, bool monthly);
FactorPanel read_factors_file(const std::filesystem::path& path, bool monthly);

/// call_id,firm_id,fiscal_quarter,car_0_1,car_0_3,car_0_5,ff5_alpha_q,q5_alpha_q,ret_q,
/// earnings_surprise,analyst_forecast_change,errors
void write_events_csv(std::span<const EventRow> rows, std::ostream& out);
std::vector<EventRow> read_events_csv(std::istream& in);

}  // namespace expectq
