#include "expectq/error.hpp"
#include "expectq/events.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace expectq;

namespace {

Date ymd(int y, unsigned m, unsigned d) {
    return std::chrono::sys_days{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

// Daily calendar of `n` consecutive days starting 2015-01-01, Carhart factors.
FactorPanel daily_panel(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> f(0.0, 0.01);
    FactorPanel p;
    p.names = carhart4().factors;
    p.columns.resize(p.names.size());
    const int k0 = day_key(ymd(2015, 1, 1));
    for (int i = 0; i < n; ++i) {
        p.keys.push_back(k0 + i);
        for (auto& c : p.columns) c.push_back(f(rng));
        p.rf.push_back(0.0001);
    }
    return p;
}

ReturnSeries stock_from(const FactorPanel& p, const std::vector<double>& beta, double alpha, double noise,
                        std::mt19937_64& rng) {
    std::normal_distribution<double> e(0.0, 1.0);
    ReturnSeries s;
    s.firm_id = "F";
    for (std::size_t i = 0; i < p.keys.size(); ++i) {
        double r = p.rf[i] + alpha + noise * e(rng);
        for (std::size_t k = 0; k < beta.size(); ++k) r += beta[k] * p.columns[k][i];
        s.keys.push_back(p.keys[i]);
        s.returns.push_back(r);
    }
    return s;
}

Date date_at(const FactorPanel& p, std::size_t pos) { return date_of_day_key(p.keys[pos]); }

// Monthly panel with the union of ff5 and q5 factors over `months` months from 2005-01.
FactorPanel monthly_panel(std::mt19937_64& rng, int months) {
    std::normal_distribution<double> f(0.0, 0.04);
    FactorPanel p;
    p.names = {"mktrf", "smb", "hml", "rmw", "cma", "q_me", "q_ia", "q_roe", "q_eg"};
    p.columns.resize(p.names.size());
    const int m0 = 2005 * 12;
    for (int i = 0; i < months; ++i) {
        p.keys.push_back(m0 + i);
        for (auto& c : p.columns) c.push_back(f(rng));
        p.rf.push_back(0.002);
    }
    return p;
}

}  // namespace

TEST_CASE("day keys round trip") {
    CHECK(day_key(ymd(1970, 1, 1)) == 0);
    CHECK(day_key(ymd(1970, 1, 2)) == 1);
    CHECK(date_of_day_key(day_key(ymd(2013, 8, 1))) == ymd(2013, 8, 1));
}

TEST_CASE("monthly returns compound the daily series") {
    ReturnSeries d{"F", {day_key(ymd(2015, 1, 30)), day_key(ymd(2015, 1, 31)), day_key(ymd(2015, 2, 2))},
                   {0.10, -0.05, 0.02}};
    const auto m = monthly_returns(d);
    REQUIRE(m.keys.size() == 2);
    CHECK(m.keys[0] == 2015 * 12);
    CHECK(m.returns[0] == doctest::Approx(1.10 * 0.95 - 1.0).epsilon(1e-14));
    CHECK(m.returns[1] == doctest::Approx(0.02));
}

TEST_CASE("betas: pure market exposure") {
    std::mt19937_64 rng(1);
    const auto p = daily_panel(rng, 200);
    ReturnSeries s;
    s.firm_id = "F";
    for (std::size_t i = 0; i < p.keys.size(); ++i) {
        s.keys.push_back(p.keys[i]);
        s.returns.push_back(p.rf[i] + p.column("mktrf")[i]);
    }
    const auto l = estimate_betas(s, p, date_at(p, 150));
    CHECK(l.n_obs == 100);
    CHECK(l.beta(0) == doctest::Approx(1.0).epsilon(1e-10));
    for (int k = 1; k < 4; ++k) CHECK(std::abs(l.beta(k)) < 1e-10);
    CHECK(std::abs(l.alpha) < 1e-10);
}

TEST_CASE("betas: insufficient history") {
    std::mt19937_64 rng(2);
    const auto p = daily_panel(rng, 200);
    const auto s = stock_from(p, {1, 0, 0, 0}, 0.0, 0.01, rng);
    // 30 trading days before day 0
    try {
        estimate_betas(s, p, date_at(p, 30));
        FAIL("expected InsufficientHistory");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InsufficientHistory);
    }
    // 100-day window but the stock trades on only 50 of them
    ReturnSeries sparse{"F", {}, {}};
    for (std::size_t i = 0; i < s.keys.size(); ++i)
        if (i % 2 == 0) {
            sparse.keys.push_back(s.keys[i]);
            sparse.returns.push_back(s.returns[i]);
        }
    CHECK_THROWS_AS(estimate_betas(sparse, p, date_at(p, 150)), Error);
    BetaOptions opt;
    opt.min_obs = 40;
    CHECK(estimate_betas(sparse, p, date_at(p, 150), opt).n_obs == 50);
}

TEST_CASE("betas match the normal equations") {
    std::mt19937_64 rng(3);
    const auto p = daily_panel(rng, 300);
    const auto s = stock_from(p, {1.2, 0.5, -0.3, 0.1}, 0.0002, 0.01, rng);
    const std::size_t day0 = 220;
    const auto l = estimate_betas(s, p, date_at(p, day0));

    oracle::Mat x;
    oracle::Vec y;
    for (std::size_t pos = day0 - 100; pos < day0; ++pos) {
        x.push_back({1.0, p.columns[0][pos], p.columns[1][pos], p.columns[2][pos], p.columns[3][pos]});
        y.push_back(s.returns[pos] - p.rf[pos]);
    }
    const auto b = oracle::ols(x, y);
    CHECK(l.alpha == doctest::Approx(b[0]).epsilon(1e-10));
    for (int k = 0; k < 4; ++k) CHECK(l.beta(k) == doctest::Approx(b[static_cast<std::size_t>(k) + 1]).epsilon(1e-10));
}

TEST_CASE("day 0 is the first trading day on or after the event") {
    std::mt19937_64 rng(4);
    auto p = daily_panel(rng, 10);
    p.keys = {10, 11, 14, 15, 16, 17, 18, 21, 22, 23};
    CHECK(event_day_position(p, date_of_day_key(12)) == 2);
    CHECK(event_day_position(p, date_of_day_key(14)) == 2);
    CHECK(event_day_position(p, date_of_day_key(9)) == 0);
}

TEST_CASE("CAR examples") {
    std::mt19937_64 rng(5);
    const auto p = daily_panel(rng, 200);
    Loadings l;
    l.factors = carhart4().factors;
    l.beta = Eigen::VectorXd::Zero(4);

    ReturnSeries flat{"F", p.keys, p.rf};
    CHECK(car(flat, p, l, date_at(p, 120), 5) == doctest::Approx(0.0));

    ReturnSeries bump = flat;
    bump.returns[120] += 0.005;
    bump.returns[121] += 0.005;
    CHECK(car(bump, p, l, date_at(p, 120), 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(car(bump, p, l, date_at(p, 120), 5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("CAR against a per-day oracle and additivity") {
    std::mt19937_64 rng(6);
    const auto p = daily_panel(rng, 400);
    std::uniform_int_distribution<std::size_t> pick(110, 390);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = stock_from(p, {0.9, 0.2, 0.1, -0.2}, 0.0003, 0.015, rng);
        const auto day0 = pick(rng);
        const auto l = estimate_betas(s, p, date_at(p, day0));
        for (int h : {1, 3, 5}) {
            double sum = 0.0;
            for (int d = 0; d <= h; ++d) {
                const auto pos = day0 + static_cast<std::size_t>(d);
                double fit = 0.0;
                for (int k = 0; k < 4; ++k) fit += l.beta(k) * p.columns[static_cast<std::size_t>(k)][pos];
                sum += s.returns[pos] - p.rf[pos] - fit;
            }
            CHECK(car(s, p, l, date_at(p, day0), h) == doctest::Approx(sum * 100.0).epsilon(1e-10));
        }
        const auto ar = abnormal_returns(s, p, l, date_at(p, day0), 5);
        const double c3 = car(s, p, l, date_at(p, day0), 3);
        const double c5 = car(s, p, l, date_at(p, day0), 5);
        CHECK(c5 == doctest::Approx(c3 + 100.0 * (ar[4] + ar[5])).epsilon(1e-10));
    }
}

TEST_CASE("CAR with exact factor pricing is zero") {
    std::mt19937_64 rng(7);
    const auto p = daily_panel(rng, 200);
    const auto s = stock_from(p, {1.1, -0.4, 0.6, 0.2}, 0.0, 0.0, rng);
    const auto l = estimate_betas(s, p, date_at(p, 150));
    for (int h : {1, 3, 5}) CHECK(std::abs(car(s, p, l, date_at(p, 150), h)) < 1e-8);
}

TEST_CASE("CAR: missing window day") {
    std::mt19937_64 rng(8);
    const auto p = daily_panel(rng, 200);
    auto s = stock_from(p, {1, 0, 0, 0}, 0.0, 0.01, rng);
    const auto l = estimate_betas(s, p, date_at(p, 150));
    s.keys.erase(s.keys.begin() + 152);
    s.returns.erase(s.returns.begin() + 152);
    try {
        car(s, p, l, date_at(p, 150), 3);
        FAIL("expected MissingWindowDay");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MissingWindowDay);
    }
    CHECK_NOTHROW(car(s, p, l, date_at(p, 150), 1));
    CHECK_THROWS_AS(car(s, p, l, date_at(p, 197), 5), Error);
}

TEST_CASE("annualized alpha") {
    const std::vector<double> a{0.01, 0.02, 0.0};
    CHECK(annualized_alpha(a) == doctest::Approx(12.0));
    CHECK_THROWS_AS(annualized_alpha(std::vector<double>{}), Error);

    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0.0, 0.01);
    std::vector<double> x(7), y(7);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = n(rng);
        y[i] = n(rng);
    }
    std::vector<double> comb(7);
    for (std::size_t i = 0; i < x.size(); ++i) comb[i] = 2.0 * x[i] - 3.0 * y[i];
    CHECK(annualized_alpha(comb) ==
          doctest::Approx(2.0 * annualized_alpha(x) - 3.0 * annualized_alpha(y)).epsilon(1e-12));
}

TEST_CASE("quarterly alpha recovers a planted monthly alpha") {
    std::mt19937_64 rng(10);
    const auto p = monthly_panel(rng, 120);
    ReturnSeries m{"F", {}, {}};
    const auto& mk = p.column("mktrf");
    const auto& smb = p.column("smb");
    for (std::size_t i = 0; i < p.keys.size(); ++i) {
        m.keys.push_back(p.keys[i]);
        // 0.5% a month inside the test quarter, zero elsewhere
        const bool in_quarter = p.keys[i] >= 2010 * 12 && p.keys[i] < 2010 * 12 + 3;
        m.returns.push_back(p.rf[i] + 1.1 * mk[i] + 0.3 * smb[i] + (in_quarter ? 0.005 : 0.0));
    }
    const FiscalQuarter q{2010, 1};
    CHECK(adjusted_quarterly_return(m, p, ff5(), q) == doctest::Approx(6.0).epsilon(1e-8));
    // trailing window clear of the planted months: exact pricing, zero alpha
    CHECK(std::abs(adjusted_quarterly_return(m, p, ff5(), FiscalQuarter{2013, 3})) < 1e-8);
    // q5 lacks smb so the loadings absorb it; the planted alpha still surfaces on average
    CHECK(std::isfinite(adjusted_quarterly_return(m, p, q5(), q)));

    QuarterlyOptions opt;
    CHECK_THROWS_AS(adjusted_quarterly_return(m, p, ff5(), FiscalQuarter{2005, 3}, opt), Error);
    CHECK_THROWS_AS(adjusted_quarterly_return(m, p, ff5(), FiscalQuarter{2015, 1}, opt), Error);
}

TEST_CASE("raw quarterly return") {
    ReturnSeries m{"F", {2012 * 12 + 3, 2012 * 12 + 4, 2012 * 12 + 5}, {0.01, 0.02, -0.01}};
    CHECK(raw_quarterly_return(m, FiscalQuarter{2012, 2}) ==
          doctest::Approx((1.01 * 1.02 * 0.99 - 1.0) * 400.0).epsilon(1e-12));
    CHECK_THROWS_AS(raw_quarterly_return(m, FiscalQuarter{2012, 3}), Error);
}

TEST_CASE("earnings surprise and analyst forecast change") {
    CHECK(earnings_surprise(1.10, 1.00, 20.0) == doctest::Approx(0.005));
    try {
        earnings_surprise(1.1, 1.0, 0.0);
        FAIL("expected NonpositivePrice");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonpositivePrice);
    }
    CHECK(analyst_forecast_change(100.0, 110.0, 50.0) == doctest::Approx(20.0));
    try {
        analyst_forecast_change(100.0, 110.0, 0.0);
        FAIL("expected NonpositiveCapex");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonpositiveCapex);
    }
}

TEST_CASE("compute_events fills what it can and records the rest") {
    std::mt19937_64 rng(11);
    MarketData md;
    md.daily_factors = daily_panel(rng, 300);
    md.daily["F"] = stock_from(md.daily_factors, {1.0, 0.2, 0.0, 0.1}, 0.0, 0.01, rng);

    EventInput ok;
    ok.call_id = "c1";
    ok.firm_id = "F";
    ok.call_date = date_at(md.daily_factors, 200);
    ok.fiscal_quarter = FiscalQuarter{2015, 2};
    ok.eps_t = 1.1;
    ok.eps_t_minus_4 = 1.0;
    ok.price_t = 20.0;
    ok.consensus_pre = 100.0;
    ok.consensus_post = 110.0;
    ok.capex_t = 50.0;

    EventInput unknown = ok;
    unknown.call_id = "c2";
    unknown.firm_id = "G";
    unknown.price_t = 0.0;

    const std::vector<EventInput> in{ok, unknown};
    const auto rows = compute_events(in, md);
    REQUIRE(rows.size() == 2);
    CHECK(std::isfinite(rows[0].car_0_1));
    CHECK(std::isfinite(rows[0].car_0_5));
    CHECK(rows[0].earnings_surprise == doctest::Approx(0.005));
    CHECK(rows[0].analyst_forecast_change == doctest::Approx(20.0));
    CHECK(std::isnan(rows[1].car_0_1));
    CHECK(std::isnan(rows[1].earnings_surprise));
    CHECK_FALSE(rows[1].errors.empty());
    CHECK(rows[1].analyst_forecast_change == doctest::Approx(20.0));
}

TEST_CASE("event CSV round trip") {
    EventRow a;
    a.call_id = "c1";
    a.firm_id = "F";
    a.fiscal_quarter = FiscalQuarter{2014, 4};
    a.car_0_1 = 0.25;
    a.ff5_alpha_q = -3.5;
    a.errors = {"car_0_3: no return", "alpha: missing"};
    EventRow b = a;
    b.call_id = "c2";
    b.errors.clear();
    b.earnings_surprise = 0.0125;

    std::stringstream ss;
    const std::vector<EventRow> rows{a, b};
    write_events_csv(rows, ss);
    const auto back = read_events_csv(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[0].call_id == "c1");
    CHECK(back[0].fiscal_quarter == a.fiscal_quarter);
    CHECK(back[0].car_0_1 == doctest::Approx(0.25));
    CHECK(std::isnan(back[0].car_0_3));
    CHECK(back[0].errors == a.errors);
    CHECK(back[1].earnings_surprise == doctest::Approx(0.0125));
    CHECK(back[1].errors.empty());
}

TEST_CASE("factor and return CSV readers") {
    std::istringstream f("date,mktrf,smb,hml,umd,rf\n2015-01-02,0.01,0,0,0,0.0001\n2015-01-05,-0.02,0,0,0,0.0001\n");
    const auto p = read_factors_csv(f, false);
    REQUIRE(p.keys.size() == 2);
    CHECK(p.keys[1] == day_key(ymd(2015, 1, 5)));
    CHECK(p.column("mktrf")[1] == doctest::Approx(-0.02));

    std::istringstream r("firm_id,month,ret\nA,2015-01,0.01\nA,2015-02,0.02\nB,2015-01,-0.5\n");
    const auto m = read_returns_csv(r, true);
    REQUIRE(m.size() == 2);
    CHECK(m.at("A").keys == std::vector<int>{2015 * 12, 2015 * 12 + 1});
    CHECK(m.at("B").returns[0] == doctest::Approx(-0.5));
}
