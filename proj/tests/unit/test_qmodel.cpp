#include "expectq/econometrics.hpp"
#include "expectq/error.hpp"
#include "expectq/qmodel.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

using namespace expectq;

namespace {

// Golden-section search, independent of the library's bisection.
double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-12) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

RegressionSpec capex_spec() {
    RegressionSpec s;
    s.name = "capex";
    s.dependent = "capital_expenditure_pct";
    s.lead = 2;
    s.regressors = {"score_investment", "total_q"};
    return s;
}

RegressionSpec alpha_spec() {
    RegressionSpec s;
    s.name = "alpha";
    s.dependent = "ff5_alpha_q";
    s.lead = 1;
    s.regressors = {"score_investment"};
    return s;
}

}  // namespace

TEST_CASE("closed forms") {
    ModelParams p;
    p.c1 = 0.0;
    p.c2 = 0.5;
    CHECK(optimal_investment(1.0, p, 2.0) == doctest::Approx(2.0));
    p.c1 = 0.3;
    CHECK(optimal_investment(0.3, p, 2.0) == doctest::Approx(0.0));
    CHECK(optimal_investment(0.1, p, 2.0) < 0.0);

    ModelParams base;
    base.q_m = 0.0;
    CHECK(disclosure_return(base) == doctest::Approx(1.0));
    CHECK(expected_return(base) == doctest::Approx(1.1));
    base.q_m = 0.1;
    CHECK(expected_return(base) == doctest::Approx(1.0));
    CHECK(expected_return(base, -0.1) == doctest::Approx(1.1));
    CHECK_THROWS_AS(expected_return(base, -2.0), Error);

    CHECK(adjustment_cost(1.0, ModelParams{}) == doctest::Approx(0.5));
    // V = aK - c2 I^2/K + ((1-d)K + I) q with I = K q/(2 c2)
    ModelParams v;
    const double I = optimal_investment(1.2, v, v.K);
    CHECK(optimal_value(1.2, v) == doctest::Approx(1.1 - 0.5 * I * I + (0.9 + I) * 1.2));
}

TEST_CASE("parameter validation") {
    ModelParams p;
    p.c2 = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    CHECK_THROWS_AS(optimal_investment(1.0, p, 1.0), Error);
    p.c2 = -1.0;
    CHECK_THROWS_AS(evaluate(p), Error);
    ModelParams k;
    k.K = 0.0;
    CHECK_THROWS_AS(k.validate(), Error);
    ModelParams d;
    d.delta = 1.5;
    CHECK_THROWS_AS(d.validate(), Error);
    ModelParams c;
    c.c1 = -0.1;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("evaluate identities") {
    ModelParams p;
    p.q_m = 0.07;
    p.K = 1.7;
    p.delta = 0.15;
    const auto o = evaluate(p);
    CHECK(o.K_next == doctest::Approx((1.0 - p.delta) * p.K + o.I_next).epsilon(1e-14));
    CHECK(o.short_return == doctest::Approx(o.V_post / o.V_pre).epsilon(1e-14));
    CHECK(o.expected_return == doctest::Approx(p.a / (p.q_e + p.q_m)).epsilon(1e-14));
}

TEST_CASE("monotonicity over the baseline grid") {
    const auto grid = baseline_grid();
    CHECK(grid.param_sets.size() >= 10);
    CHECK(grid.q_m.size() == 101);
    CHECK(grid.q_m.front() == doctest::Approx(-0.2));
    CHECK(grid.q_m.back() == doctest::Approx(0.2));

    for (const auto& base : grid.param_sets) {
        ModelOutcome prev;
        bool first = true;
        for (double m : grid.q_m) {
            ModelParams p = base;
            p.q_m = m;
            const auto o = evaluate(p);
            if (!first) {
                CHECK(o.I_next > prev.I_next);
                CHECK(o.short_return > prev.short_return);
                CHECK(o.expected_return < prev.expected_return);
            }
            prev = o;
            first = false;
        }
    }
    const auto report = verify_propositions(grid);
    CHECK(report.all_passed());
    CHECK(report.param_sets == grid.param_sets.size());
    CHECK(report.rejected.empty());
    for (const auto& c : report.checks) CHECK(c.comparisons == grid.param_sets.size() * 100);
    CHECK(report.max_slope_rel_error < 1e-6);
    CHECK(report.max_closed_form_gap < 1e-6);

    std::ostringstream text;
    write_proposition_text(report, text);
    CHECK(text.str().find("3/3 propositions pass") != std::string::npos);
}

TEST_CASE("investment slope in q") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> c2(0.1, 3.0), k(0.2, 5.0), q(0.2, 2.0), c1(0.0, 0.5);
    for (int i = 0; i < 200; ++i) {
        ModelParams p;
        p.c1 = c1(rng);
        p.c2 = c2(rng);
        p.K = k(rng);
        const double x = q(rng), h = 1e-4;
        const double fd = (optimal_investment(x + h, p, p.K) - optimal_investment(x - h, p, p.K)) / (2.0 * h);
        CHECK(std::abs(fd - p.K / (2.0 * p.c2)) / (p.K / (2.0 * p.c2)) < 1e-6);
    }
}

TEST_CASE("closed-form investment maximizes firm value") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> c2(0.1, 3.0), k(0.2, 5.0), q(0.2, 2.0), c1(0.0, 0.5);
    for (int i = 0; i < 100; ++i) {
        ModelParams p;
        p.c1 = c1(rng);
        p.c2 = c2(rng);
        p.K = k(rng);
        const double x = q(rng);
        const double closed = optimal_investment(x, p, p.K);
        auto f = [&](double I) { return firm_value(I, x, p); };
        const double w = 10.0 * p.K * (1.0 + x) / p.c2;
        CHECK(std::abs(golden_max(f, -w, w) - closed) < 1e-6 * (1.0 + std::abs(closed)));
        CHECK(std::abs(maximize_concave(f, -w, w) - closed) < 1e-8 * (1.0 + std::abs(closed)));
    }
    CHECK_THROWS_AS(maximize_concave([](double) { return 0.0; }, 1.0, 1.0), Error);
}

TEST_CASE("linspace") {
    const auto g = linspace(-1.0, 1.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g[1] == doctest::Approx(-0.5));
    CHECK(g[2] == doctest::Approx(0.0));
    CHECK_THROWS_AS(linspace(0.0, 1.0, 1), Error);
}

TEST_CASE("expected return averaged over the q shock") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> eps(0.0, 0.1);
    std::vector<double> draws(20000);
    for (auto& e : draws) e = std::clamp(eps(rng), -0.5, 0.5);
    auto mc = [&](double q_m) {
        ModelParams p;
        p.q_m = q_m;
        double s = 0.0;
        for (double e : draws) s += expected_return(p, e);
        return s / static_cast<double>(draws.size());
    };
    double prev = std::numeric_limits<double>::infinity();
    for (double m : linspace(-0.2, 0.2, 21)) {
        const double v = mc(m);
        CHECK(v < prev);
        // convexity of a/q puts the average above the value at the mean shock
        ModelParams p;
        p.q_m = m;
        CHECK(v > expected_return(p));
        prev = v;
    }
}

TEST_CASE("parameter grid JSON") {
    const auto g = grid_from_json(nlohmann::json::parse(
        R"({"base": {"c2": 0.8}, "param_sets": [{}, {"K": 0.5}], "q_m": {"min": -0.1, "max": 0.1, "points": 11}})"));
    REQUIRE(g.param_sets.size() == 2);
    CHECK(g.param_sets[1].K == doctest::Approx(0.5));
    CHECK(g.param_sets[1].c2 == doctest::Approx(0.8));
    CHECK(g.q_m.size() == 11);
    const auto listed = grid_from_json(nlohmann::json::parse(R"({"q_m": [-0.1, 0.0, 0.1]})"));
    CHECK(listed.param_sets.size() == 1);
    CHECK(listed.q_m.size() == 3);
    CHECK_THROWS_AS(grid_from_json(nlohmann::json::parse(R"({"base": {}})")), Error);
    CHECK_FALSE(g.param_sets.empty());
    CHECK(g.q_m.size() >= 3);
    CHECK(verify_propositions(g).all_passed());
    CHECK_THROWS_AS(params_from_json(nlohmann::json::parse(R"({"gamma": 1})")), Error);
}

TEST_CASE("simulation is bit-reproducible per seed") {
    SimulationConfig c;
    c.n_firms = 40;
    c.n_quarters = 12;
    const auto a = simulate_panel(c);
    const auto b = simulate_panel(c);
    REQUIRE(a.panel.rows() == 480);
    for (const auto& name : {"score_investment", "total_q", "capital_expenditure_pct", "ff5_alpha_q"}) {
        const auto& x = a.panel.column(name);
        const auto& y = b.panel.column(name);
        CHECK(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
    }
    c.seed += 1;
    CHECK(simulate_panel(c).panel.column("score_investment") != a.panel.column("score_investment"));
    for (double s : a.panel.column("score_investment")) {
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
    }
}

TEST_CASE("zero-noise simulation is recovered exactly") {
    SimulationConfig c;
    c.n_firms = 60;
    c.n_quarters = 16;
    c.noise_sd = 0.0;
    c.return_noise_sd = 0.0;
    const auto sim = simulate_panel(c);
    const auto capex = fe_ols(capex_spec(), sim.panel);
    CHECK(capex.coefficient("score_investment") == doctest::Approx(c.beta_score).epsilon(1e-8));
    CHECK(capex.coefficient("total_q") == doctest::Approx(c.beta_q).epsilon(1e-8));
    const auto ret = fe_ols(alpha_spec(), sim.panel);
    CHECK(ret.coefficient("score_investment") == doctest::Approx(c.beta_return).epsilon(1e-8));
}

TEST_CASE("planted coefficients recovered at full size") {
    const SimulationConfig c;  // 500 firms x 40 quarters
    const auto sim = simulate_panel(c);
    CHECK(sim.truth.rows == 20000);
    const auto capex = fe_ols(capex_spec(), sim.panel);
    const auto ret = fe_ols(alpha_spec(), sim.panel);
    CHECK(std::abs(capex.coefficient("score_investment") - 0.638) <= 0.1 * 0.638);
    CHECK(std::abs(ret.coefficient("score_investment") + 9.795) <= 0.1 * 9.795);
    CHECK(capex.t_stat("score_investment") > 2.58);
    CHECK(ret.t_stat("score_investment") < -2.58);

    CHECK(std::abs(sim.truth.standardized_effect - 0.034) <= 0.002);
    CHECK(std::abs(standardized_effect(capex, "score_investment") - 0.034) <= 0.002);
}

TEST_CASE("several seeds recover the planted investment coefficient") {
    SimulationConfig c;
    c.n_firms = 200;
    c.n_quarters = 20;
    double sum = 0.0;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        c.seed = s;
        sum += fe_ols(capex_spec(), simulate_panel(c).panel).coefficient("score_investment");
    }
    CHECK(std::abs(sum / 5.0 - c.beta_score) < 0.05);
}

TEST_CASE("simulation settings and truth JSON") {
    SimulationConfig c;
    c.n_firms = 10;
    c.n_quarters = 5;
    c.beta_score = 1.5;
    const auto sim = simulate_panel(c);
    const auto back = truth_from_json(nlohmann::json::parse(truth_to_json(sim.truth).dump()));
    CHECK(back.rows == sim.truth.rows);
    CHECK(back.standardized_effect == doctest::Approx(sim.truth.standardized_effect));
    CHECK(back.config.beta_score == doctest::Approx(1.5));
    CHECK(back.config.seed == c.seed);
    CHECK(back.config.n_firms == 10);

    const auto parsed = simulation_from_json(nlohmann::json::parse(R"({"n_firms": 7, "beta_return": -2})"));
    CHECK(parsed.n_firms == 7);
    CHECK(parsed.beta_return == doctest::Approx(-2.0));
    CHECK_THROWS_AS(simulation_from_json(nlohmann::json::parse(R"({"n_firm": 7})")), Error);

    SimulationConfig bad;
    bad.n_quarters = 2;
    bad.score_lead = 2;
    CHECK_THROWS_AS(simulate_panel(bad), Error);
}
