#include "expectq/qmodel.hpp"

#include "expectq/csv.hpp"
#include "expectq/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace expectq {

bool PropositionReport::all_passed() const noexcept {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points < 2) throw Error(Errc::InvalidArgument, "linspace needs at least two points");
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    out.back() = hi;
    return out;
}

PropositionGrid baseline_grid() {
    PropositionGrid g;
    const ModelParams base;
    g.param_sets.push_back(base);
    auto vary = [&](double ModelParams::*field, std::initializer_list<double> values) {
        for (double v : values) {
            ModelParams p = base;
            p.*field = v;
            g.param_sets.push_back(p);
        }
    };
    vary(&ModelParams::a, {0.9, 1.3});
    vary(&ModelParams::c1, {0.05, 0.1});
    vary(&ModelParams::c2, {0.25, 1.0, 2.0});
    vary(&ModelParams::delta, {0.05, 0.2});
    vary(&ModelParams::K, {0.5, 2.0});
    vary(&ModelParams::q_e, {0.8, 1.5});
    g.q_m = linspace(-0.2, 0.2, 101);
    return g;
}

double maximize_concave(const std::function<double(double)>& f, double lo, double hi, double step) {
    if (!(lo < hi)) throw Error(Errc::InvalidArgument, "maximize_concave: empty bracket");
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid + step) - f(mid - step) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

PropositionReport verify_propositions(const PropositionGrid& grid) {
    PropositionReport report;
    report.checks = {
        {"investment", "optimal investment strictly increasing in the managerial signal", 0, {}},
        {"short_return", "disclosure return strictly increasing in the managerial signal", 0, {}},
        {"expected_return", "expected return strictly decreasing in the managerial signal", 0, {}},
    };
    report.grid_points = grid.q_m.size();
    std::vector<double> qm = grid.q_m;
    std::sort(qm.begin(), qm.end());

    for (std::size_t s = 0; s < grid.param_sets.size(); ++s) {
        const auto& base = grid.param_sets[s];
        std::vector<ModelOutcome> out;
        try {
            base.validate();
            for (double m : qm) {
                ModelParams p = base;
                p.q_m = m;
                out.push_back(evaluate(p));
            }
        } catch (const Error& e) {
            report.rejected.push_back(fmt::format("set {}: {}", s, e.what()));
            continue;
        }
        ++report.param_sets;

        for (std::size_t i = 1; i < qm.size(); ++i) {
            ModelParams p = base;
            p.q_m = qm[i - 1];
            const auto& lo = out[i - 1];
            const auto& hi = out[i];
            auto record = [&](PropositionCheck& c, double a, double b, bool ok) {
                ++c.comparisons;
                if (!ok) c.violations.push_back({p, qm[i - 1], qm[i], a, b});
            };
            record(report.checks[0], lo.I_next, hi.I_next, hi.I_next > lo.I_next);
            record(report.checks[1], lo.short_return, hi.short_return, hi.short_return > lo.short_return);
            record(report.checks[2], lo.expected_return, hi.expected_return, hi.expected_return < lo.expected_return);
        }

        const double slope = base.K / (2.0 * base.c2);
        for (double m : qm) {
            const double q = base.q_e + m;
            const double h = 1e-4;
            const double fd = (optimal_investment(q + h, base, base.K) - optimal_investment(q - h, base, base.K)) / (2 * h);
            report.max_slope_rel_error = std::max(report.max_slope_rel_error, std::abs(fd - slope) / slope);

            const double closed = optimal_investment(q, base, base.K);
            const double width = 10.0 * base.K * (1.0 + std::abs(q) + base.c1) / base.c2;
            const double numeric = maximize_concave([&](double I) { return firm_value(I, q, base); }, -width, width);
            report.max_closed_form_gap = std::max(report.max_closed_form_gap, std::abs(numeric - closed));
        }
    }
    return report;
}

void write_proposition_text(const PropositionReport& report, std::ostream& out) {
    std::size_t passed = 0;
    for (const auto& c : report.checks) {
        out << fmt::format("{:<16} {}: {} ({} comparisons, {} violations)\n", c.name, c.statement,
                           c.passed() ? "PASS" : "FAIL", c.comparisons, c.violations.size());
        for (std::size_t i = 0; i < c.violations.size() && i < 5; ++i) {
            const auto& v = c.violations[i];
            out << fmt::format("    a={} c1={} c2={} delta={} K={} q_e={}: q_m {} -> {} gives {} -> {}\n", v.params.a,
                               v.params.c1, v.params.c2, v.params.delta, v.params.K, v.params.q_e, v.q_m_lo, v.q_m_hi,
                               v.value_lo, v.value_hi);
        }
        if (c.passed()) ++passed;
    }
    out << fmt::format("dI/dq vs K/(2 c2): max relative error {:.3g}\n", report.max_slope_rel_error);
    out << fmt::format("closed-form vs numeric optimal investment: max gap {:.3g}\n", report.max_closed_form_gap);
    for (const auto& r : report.rejected) out << "rejected " << r << '\n';
    out << fmt::format("{}/{} propositions pass over {} parameter sets x {} q_m points\n", passed, report.checks.size(),
                       report.param_sets, report.grid_points);
}

void write_grid_csv(const PropositionGrid& grid, std::ostream& out) {
    write_csv_row(out, std::vector<std::string>{"set", "a", "c1", "c2", "delta", "K", "q_e", "q_m", "I_next", "K_next",
                                                "V_pre", "V_post", "short_return", "expected_return"});
    for (std::size_t s = 0; s < grid.param_sets.size(); ++s) {
        for (double m : grid.q_m) {
            ModelParams p = grid.param_sets[s];
            p.q_m = m;
            ModelOutcome o;
            try {
                o = evaluate(p);
            } catch (const Error&) {
                continue;
            }
            std::vector<std::string> row{fmt::format("{}", s)};
            for (double v : {p.a, p.c1, p.c2, p.delta, p.K, p.q_e, p.q_m, o.I_next, o.K_next, o.V_pre, o.V_post,
                             o.short_return, o.expected_return})
                row.push_back(format_number(v));
            write_csv_row(out, row);
        }
    }
}

PropositionGrid grid_from_json(const nlohmann::json& j) {
    PropositionGrid g;
    try {
        ModelParams base = params_from_json(j.value("base", nlohmann::json::object()));
        if (j.contains("param_sets"))
            for (const auto& p : j["param_sets"]) g.param_sets.push_back(params_from_json(p, base));
        else
            g.param_sets.push_back(base);
        const auto& q = j.at("q_m");
        if (q.is_array()) g.q_m = q.get<std::vector<double>>();
        else g.q_m = linspace(q.at("min").get<double>(), q.at("max").get<double>(), q.at("points").get<std::size_t>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("bad parameter grid: {}", e.what()));
    }
    return g;
}

PropositionGrid read_grid_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, fmt::format("cannot open {}", path.string()));
    try {
        return grid_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("{}: {}", path.string(), e.what()));
    }
}

}  // namespace expectq
