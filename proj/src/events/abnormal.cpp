#include "internal.hpp"

#include "expectq/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace expectq {

double annualized_alpha(std::span<const double> monthly_abnormal) {
    if (monthly_abnormal.empty()) throw Error(Errc::EmptyInput, "no monthly abnormal returns");
    double sum = 0.0;
    for (double a : monthly_abnormal) sum += a;
    return sum / static_cast<double>(monthly_abnormal.size()) * 12.0 * 100.0;
}

namespace {

int first_month(FiscalQuarter q) { return q.year * 12 + (q.quarter - 1) * 3; }

}  // namespace

double adjusted_quarterly_return(const ReturnSeries& monthly, const FactorPanel& factors, const FactorModel& model,
                                 FiscalQuarter quarter, const QuarterlyOptions& options) {
    const int m0 = first_month(quarter);
    const auto k = static_cast<Eigen::Index>(model.factors.size());

    std::vector<double> excess;
    std::vector<Eigen::VectorXd> frows;
    for (int m = m0; m < m0 + 3; ++m) {
        auto r = monthly.at(m);
        auto pos = factors.position(m);
        if (!r || !pos)
            throw Error(Errc::IncompleteQuarter,
                        fmt::format("firm {}: {} lacks month {}", monthly.firm_id, to_string(quarter), m - m0 + 1));
        excess.push_back(*r - factors.rf[*pos]);
        frows.push_back(detail::factor_row(factors, model, *pos));
    }

    std::vector<double> ys;
    std::vector<Eigen::VectorXd> fs;
    for (int m = m0 - options.estimation_months; m < m0; ++m) {
        auto r = monthly.at(m);
        auto pos = factors.position(m);
        if (!r || !pos) continue;
        auto f = detail::factor_row(factors, model, *pos);
        if (!f.allFinite()) continue;
        ys.push_back(*r - factors.rf[*pos]);
        fs.push_back(std::move(f));
    }
    if (static_cast<int>(ys.size()) < std::max(options.min_months, static_cast<int>(k) + 2))
        throw Error(Errc::InsufficientHistory,
                    fmt::format("firm {}: {} months of history before {} (need {})", monthly.firm_id, ys.size(),
                                to_string(quarter), options.min_months));
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
    Eigen::MatrixXd f(y.size(), k);
    for (std::size_t i = 0; i < fs.size(); ++i) f.row(static_cast<Eigen::Index>(i)) = fs[i].transpose();
    const auto loadings = detail::fit_loadings(y, f, model.factors);

    std::vector<double> abnormal;
    for (std::size_t i = 0; i < 3; ++i) abnormal.push_back(excess[i] - loadings.beta.dot(frows[i]));
    return annualized_alpha(abnormal);
}

double raw_quarterly_return(const ReturnSeries& monthly, FiscalQuarter quarter) {
    const int m0 = first_month(quarter);
    double gross = 1.0;
    for (int m = m0; m < m0 + 3; ++m) {
        auto r = monthly.at(m);
        if (!r)
            throw Error(Errc::IncompleteQuarter,
                        fmt::format("firm {}: {} lacks month {}", monthly.firm_id, to_string(quarter), m - m0 + 1));
        gross *= 1.0 + *r;
    }
    return (gross - 1.0) * 4.0 * 100.0;
}

double earnings_surprise(double eps_t, double eps_t_minus_4, double price_t) {
    if (!(price_t > 0.0)) throw Error(Errc::NonpositivePrice, fmt::format("price {} is not positive", price_t));
    return (eps_t - eps_t_minus_4) / price_t;
}

double analyst_forecast_change(double pre_consensus, double post_consensus, double capex_t) {
    if (!(capex_t > 0.0)) throw Error(Errc::NonpositiveCapex, fmt::format("capex {} is not positive", capex_t));
    return (post_consensus - pre_consensus) / capex_t * 100.0;
}

std::vector<EventRow> compute_events(std::span<const EventInput> inputs, const MarketData& data,
                                     const EventOptions& options) {
    std::map<std::string, ReturnSeries, std::less<>> derived;
    auto monthly_for = [&](const std::string& firm) -> const ReturnSeries* {
        if (auto it = data.monthly.find(firm); it != data.monthly.end()) return &it->second;
        if (auto it = derived.find(firm); it != derived.end()) return &it->second;
        auto d = data.daily.find(firm);
        if (d == data.daily.end()) return nullptr;
        return &derived.emplace(firm, monthly_returns(d->second)).first->second;
    };

    std::vector<EventRow> rows;
    rows.reserve(inputs.size());
    for (const auto& in : inputs) {
        EventRow row;
        row.call_id = in.call_id;
        row.firm_id = in.firm_id;
        row.fiscal_quarter = in.fiscal_quarter;
        auto fail = [&](std::string_view field, std::string_view why) {
            row.errors.push_back(fmt::format("{}: {}", field, why));
        };

        if (auto it = data.daily.find(in.firm_id); it == data.daily.end()) {
            fail("car", "no daily returns for firm");
        } else {
            try {
                const auto loadings = estimate_betas(it->second, data.daily_factors, in.call_date, options.betas);
                for (int h : options.car_horizons) {
                    double* slot = h == 1 ? &row.car_0_1 : h == 3 ? &row.car_0_3 : h == 5 ? &row.car_0_5 : nullptr;
                    if (!slot) continue;
                    try {
                        *slot = car(it->second, data.daily_factors, loadings, in.call_date, h);
                    } catch (const Error& e) {
                        fail(fmt::format("car_0_{}", h), e.what());
                    }
                }
            } catch (const Error& e) {
                fail("car", e.what());
            }
        }

        if (const auto* monthly = monthly_for(in.firm_id); !monthly) {
            fail("alpha", "no monthly returns for firm");
        } else if (!data.monthly_factors.keys.empty()) {
            const std::pair<const char*, FactorModel> models[] = {{"ff5_alpha_q", ff5()}, {"q5_alpha_q", q5()}};
            for (const auto& [field, model] : models) {
                try {
                    const double v = adjusted_quarterly_return(*monthly, data.monthly_factors, model, in.fiscal_quarter,
                                                               options.quarterly);
                    (std::string_view(field) == "ff5_alpha_q" ? row.ff5_alpha_q : row.q5_alpha_q) = v;
                } catch (const Error& e) {
                    fail(field, e.what());
                }
            }
            try {
                row.ret_q = raw_quarterly_return(*monthly, in.fiscal_quarter);
            } catch (const Error& e) {
                fail("ret_q", e.what());
            }
        }

        if (!std::isnan(in.eps_t) && !std::isnan(in.eps_t_minus_4)) {
            try {
                row.earnings_surprise = earnings_surprise(in.eps_t, in.eps_t_minus_4, in.price_t);
            } catch (const Error& e) {
                fail("earnings_surprise", e.what());
            }
        }
        if (!std::isnan(in.consensus_pre) && !std::isnan(in.consensus_post)) {
            try {
                row.analyst_forecast_change = analyst_forecast_change(in.consensus_pre, in.consensus_post, in.capex_t);
            } catch (const Error& e) {
                fail("analyst_forecast_change", e.what());
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace expectq
