#include "expectq/qmodel.hpp"

#include "expectq/calendar.hpp"
#include "expectq/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace expectq {

void SimulationConfig::validate() const {
    params.validate();
    if (n_firms < 2 || n_quarters < 2) throw Error(Errc::InvalidArgument, "simulation needs >= 2 firms and quarters");
    if (score_lead < 0 || return_lead < 0) throw Error(Errc::InvalidArgument, "negative lead");
    if (static_cast<std::size_t>(std::max(score_lead, return_lead)) >= n_quarters)
        throw Error(Errc::InvalidArgument, "lead exceeds the simulated horizon");
    if (!(score_q_corr >= -1.0 && score_q_corr <= 1.0)) throw Error(Errc::InvalidArgument, "score_q_corr outside [-1, 1]");
    for (double sd : {score_firm_sd, score_sd, q_firm_sd, q_sd, firm_effect_sd, time_effect_sd, noise_sd, return_firm_sd,
                      return_time_sd, return_noise_sd})
        if (!(sd >= 0.0)) throw Error(Errc::InvalidArgument, "negative standard deviation");
}

namespace {

double sample_sd(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

SimulationResult simulate_panel(const SimulationConfig& c) {
    c.validate();
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&] { return normal(rng); };

    const std::size_t nf = c.n_firms, nq = c.n_quarters;
    std::vector<double> firm_fe(nf), score_mean(nf), q_mean(nf), ret_fe(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        firm_fe[i] = 10.0 + c.firm_effect_sd * draw();
        score_mean[i] = 0.1 + c.score_firm_sd * draw();
        q_mean[i] = c.params.q_e + c.q_firm_sd * draw();
        ret_fe[i] = c.return_firm_sd * draw();
    }
    std::vector<double> time_fe(nq), ret_time(nq);
    for (std::size_t t = 0; t < nq; ++t) {
        time_fe[t] = c.time_effect_sd * draw();
        ret_time[t] = c.return_time_sd * draw();
    }

    SimulationResult out;
    auto& panel = out.panel;
    std::vector<double> score, q, capex, ret;
    const double rho = c.score_q_corr;
    const int first_period = FiscalQuarter{c.first_year, 1}.index();
    for (std::size_t i = 0; i < nf; ++i) {
        const std::string firm = fmt::format("F{:04d}", i + 1);
        const std::size_t base = score.size();
        for (std::size_t t = 0; t < nq; ++t) {
            const double z = draw(), w = draw(), e = draw(), u = draw();
            const double s = std::clamp(score_mean[i] + c.score_sd * z, -1.0, 1.0);
            const double qq = std::max(0.05, q_mean[i] + c.q_sd * (rho * z + std::sqrt(1.0 - rho * rho) * w));
            double y = firm_fe[i] + time_fe[t] + c.noise_sd * e;
            if (t >= static_cast<std::size_t>(c.score_lead)) {
                const std::size_t lag = base + t - static_cast<std::size_t>(c.score_lead);
                y += c.beta_score * score[lag] + c.beta_q * q[lag];
            }
            double r = ret_fe[i] + ret_time[t] + c.return_noise_sd * u;
            if (t >= static_cast<std::size_t>(c.return_lead))
                r += c.beta_return * score[base + t - static_cast<std::size_t>(c.return_lead)];

            score.push_back(s);
            q.push_back(qq);
            capex.push_back(y);
            ret.push_back(r);
            const int period = first_period + static_cast<int>(t);
            panel.add_row(firm, period, fmt::format("IND{:02d}", i % 10),
                          fmt::format("{}-{}", firm, to_string(FiscalQuarter::from_index(period))));
        }
    }
    panel.set_column("score_investment", score);
    panel.set_column("total_q", q);
    panel.set_column("capital_expenditure_pct", capex);
    panel.set_column("ff5_alpha_q", ret);

    std::vector<double> s_used, y_used;
    for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t t = 0; t + static_cast<std::size_t>(c.score_lead) < nq; ++t) {
            s_used.push_back(score[i * nq + t]);
            y_used.push_back(capex[i * nq + t + static_cast<std::size_t>(c.score_lead)]);
        }
    out.truth.config = c;
    out.truth.rows = panel.rows();
    out.truth.standardized_effect = c.beta_score * sample_sd(s_used) / sample_sd(y_used);
    return out;
}

nlohmann::ordered_json params_to_json(const ModelParams& p) {
    return {{"a", p.a}, {"c1", p.c1}, {"c2", p.c2}, {"delta", p.delta}, {"K", p.K},
            {"q_e", p.q_e}, {"q_m", p.q_m}, {"eps_sd", p.eps_sd}};
}

ModelParams params_from_json(const nlohmann::json& j, ModelParams p) {
    static const std::pair<const char*, double ModelParams::*> fields[] = {
        {"a", &ModelParams::a},   {"c1", &ModelParams::c1},   {"c2", &ModelParams::c2},   {"delta", &ModelParams::delta},
        {"K", &ModelParams::K},   {"q_e", &ModelParams::q_e}, {"q_m", &ModelParams::q_m}, {"eps_sd", &ModelParams::eps_sd}};
    for (const auto& [key, value] : j.items()) {
        auto it = std::find_if(std::begin(fields), std::end(fields), [&](const auto& f) { return key == f.first; });
        if (it == std::end(fields)) throw Error(Errc::ConfigError, fmt::format("unknown model parameter '{}'", key));
        p.*(it->second) = value.get<double>();
    }
    return p;
}

namespace {

struct DoubleField {
    const char* name;
    double SimulationConfig::*ptr;
};
constexpr DoubleField kSimDoubles[] = {
    {"beta_score", &SimulationConfig::beta_score},
    {"beta_q", &SimulationConfig::beta_q},
    {"beta_return", &SimulationConfig::beta_return},
    {"score_firm_sd", &SimulationConfig::score_firm_sd},
    {"score_sd", &SimulationConfig::score_sd},
    {"q_firm_sd", &SimulationConfig::q_firm_sd},
    {"q_sd", &SimulationConfig::q_sd},
    {"score_q_corr", &SimulationConfig::score_q_corr},
    {"firm_effect_sd", &SimulationConfig::firm_effect_sd},
    {"time_effect_sd", &SimulationConfig::time_effect_sd},
    {"noise_sd", &SimulationConfig::noise_sd},
    {"return_firm_sd", &SimulationConfig::return_firm_sd},
    {"return_time_sd", &SimulationConfig::return_time_sd},
    {"return_noise_sd", &SimulationConfig::return_noise_sd},
};

}  // namespace

SimulationConfig simulation_from_json(const nlohmann::json& j, SimulationConfig c) {
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "n_firms") c.n_firms = value.get<std::size_t>();
            else if (key == "n_quarters") c.n_quarters = value.get<std::size_t>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "score_lead") c.score_lead = value.get<int>();
            else if (key == "return_lead") c.return_lead = value.get<int>();
            else if (key == "first_year") c.first_year = value.get<int>();
            else if (key == "params") c.params = params_from_json(value, c.params);
            else {
                auto it = std::find_if(std::begin(kSimDoubles), std::end(kSimDoubles),
                                       [&](const auto& f) { return key == f.name; });
                if (it == std::end(kSimDoubles))
                    throw Error(Errc::ConfigError, fmt::format("unknown simulation setting '{}'", key));
                c.*(it->ptr) = value.get<double>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("bad simulation settings: {}", e.what()));
    }
    return c;
}

nlohmann::ordered_json truth_to_json(const PlantedTruth& t) {
    const auto& c = t.config;
    nlohmann::ordered_json j;
    j["n_firms"] = c.n_firms;
    j["n_quarters"] = c.n_quarters;
    j["seed"] = c.seed;
    j["score_lead"] = c.score_lead;
    j["return_lead"] = c.return_lead;
    j["first_year"] = c.first_year;
    for (const auto& f : kSimDoubles) j[f.name] = c.*(f.ptr);
    j["params"] = params_to_json(c.params);
    j["rows"] = t.rows;
    j["standardized_effect"] = t.standardized_effect;
    return j;
}

PlantedTruth truth_from_json(const nlohmann::json& j) {
    PlantedTruth t;
    nlohmann::json settings = j;
    try {
        t.rows = settings.at("rows").get<std::size_t>();
        t.standardized_effect = settings.at("standardized_effect").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("bad truth record: {}", e.what()));
    }
    settings.erase("rows");
    settings.erase("standardized_effect");
    t.config = simulation_from_json(settings);
    return t;
}

}  // namespace expectq
