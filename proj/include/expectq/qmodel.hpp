#pragma once

#include "expectq/panel.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace expectq {

/// Primitives of the three-period disclosure model. Profit is pi(K) = a*K.
struct ModelParams {
    double a = 1.1;       // profit per unit of capital
    double c1 = 0.0;      // linear adjustment cost
    double c2 = 0.5;      // quadratic adjustment cost
    double delta = 0.1;   // depreciation
    double K = 1.0;       // capital in place
    double q_e = 1.0;     // expected component of next-period q
    double q_m = 0.0;     // managerial signal
    double eps_sd = 0.0;  // sd of the mean-zero shock to q (truncated so q > 0)

    /// Throws InvalidArgument outside c1 >= 0, c2 > 0, delta in [0,1], K > 0, eps_sd >= 0.
    void validate() const;
};

struct ModelOutcome {
    double I_next = 0.0;
    double K_next = 0.0;
    double V_pre = 0.0;
    double V_post = 0.0;
    double short_return = 0.0;
    double expected_return = 0.0;
};

/// I = K (q - c1) / (2 c2). Negative values are disinvestment.
double optimal_investment(double q, const ModelParams& p, double K);

/// c1*I + c2*I^2/K
double adjustment_cost(double I, const ModelParams& p);

/// a*K - c(I,K) + ((1-delta)K + I) * expected_q
double firm_value(double I, double expected_q, const ModelParams& p);

/// Value at the optimal investment for the given expectation of q.
double optimal_value(double expected_q, const ModelParams& p);

/// V_post / V_pre with expectations q_e + q_m and q_e. Throws NonpositiveValue.
double disclosure_return(const ModelParams& p);

/// a / q_{t+1} with q_{t+1} = q_e + q_m + eps. Throws NonpositiveQ.
double expected_return(const ModelParams& p, double eps = 0.0);

ModelOutcome evaluate(const ModelParams& p);

// ---------------------------------------------------------------------------
// Propositions
// ---------------------------------------------------------------------------

struct Violation {
    ModelParams params;
    double q_m_lo = 0.0;
    double q_m_hi = 0.0;
    double value_lo = 0.0;
    double value_hi = 0.0;
};

struct PropositionCheck {
    std::string name;
    std::string statement;
    std::size_t comparisons = 0;
    std::vector<Violation> violations;
    bool passed() const noexcept { return comparisons > 0 && violations.empty(); }
};

struct PropositionGrid {
    std::vector<ModelParams> param_sets;
    std::vector<double> q_m;
};

struct PropositionReport {
    std::vector<PropositionCheck> checks;  // investment, short return, expected return
    std::size_t param_sets = 0;
    std::size_t grid_points = 0;
    double max_slope_rel_error = 0.0;      // finite-difference dI/dq vs K/(2 c2)
    double max_closed_form_gap = 0.0;      // numeric argmax of the value vs closed form
    std::vector<std::string> rejected;     // inadmissible parameter sets

    bool all_passed() const noexcept;
};

/// Ten or more admissible parameter sets around a=1.1, c1=0, c2=0.5,
/// delta=0.1, K=1, q_e=1, and a 101-point q_m grid on [-0.2, 0.2].
PropositionGrid baseline_grid();

/// Evenly spaced grid of `points` values on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t points);

/// Checks strict monotonicity of investment (increasing), short return
/// (increasing) and expected return (decreasing) in q_m.
PropositionReport verify_propositions(const PropositionGrid& grid);

/// Argmax of a concave f on [lo, hi]: bisection on the sign of a central
/// finite-difference derivative.
double maximize_concave(const std::function<double(double)>& f, double lo, double hi, double step = 1e-4);

void write_proposition_text(const PropositionReport& report, std::ostream& out);
/// set,a,c1,c2,delta,K,q_e,q_m,I_next,K_next,V_pre,V_post,short_return,expected_return
void write_grid_csv(const PropositionGrid& grid, std::ostream& out);

PropositionGrid grid_from_json(const nlohmann::json& j);
PropositionGrid read_grid_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Synthetic panel
// ---------------------------------------------------------------------------

struct SimulationConfig {
    std::size_t n_firms = 500;
    std::size_t n_quarters = 40;
    std::uint64_t seed = 20240101;
    ModelParams params;

    double beta_score = 0.638;    // capex t+score_lead on score_t
    double beta_q = 0.35;         // capex t+score_lead on total_q_t
    int score_lead = 2;
    double beta_return = -9.795;  // ff5 alpha t+return_lead on score_t
    int return_lead = 1;

    double score_firm_sd = 0.2;
    double score_sd = 0.45;       // within-firm
    double q_firm_sd = 0.4;
    double q_sd = 0.3;
    double score_q_corr = 0.3;
    double firm_effect_sd = 9.0;
    double time_effect_sd = 0.5;
    double noise_sd = 0.8;
    double return_firm_sd = 1.0;
    double return_time_sd = 3.0;
    double return_noise_sd = 10.0;
    int first_year = 2008;

    void validate() const;
};

struct PlantedTruth {
    SimulationConfig config;
    std::size_t rows = 0;
    /// beta_score * sd(score) / sd(capex at t+score_lead) over rows with a lead.
    double standardized_effect = 0.0;
};

struct SimulationResult {
    Panel panel;
    PlantedTruth truth;
};

/// Firm-quarter panel with columns score_investment, total_q,
/// capital_expenditure_pct and ff5_alpha_q generated from the planted
/// linear designs plus firm and time effects. Bit-reproducible per seed.
SimulationResult simulate_panel(const SimulationConfig& config);

nlohmann::ordered_json truth_to_json(const PlantedTruth& truth);
PlantedTruth truth_from_json(const nlohmann::json& j);

ModelParams params_from_json(const nlohmann::json& j, ModelParams base = {});
nlohmann::ordered_json params_to_json(const ModelParams& p);
SimulationConfig simulation_from_json(const nlohmann::json& j, SimulationConfig base = {});

}  // namespace expectq
