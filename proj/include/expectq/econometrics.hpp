#pragma once

#include "expectq/panel.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace expectq {

enum class FeDim { Firm, Time, Industry };
enum class ClusterDim { None, Firm, Industry };

std::string_view to_string(FeDim d) noexcept;
std::string_view to_string(ClusterDim d) noexcept;

struct Condition {
    enum class Op { Lt, Le, Gt, Ge, Eq, Ne, NotMissing };
    std::string column;
    Op op = Op::NotMissing;
    double value = 0.0;

    bool test(double x) const noexcept;
};

struct RegressionSpec {
    std::string name;
    std::string dependent;
    int lead = 0;  // dependent measured at t + lead
    std::vector<std::string> regressors;
    std::vector<std::pair<std::string, std::string>> interactions;
    /// Center interaction components at their sample means before multiplying.
    bool center_interactions = false;
    std::vector<FeDim> fe_dims{FeDim::Firm, FeDim::Time};
    ClusterDim cluster = ClusterDim::Firm;
    std::vector<Condition> filter;
    /// Set for the errors-in-variables estimator.
    std::optional<std::string> mismeasured;
    int cumulant_order = 3;

    void validate() const;
    /// Regressors followed by interaction terms named "a x b".
    std::vector<std::string> term_names() const;
};

/// Estimation sample after filtering and listwise deletion.
struct Design {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;
    std::vector<std::string> names;
    std::vector<std::size_t> rows;            // panel row per observation
    std::vector<std::vector<int>> fe_groups;  // per fe dim, dense group ids
    std::vector<int> clusters;                // dense ids; empty for ClusterDim::None
    std::size_t n_clusters = 0;
};

Design build_design(const RegressionSpec& spec, const Panel& panel);

struct WithinOptions {
    double tolerance = 1e-10;  // max absolute cell change per sweep
    int max_sweeps = 10000;
};

struct WithinResult {
    Eigen::MatrixXd data;
    int sweeps = 0;
    double max_group_mean = 0.0;  // largest residual |group mean| across dims
    std::vector<bool> singleton;  // observation alone in some fe group
};

/// Alternating projections: subtract group means dim by dim until a full
/// sweep changes no cell by more than the tolerance. A single dim is exact
/// after one sweep. Throws NoConvergence.
WithinResult within_transform(Eigen::MatrixXd data, std::span<const std::vector<int>> groups,
                              const WithinOptions& options = {});

struct RegressionResult {
    std::string name;
    std::string dependent;
    int lead = 0;
    std::vector<std::string> terms;
    std::vector<double> coef;
    std::vector<double> se;
    std::vector<double> t;
    std::vector<double> p;
    Eigen::MatrixXd vcov;
    double r_squared = std::numeric_limits<double>::quiet_NaN();         // includes absorbed effects
    double within_r_squared = std::numeric_limits<double>::quiet_NaN();
    double rho_squared = std::numeric_limits<double>::quiet_NaN();       // EIV only
    std::size_t n_obs = 0;
    std::size_t n_clusters = 0;
    std::vector<FeDim> fe_dims;
    ClusterDim cluster = ClusterDim::Firm;
    std::vector<std::string> dropped;     // absorbed by the fixed effects
    std::vector<std::size_t> sample_rows;
    std::vector<double> term_sd;          // raw (pre-demeaning) sample SDs
    double dependent_sd = std::numeric_limits<double>::quiet_NaN();
    int sweeps = 0;
    bool eiv = false;

    std::optional<std::size_t> index_of(std::string_view term) const;
    double coefficient(std::string_view term) const;
    double std_error(std::string_view term) const;
    double t_stat(std::string_view term) const;
};

/// Within-estimator OLS with cluster-robust variance
/// G/(G-1) * (N-1)/(N-K) * (X'X)^-1 (sum_g X_g'u_g u_g'X_g) (X'X)^-1.
RegressionResult fe_ols(const RegressionSpec& spec, const Panel& panel);

struct CumulantOptions {
    /// IdentificationError when |E[y x^2]| is below this many standard errors.
    double identification_z = 3.0;
};

/// Third-order cumulant estimator for one mismeasured regressor:
/// beta = E[y^2 x] / E[y x^2] on data with fixed effects and the other
/// regressors partialled out.
RegressionResult ejw_cumulant(const RegressionSpec& spec, const Panel& panel, const CumulantOptions& options = {});

/// Dispatches to ejw_cumulant when spec.mismeasured is set.
RegressionResult estimate(const RegressionSpec& spec, const Panel& panel);

/// coef * sd(regressor) / sd(dependent), SDs over the estimation sample
/// before demeaning.
double standardized_effect(const RegressionResult& result, std::string_view regressor);
double standardized_effect(const RegressionResult& result, const Panel& panel, std::string_view regressor,
                           std::string_view dependent);

/// "***", "**", "*" at the 0.01 / 0.05 / 0.10 two-sided levels.
std::string_view significance_stars(double p_value) noexcept;

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

struct TableColumn {
    std::string name;
    std::optional<RegressionResult> result;
    std::string error;
};

struct ResultTable {
    std::vector<TableColumn> columns;
};

/// Estimates every spec; a failing spec becomes an error column.
ResultTable run_table(std::span<const RegressionSpec> specs, const Panel& panel);

/// Coefficients over (t-stats), then FE indicators, R-squared and N.
void render_text(const ResultTable& table, std::ostream& out);
void render_csv(const ResultTable& table, std::ostream& out);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

RegressionSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const RegressionSpec& spec);
/// Accepts one spec object, an array of specs or {"specs": [...]}.
std::vector<RegressionSpec> read_specs_file(const std::filesystem::path& path);

nlohmann::ordered_json table_to_json(const ResultTable& table);
ResultTable table_from_json(const nlohmann::json& j);

}  // namespace expectq
