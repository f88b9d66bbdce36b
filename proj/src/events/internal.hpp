#pragma once

#include "expectq/events.hpp"

namespace expectq::detail {

// OLS with intercept of y on the columns of f. Throws InsufficientHistory
// when the system is singular.
Loadings fit_loadings(const Eigen::VectorXd& y, const Eigen::MatrixXd& f, std::vector<std::string> names);

// Factor values of `model` at panel position `pos`.
Eigen::VectorXd factor_row(const FactorPanel& factors, const FactorModel& model, std::size_t pos);

}  // namespace expectq::detail
