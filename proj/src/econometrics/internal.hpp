#pragma once

#include "expectq/econometrics.hpp"

#include <string>
#include <vector>

namespace expectq::detail {

// Design after the within transform with absorbed columns removed.
struct Prepared {
    Design design;
    Eigen::VectorXd y;      // demeaned dependent
    Eigen::MatrixXd x;      // demeaned kept regressors
    std::vector<std::string> names;
    std::vector<Eigen::Index> kept;  // columns of design.x
    std::vector<std::string> dropped;
    std::size_t fe_dof = 0;  // parameters absorbed by the fixed effects (or the intercept)
    int sweeps = 0;
};

Prepared prepare(const RegressionSpec& spec, const Panel& panel);

double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& v);
double two_sided_p(double t, double df);
void fill_inference(RegressionResult& r, double df);
void fill_descriptives(RegressionResult& r, const Prepared& p, const RegressionSpec& spec);

}  // namespace expectq::detail
