#include "internal.hpp"

#include "expectq/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace expectq {

RegressionResult ejw_cumulant(const RegressionSpec& spec, const Panel& panel, const CumulantOptions& options) {
    if (!spec.mismeasured)
        throw Error(Errc::InvalidArgument, fmt::format("spec '{}': no mismeasured regressor", spec.name));
    if (spec.cumulant_order != 3)
        throw Error(Errc::Unsupported,
                    fmt::format("spec '{}': cumulant order {} not implemented", spec.name, spec.cumulant_order));

    const auto p = detail::prepare(spec, panel);
    const auto& d = p.design;
    const Eigen::Index n = p.x.rows();
    const Eigen::Index k = p.x.cols();
    const double nd = static_cast<double>(n);

    Eigen::Index mis = -1;
    for (Eigen::Index c = 0; c < k; ++c)
        if (p.names[static_cast<std::size_t>(c)] == *spec.mismeasured) mis = c;
    if (mis < 0)
        throw Error(Errc::RankDeficient,
                    fmt::format("spec '{}': mismeasured '{}' is absorbed by the fixed effects", spec.name,
                                *spec.mismeasured));

    // Controls z: every kept column except the mismeasured one.
    const Eigen::Index q = k - 1;
    Eigen::MatrixXd z(n, q);
    for (Eigen::Index c = 0, j = 0; c < k; ++c)
        if (c != mis) z.col(j++) = p.x.col(c);
    const Eigen::VectorXd xt = p.x.col(mis);

    Eigen::VectorXd mu_y = Eigen::VectorXd::Zero(q), mu_x = Eigen::VectorXd::Zero(q);
    Eigen::MatrixXd qinv = Eigen::MatrixXd::Zero(q, q);  // (E[zz'])^-1
    if (q > 0) {
        const Eigen::MatrixXd qm = z.transpose() * z / nd;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(qm);
        qinv = ldlt.solve(Eigen::MatrixXd::Identity(q, q));
        mu_y = qinv * (z.transpose() * p.y / nd);
        mu_x = qinv * (z.transpose() * xt / nd);
    }
    const Eigen::VectorXd yd = q > 0 ? Eigen::VectorXd(p.y - z * mu_y) : p.y;
    const Eigen::VectorXd xd = q > 0 ? Eigen::VectorXd(xt - z * mu_x) : xt;

    const Eigen::ArrayXd w1 = yd.array().square() * xd.array();
    const Eigen::ArrayXd w2 = yd.array() * xd.array().square();
    const double m1 = w1.mean();
    const double m2 = w2.mean();

    // Clustered (or per-observation) standard error of the E[y x^2] sample mean.
    const bool clustered = spec.cluster != ClusterDim::None;
    const Eigen::Index groups = clustered ? static_cast<Eigen::Index>(d.n_clusters) : n;
    auto group_of = [&](Eigen::Index i) -> Eigen::Index {
        return clustered ? d.clusters[static_cast<std::size_t>(i)] : i;
    };
    {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(groups);
        for (Eigen::Index i = 0; i < n; ++i) s(group_of(i)) += w2(i) - m2;
        const double se_m2 = std::sqrt(s.squaredNorm()) / nd;
        if (!(std::abs(m2) > options.identification_z * se_m2) || m2 == 0.0)
            throw Error(Errc::IdentificationError,
                        fmt::format("spec '{}': E[y x^2] = {:g} is indistinguishable from zero (se {:g}); "
                                    "the mismeasured regressor looks symmetric",
                                    spec.name, m2, se_m2));
    }
    const double beta = m1 / m2;
    const Eigen::VectorXd alpha = mu_y - beta * mu_x;

    // Influence functions, including the effect of estimating mu_y and mu_x.
    Eigen::MatrixXd psi(n, k);
    {
        Eigen::VectorXd gy = Eigen::VectorXd::Zero(q), gx = Eigen::VectorXd::Zero(q);
        if (q > 0) {
            const Eigen::ArrayXd yx = yd.array() * xd.array();
            gy = (z.transpose() * (-2.0 * yx + beta * xd.array().square()).matrix()) / nd;
            gx = (z.transpose() * (-yd.array().square() + 2.0 * beta * yx).matrix()) / nd;
        }
        const Eigen::VectorXd ay = qinv * gy;  // gy' Q^-1
        const Eigen::VectorXd ax = qinv * gx;
        for (Eigen::Index i = 0; i < n; ++i) {
            double psi_b = w1(i) - beta * w2(i);
            Eigen::VectorXd psi_my = Eigen::VectorXd::Zero(q), psi_mx = Eigen::VectorXd::Zero(q);
            if (q > 0) {
                const Eigen::VectorXd zi = z.row(i).transpose();
                psi_b += ay.dot(zi) * yd(i) + ax.dot(zi) * xd(i);
                psi_my = qinv * zi * yd(i);
                psi_mx = qinv * zi * xd(i);
            }
            psi_b /= m2;
            const Eigen::VectorXd psi_a = psi_my - beta * psi_mx - mu_x * psi_b;
            for (Eigen::Index c = 0, j = 0; c < k; ++c) psi(i, c) = c == mis ? psi_b : psi_a(j++);
        }
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(groups, k);
    for (Eigen::Index i = 0; i < n; ++i) sums.row(group_of(i)) += psi.row(i);
    const double gd = static_cast<double>(groups);
    const double factor = clustered ? gd / (gd - 1.0) : nd / (nd - static_cast<double>(k));

    RegressionResult r;
    detail::fill_descriptives(r, p, spec);
    r.eiv = true;
    r.vcov = factor * (sums.transpose() * sums) / (nd * nd);
    r.coef.resize(static_cast<std::size_t>(k));
    for (Eigen::Index c = 0, j = 0; c < k; ++c) r.coef[static_cast<std::size_t>(c)] = c == mis ? beta : alpha(j++);

    const double var_y = yd.squaredNorm() / nd;
    if (!(var_y > 0.0)) throw Error(Errc::ZeroVariance, fmt::format("spec '{}': dependent has no variation", spec.name));
    r.rho_squared = beta * yd.dot(xd) / nd / var_y;

    Eigen::VectorXd coef(k);
    for (Eigen::Index c = 0; c < k; ++c) coef(c) = r.coef[static_cast<std::size_t>(c)];
    const Eigen::VectorXd u = p.y - p.x * coef;
    const double ssr = u.squaredNorm();
    const double tss = (d.y.array() - d.y.mean()).square().sum();
    r.r_squared = tss > 0.0 ? 1.0 - ssr / tss : std::numeric_limits<double>::quiet_NaN();
    r.within_r_squared = p.y.squaredNorm() > 0.0 ? 1.0 - ssr / p.y.squaredNorm() : std::numeric_limits<double>::quiet_NaN();

    detail::fill_inference(r, clustered ? gd - 1.0 : nd - static_cast<double>(k) - static_cast<double>(p.fe_dof));
    return r;
}

}  // namespace expectq
