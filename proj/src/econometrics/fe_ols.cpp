#include "internal.hpp"

#include "expectq/error.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>

namespace expectq {

namespace detail {

Prepared prepare(const RegressionSpec& spec, const Panel& panel) {
    Prepared p;
    p.design = build_design(spec, panel);
    const auto& d = p.design;
    const Eigen::Index n = d.y.size();
    if (n == 0) throw Error(Errc::EmptyInput, fmt::format("spec '{}': empty estimation sample", spec.name));

    Eigen::MatrixXd joint(n, d.x.cols() + 1);
    joint.col(0) = d.y;
    joint.rightCols(d.x.cols()) = d.x;

    if (d.fe_groups.empty()) {
        joint.rowwise() -= joint.colwise().mean();
        p.fe_dof = 1;
    } else {
        auto w = within_transform(std::move(joint), d.fe_groups);
        joint = std::move(w.data);
        p.sweeps = w.sweeps;
        std::size_t levels = 0;
        for (const auto& g : d.fe_groups) levels += static_cast<std::size_t>(*std::max_element(g.begin(), g.end()) + 1);
        p.fe_dof = levels - (d.fe_groups.size() - 1);
    }

    p.y = joint.col(0);
    for (Eigen::Index c = 0; c < d.x.cols(); ++c) {
        const double raw = d.x.col(c).norm();
        const double within = joint.col(c + 1).norm();
        if (within == 0.0 || within <= 1e-9 * raw) {
            p.dropped.push_back(d.names[static_cast<std::size_t>(c)]);
            continue;
        }
        p.kept.push_back(c);
        p.names.push_back(d.names[static_cast<std::size_t>(c)]);
    }
    if (!p.dropped.empty())
        std::cerr << fmt::format("warning: spec '{}': dropped {} absorbed by fixed effects\n", spec.name,
                                 fmt::join(p.dropped, ", "));
    if (p.kept.empty())
        throw Error(Errc::RankDeficient,
                    fmt::format("spec '{}': every regressor is absorbed ({})", spec.name, fmt::join(p.dropped, ", ")));

    p.x.resize(n, static_cast<Eigen::Index>(p.kept.size()));
    for (std::size_t k = 0; k < p.kept.size(); ++k) p.x.col(static_cast<Eigen::Index>(k)) = joint.col(p.kept[k] + 1);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(p.x);
    qr.setThreshold(1e-10);
    if (qr.rank() < p.x.cols()) {
        std::vector<std::string> collinear;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < p.x.cols(); ++k) collinear.push_back(p.names[static_cast<std::size_t>(perm(k))]);
        throw Error(Errc::RankDeficient,
                    fmt::format("spec '{}': collinear regressors: {}", spec.name, fmt::join(collinear, ", ")));
    }
    if (spec.cluster != ClusterDim::None && d.n_clusters < 2)
        throw Error(Errc::TooFewClusters, fmt::format("spec '{}': {} cluster(s)", spec.name, d.n_clusters));
    return p;
}

double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (v.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

double two_sided_p(double t, double df) {
    if (!std::isfinite(t)) return std::isnan(t) ? t : 0.0;
    if (df >= 1.0) {
        boost::math::students_t dist(df);
        return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    }
    boost::math::normal dist;
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

void fill_inference(RegressionResult& r, double df) {
    const auto k = r.coef.size();
    r.se.resize(k);
    r.t.resize(k);
    r.p.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double v = r.vcov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        r.se[i] = v > 0.0 ? std::sqrt(v) : std::numeric_limits<double>::quiet_NaN();
        r.t[i] = r.coef[i] / r.se[i];
        r.p[i] = two_sided_p(r.t[i], df);
    }
}

void fill_descriptives(RegressionResult& r, const Prepared& p, const RegressionSpec& spec) {
    r.name = spec.name;
    r.dependent = spec.dependent;
    r.lead = spec.lead;
    r.terms = p.names;
    r.n_obs = static_cast<std::size_t>(p.design.y.size());
    r.n_clusters = p.design.n_clusters;
    r.fe_dims = spec.fe_dims;
    r.cluster = spec.cluster;
    r.dropped = p.dropped;
    r.sample_rows = p.design.rows;
    r.sweeps = p.sweeps;
    r.dependent_sd = sample_sd(p.design.y);
    for (const auto c : p.kept) r.term_sd.push_back(sample_sd(p.design.x.col(c)));
}

}  // namespace detail

RegressionResult fe_ols(const RegressionSpec& spec, const Panel& panel) {
    const auto p = detail::prepare(spec, panel);
    const auto& d = p.design;
    const Eigen::Index n = p.x.rows();
    const Eigen::Index k = p.x.cols();
    const double nd = static_cast<double>(n);

    const Eigen::MatrixXd xtx = p.x.transpose() * p.x;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    const Eigen::VectorXd beta = ldlt.solve(p.x.transpose() * p.y);
    const Eigen::VectorXd u = p.y - p.x * beta;
    const Eigen::MatrixXd bread = ldlt.solve(Eigen::MatrixXd::Identity(k, k));

    RegressionResult r;
    detail::fill_descriptives(r, p, spec);
    r.coef.assign(beta.data(), beta.data() + k);

    const double ssr = u.squaredNorm();
    const double tss = (d.y.array() - d.y.mean()).square().sum();
    const double tss_within = p.y.squaredNorm();
    r.r_squared = tss > 0.0 ? 1.0 - ssr / tss : std::numeric_limits<double>::quiet_NaN();
    r.within_r_squared = tss_within > 0.0 ? 1.0 - ssr / tss_within : std::numeric_limits<double>::quiet_NaN();

    double df = 0.0;
    if (spec.cluster == ClusterDim::None) {
        df = nd - static_cast<double>(k) - static_cast<double>(p.fe_dof);
        if (df <= 0.0)
            throw Error(Errc::RankDeficient, fmt::format("spec '{}': no residual degrees of freedom", spec.name));
        r.vcov = bread * (ssr / df);
    } else {
        const auto g_count = static_cast<Eigen::Index>(d.n_clusters);
        Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(g_count, k);
        for (Eigen::Index i = 0; i < n; ++i) scores.row(d.clusters[static_cast<std::size_t>(i)]) += p.x.row(i) * u(i);
        const Eigen::MatrixXd meat = scores.transpose() * scores;
        // Intercept counts as an estimated parameter when no fixed effect absorbs it.
        const double kk = static_cast<double>(k) + (d.fe_groups.empty() ? 1.0 : 0.0);
        if (nd <= kk) throw Error(Errc::RankDeficient, fmt::format("spec '{}': N <= K", spec.name));
        const double gd = static_cast<double>(g_count);
        const double factor = gd / (gd - 1.0) * (nd - 1.0) / (nd - kk);
        r.vcov = factor * bread * meat * bread;
        df = gd - 1.0;
    }
    detail::fill_inference(r, df);
    return r;
}

RegressionResult estimate(const RegressionSpec& spec, const Panel& panel) {
    return spec.mismeasured ? ejw_cumulant(spec, panel) : fe_ols(spec, panel);
}

std::optional<std::size_t> RegressionResult::index_of(std::string_view term) const {
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (terms[i] == term) return i;
    return std::nullopt;
}

namespace {
std::size_t require_term(const RegressionResult& r, std::string_view term) {
    auto i = r.index_of(term);
    if (!i) throw Error(Errc::MissingInput, fmt::format("result '{}' has no term '{}'", r.name, term));
    return *i;
}
}  // namespace

double RegressionResult::coefficient(std::string_view term) const { return coef[require_term(*this, term)]; }
double RegressionResult::std_error(std::string_view term) const { return se[require_term(*this, term)]; }
double RegressionResult::t_stat(std::string_view term) const { return t[require_term(*this, term)]; }

double standardized_effect(const RegressionResult& result, std::string_view regressor) {
    const auto i = require_term(result, regressor);
    if (!(result.dependent_sd > 0.0))
        throw Error(Errc::ZeroVariance, fmt::format("result '{}': dependent has zero variance", result.name));
    return result.coef[i] * result.term_sd.at(i) / result.dependent_sd;
}

double standardized_effect(const RegressionResult& result, const Panel& panel, std::string_view regressor,
                           std::string_view dependent) {
    const auto i = require_term(result, regressor);
    std::vector<double> ys;
    if (result.lead == 0 || dependent != result.dependent) {
        ys = panel.column(dependent);
    } else {
        const std::string stored = fmt::format("{}_lead{}", dependent, result.lead);
        ys = panel.has(stored) ? panel.column(stored) : panel.lead(dependent, result.lead);
    }
    const auto& xs = panel.column(regressor);
    Eigen::VectorXd x(static_cast<Eigen::Index>(result.sample_rows.size()));
    Eigen::VectorXd y(x.size());
    for (std::size_t k = 0; k < result.sample_rows.size(); ++k) {
        x(static_cast<Eigen::Index>(k)) = xs.at(result.sample_rows[k]);
        y(static_cast<Eigen::Index>(k)) = ys.at(result.sample_rows[k]);
    }
    const double sy = detail::sample_sd(y);
    if (!(sy > 0.0)) throw Error(Errc::ZeroVariance, fmt::format("'{}' has zero variance", dependent));
    return result.coef[i] * detail::sample_sd(x) / sy;
}

std::string_view significance_stars(double p_value) noexcept {
    if (!(p_value >= 0.0)) return "";
    if (p_value < 0.01) return "***";
    if (p_value < 0.05) return "**";
    if (p_value < 0.10) return "*";
    return "";
}

}  // namespace expectq
