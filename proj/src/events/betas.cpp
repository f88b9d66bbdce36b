#include "internal.hpp"

#include "expectq/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace expectq {

namespace detail {

Loadings fit_loadings(const Eigen::VectorXd& y, const Eigen::MatrixXd& f, std::vector<std::string> names) {
    const Eigen::Index n = y.size();
    Eigen::MatrixXd x(n, f.cols() + 1);
    x.col(0).setOnes();
    x.rightCols(f.cols()) = f;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < x.cols())
        throw Error(Errc::InsufficientHistory, "factor regression is singular over the estimation window");
    const Eigen::VectorXd b = qr.solve(y);
    Loadings out;
    out.factors = std::move(names);
    out.alpha = b(0);
    out.beta = b.tail(f.cols());
    out.n_obs = static_cast<std::size_t>(n);
    return out;
}

Eigen::VectorXd factor_row(const FactorPanel& factors, const FactorModel& model, std::size_t pos) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(model.factors.size()));
    for (std::size_t k = 0; k < model.factors.size(); ++k)
        v(static_cast<Eigen::Index>(k)) = factors.column(model.factors[k])[pos];
    return v;
}

}  // namespace detail

std::size_t event_day_position(const FactorPanel& factors, Date event_date) {
    return factors.lower_bound(day_key(event_date));
}

Loadings estimate_betas(const ReturnSeries& stock, const FactorPanel& factors, Date event_date,
                        const BetaOptions& options) {
    if (options.window < 1 || options.min_obs < 1)
        throw Error(Errc::InvalidArgument, "beta window and minimum must be positive");
    const auto day0 = event_day_position(factors, event_date);
    const std::size_t first = day0 > static_cast<std::size_t>(options.window) ? day0 - static_cast<std::size_t>(options.window) : 0;

    std::vector<double> ys;
    std::vector<Eigen::VectorXd> fs;
    for (std::size_t pos = first; pos < day0; ++pos) {
        auto r = stock.at(factors.keys[pos]);
        if (!r) continue;
        auto f = detail::factor_row(factors, options.model, pos);
        if (!f.allFinite() || std::isnan(factors.rf[pos])) continue;
        ys.push_back(*r - factors.rf[pos]);
        fs.push_back(std::move(f));
    }
    const auto k = static_cast<int>(options.model.factors.size());
    if (static_cast<int>(ys.size()) < std::max(options.min_obs, k + 2))
        throw Error(Errc::InsufficientHistory,
                    fmt::format("firm {}: {} valid days before {} (need {})", stock.firm_id, ys.size(),
                                to_string(event_date), options.min_obs));
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
    Eigen::MatrixXd f(static_cast<Eigen::Index>(ys.size()), k);
    for (std::size_t i = 0; i < fs.size(); ++i) f.row(static_cast<Eigen::Index>(i)) = fs[i].transpose();
    return detail::fit_loadings(y, f, options.model.factors);
}

std::vector<double> abnormal_returns(const ReturnSeries& stock, const FactorPanel& factors, const Loadings& loadings,
                                     Date event_date, int horizon) {
    if (horizon < 0) throw Error(Errc::InvalidArgument, "negative event window");
    const FactorModel model{"loadings", loadings.factors};
    const auto day0 = event_day_position(factors, event_date);
    std::vector<double> out;
    for (int d = 0; d <= horizon; ++d) {
        const auto pos = day0 + static_cast<std::size_t>(d);
        if (pos >= factors.keys.size())
            throw Error(Errc::MissingWindowDay,
                        fmt::format("firm {}: factor data ends before day {} after {}", stock.firm_id, d,
                                    to_string(event_date)));
        auto r = stock.at(factors.keys[pos]);
        if (!r)
            throw Error(Errc::MissingWindowDay,
                        fmt::format("firm {}: no return on {} (day {})", stock.firm_id,
                                    to_string(date_of_day_key(factors.keys[pos])), d));
        out.push_back(*r - factors.rf[pos] - loadings.beta.dot(detail::factor_row(factors, model, pos)));
    }
    return out;
}

double car(const ReturnSeries& stock, const FactorPanel& factors, const Loadings& loadings, Date event_date,
           int horizon) {
    double sum = 0.0;
    for (double a : abnormal_returns(stock, factors, loadings, event_date, horizon)) sum += a;
    return sum * 100.0;
}

}  // namespace expectq
