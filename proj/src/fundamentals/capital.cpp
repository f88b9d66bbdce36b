#include "expectq/error.hpp"
#include "expectq/fundamentals.hpp"

#include <fmt/format.h>

#include <cmath>

namespace expectq {

std::vector<double> perpetual_inventory(std::span<const double> investment, double delta, double seed) {
    if (delta < 0.0 || delta > 1.0) throw Error(Errc::InvalidArgument, "depreciation rate must lie in [0, 1]");
    std::vector<double> stock;
    stock.reserve(investment.size());
    double g = seed;
    for (double inv : investment) {
        g = (1.0 - delta) * g + inv;
        stock.push_back(g);
    }
    return stock;
}

IntangibleSeries intangible_capital(std::span<const int> periods, std::span<const double> rd,
                                    std::span<const double> sga, const IntangibleOptions& options) {
    if (periods.size() != rd.size() || periods.size() != sga.size())
        throw Error(Errc::InvalidArgument, "intangible inputs must be aligned");
    for (std::size_t i = 1; i < periods.size(); ++i) {
        if (periods[i] != periods[i - 1] + 1)
            throw Error(Errc::NonConsecutiveQuarters,
                        fmt::format("quarters {} and {} are not consecutive",
                                    to_string(FiscalQuarter::from_index(periods[i - 1])),
                                    to_string(FiscalQuarter::from_index(periods[i]))));
    }
    IntangibleSeries out;
    out.investment.reserve(periods.size());
    for (std::size_t i = 0; i < periods.size(); ++i) {
        double r = rd[i];
        double s = sga[i];
        if (std::isnan(r)) {
            r = 0.0;
            ++out.filled_missing;
        }
        if (std::isnan(s)) {
            s = 0.0;
            ++out.filled_missing;
        }
        out.investment.push_back(r + kSgaIntangibleShare * s);
    }
    double seed = 0.0;
    if (options.seed == SeedRule::SteadyState && !out.investment.empty()) {
        if (options.delta <= 0.0)
            throw Error(Errc::InvalidArgument, "steady-state seed needs a positive depreciation rate");
        seed = out.investment.front() / options.delta;
    }
    out.stock = perpetual_inventory(out.investment, options.delta, seed);
    return out;
}

double total_q(double market_cap, double debt_book, double current_assets, double total_capital) {
    if (!(total_capital > 0.0))
        throw Error(Errc::ZeroCapital, fmt::format("total capital {} is not positive", total_capital));
    return (market_cap + debt_book - current_assets) / total_capital;
}

}  // namespace expectq
