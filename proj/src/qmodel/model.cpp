#include "expectq/qmodel.hpp"

#include "expectq/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace expectq {

void ModelParams::validate() const {
    auto bad = [](std::string_view what) { throw Error(Errc::InvalidArgument, std::string(what)); };
    if (!(c1 >= 0.0)) bad(fmt::format("c1 = {} must be >= 0", c1));
    if (!(c2 > 0.0)) bad(fmt::format("c2 = {} must be > 0", c2));
    if (!(delta >= 0.0 && delta <= 1.0)) bad(fmt::format("delta = {} must lie in [0, 1]", delta));
    if (!(K > 0.0)) bad(fmt::format("K = {} must be > 0", K));
    if (!(eps_sd >= 0.0)) bad(fmt::format("eps_sd = {} must be >= 0", eps_sd));
    if (!std::isfinite(a) || !std::isfinite(q_e) || !std::isfinite(q_m)) bad("non-finite model parameter");
}

double optimal_investment(double q, const ModelParams& p, double K) {
    if (!(K > 0.0)) throw Error(Errc::InvalidArgument, fmt::format("K = {} must be > 0", K));
    if (!(p.c2 > 0.0)) throw Error(Errc::InvalidArgument, fmt::format("c2 = {} must be > 0", p.c2));
    return K * (q - p.c1) / (2.0 * p.c2);
}

double adjustment_cost(double I, const ModelParams& p) { return p.c1 * I + p.c2 * I * I / p.K; }

double firm_value(double I, double expected_q, const ModelParams& p) {
    return p.a * p.K - adjustment_cost(I, p) + ((1.0 - p.delta) * p.K + I) * expected_q;
}

double optimal_value(double expected_q, const ModelParams& p) {
    return firm_value(optimal_investment(expected_q, p, p.K), expected_q, p);
}

double disclosure_return(const ModelParams& p) {
    p.validate();
    const double pre = optimal_value(p.q_e, p);
    const double post = optimal_value(p.q_e + p.q_m, p);
    if (!(pre > 0.0)) throw Error(Errc::NonpositiveValue, fmt::format("pre-disclosure value {} is not positive", pre));
    if (!(post > 0.0))
        throw Error(Errc::NonpositiveValue, fmt::format("post-disclosure value {} is not positive", post));
    return post / pre;
}

double expected_return(const ModelParams& p, double eps) {
    const double q = p.q_e + p.q_m + eps;
    if (!(q > 0.0)) throw Error(Errc::NonpositiveQ, fmt::format("realized q = {} is not positive", q));
    return p.a / q;
}

ModelOutcome evaluate(const ModelParams& p) {
    p.validate();
    ModelOutcome o;
    const double q = p.q_e + p.q_m;
    o.I_next = optimal_investment(q, p, p.K);
    o.K_next = (1.0 - p.delta) * p.K + o.I_next;
    o.V_pre = optimal_value(p.q_e, p);
    o.V_post = optimal_value(q, p);
    o.short_return = disclosure_return(p);
    o.expected_return = expected_return(p);
    return o;
}

}  // namespace expectq
