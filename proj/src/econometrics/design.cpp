#include "expectq/econometrics.hpp"

#include "expectq/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

namespace expectq {

std::string_view to_string(FeDim d) noexcept {
    switch (d) {
    case FeDim::Firm: return "firm";
    case FeDim::Time: return "time";
    case FeDim::Industry: return "industry";
    }
    return "?";
}

std::string_view to_string(ClusterDim d) noexcept {
    switch (d) {
    case ClusterDim::None: return "none";
    case ClusterDim::Firm: return "firm";
    case ClusterDim::Industry: return "industry";
    }
    return "?";
}

bool Condition::test(double x) const noexcept {
    if (std::isnan(x)) return false;
    switch (op) {
    case Op::Lt: return x < value;
    case Op::Le: return x <= value;
    case Op::Gt: return x > value;
    case Op::Ge: return x >= value;
    case Op::Eq: return x == value;
    case Op::Ne: return x != value;
    case Op::NotMissing: return true;
    }
    return false;
}

std::vector<std::string> RegressionSpec::term_names() const {
    std::vector<std::string> names = regressors;
    for (const auto& [a, b] : interactions) names.push_back(a + " x " + b);
    return names;
}

void RegressionSpec::validate() const {
    if (dependent.empty()) throw Error(Errc::InvalidArgument, fmt::format("spec '{}': no dependent variable", name));
    if (lead < 0) throw Error(Errc::InvalidArgument, fmt::format("spec '{}': negative lead", name));
    const auto terms = term_names();
    if (terms.empty()) throw Error(Errc::InvalidArgument, fmt::format("spec '{}': no regressors", name));
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            if (terms[i] == terms[j])
                throw Error(Errc::InvalidArgument, fmt::format("spec '{}': duplicate term '{}'", name, terms[i]));
    for (std::size_t i = 0; i < fe_dims.size(); ++i)
        for (std::size_t j = i + 1; j < fe_dims.size(); ++j)
            if (fe_dims[i] == fe_dims[j])
                throw Error(Errc::InvalidArgument, fmt::format("spec '{}': repeated fixed effect", name));
    if (mismeasured) {
        if (std::find(terms.begin(), terms.end(), *mismeasured) == terms.end())
            throw Error(Errc::InvalidArgument,
                        fmt::format("spec '{}': mismeasured '{}' is not a regressor", name, *mismeasured));
        if (cumulant_order != 3)
            throw Error(Errc::Unsupported,
                        fmt::format("spec '{}': cumulant order {} not implemented", name, cumulant_order));
    }
}

namespace {

template <typename Key>
std::vector<int> dense_ids(const std::vector<Key>& keys, std::size_t* n_groups) {
    std::map<Key, int> ids;
    std::vector<int> out;
    out.reserve(keys.size());
    for (const auto& k : keys) {
        auto [it, inserted] = ids.try_emplace(k, static_cast<int>(ids.size()));
        out.push_back(it->second);
    }
    if (n_groups) *n_groups = ids.size();
    return out;
}

}  // namespace

Design build_design(const RegressionSpec& spec, const Panel& panel) {
    spec.validate();
    const std::size_t n = panel.rows();

    std::vector<double> y_all;
    if (spec.lead == 0) {
        y_all = panel.column(spec.dependent);
    } else {
        const std::string stored = fmt::format("{}_lead{}", spec.dependent, spec.lead);
        y_all = panel.has(stored) ? panel.column(stored) : panel.lead(spec.dependent, spec.lead);
    }

    std::vector<const std::vector<double>*> base;
    for (const auto& r : spec.regressors) base.push_back(&panel.column(r));
    std::vector<std::pair<const std::vector<double>*, const std::vector<double>*>> inter;
    for (const auto& [a, b] : spec.interactions) inter.emplace_back(&panel.column(a), &panel.column(b));
    std::vector<const std::vector<double>*> filters;
    for (const auto& c : spec.filter) filters.push_back(&panel.column(c.column));

    const bool need_industry =
        spec.cluster == ClusterDim::Industry ||
        std::find(spec.fe_dims.begin(), spec.fe_dims.end(), FeDim::Industry) != spec.fe_dims.end();

    Design d;
    for (std::size_t r = 0; r < n; ++r) {
        if (std::isnan(y_all[r])) continue;
        bool ok = true;
        for (const auto* col : base) ok = ok && !std::isnan((*col)[r]);
        for (const auto& [a, b] : inter) ok = ok && !std::isnan((*a)[r]) && !std::isnan((*b)[r]);
        for (std::size_t f = 0; f < filters.size() && ok; ++f) ok = spec.filter[f].test((*filters[f])[r]);
        if (need_industry && panel.industry()[r].empty()) ok = false;
        if (ok) d.rows.push_back(r);
    }
    const std::size_t m = d.rows.size();

    d.names = spec.term_names();
    d.y.resize(static_cast<Eigen::Index>(m));
    d.x.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d.names.size()));
    for (std::size_t i = 0; i < m; ++i) {
        const auto r = d.rows[i];
        d.y(static_cast<Eigen::Index>(i)) = y_all[r];
        for (std::size_t k = 0; k < base.size(); ++k)
            d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = (*base[k])[r];
    }
    for (std::size_t k = 0; k < inter.size(); ++k) {
        double mean_a = 0.0, mean_b = 0.0;
        if (spec.center_interactions && m > 0) {
            for (const auto r : d.rows) {
                mean_a += (*inter[k].first)[r];
                mean_b += (*inter[k].second)[r];
            }
            mean_a /= static_cast<double>(m);
            mean_b /= static_cast<double>(m);
        }
        const auto col = static_cast<Eigen::Index>(base.size() + k);
        for (std::size_t i = 0; i < m; ++i) {
            const auto r = d.rows[i];
            d.x(static_cast<Eigen::Index>(i), col) = ((*inter[k].first)[r] - mean_a) * ((*inter[k].second)[r] - mean_b);
        }
    }

    for (const auto dim : spec.fe_dims) {
        switch (dim) {
        case FeDim::Firm: {
            std::vector<std::string> keys;
            for (const auto r : d.rows) keys.push_back(panel.firm()[r]);
            d.fe_groups.push_back(dense_ids(keys, nullptr));
            break;
        }
        case FeDim::Time: {
            std::vector<int> keys;
            for (const auto r : d.rows) keys.push_back(panel.period()[r]);
            d.fe_groups.push_back(dense_ids(keys, nullptr));
            break;
        }
        case FeDim::Industry: {
            std::vector<std::string> keys;
            for (const auto r : d.rows) keys.push_back(panel.industry()[r]);
            d.fe_groups.push_back(dense_ids(keys, nullptr));
            break;
        }
        }
    }
    if (spec.cluster != ClusterDim::None) {
        std::vector<std::string> keys;
        for (const auto r : d.rows)
            keys.push_back(spec.cluster == ClusterDim::Firm ? panel.firm()[r] : panel.industry()[r]);
        d.clusters = dense_ids(keys, &d.n_clusters);
    }
    return d;
}

}  // namespace expectq
