#include "expectq/econometrics.hpp"

#include "expectq/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>

namespace expectq {

using nlohmann::json;

namespace {

FeDim parse_fe(const std::string& s) {
    if (s == "firm") return FeDim::Firm;
    if (s == "time" || s == "yearqtr" || s == "year_quarter") return FeDim::Time;
    if (s == "industry") return FeDim::Industry;
    throw Error(Errc::ConfigError, fmt::format("unknown fixed effect '{}'", s));
}

ClusterDim parse_cluster(const std::string& s) {
    if (s == "none") return ClusterDim::None;
    if (s == "firm") return ClusterDim::Firm;
    if (s == "industry") return ClusterDim::Industry;
    throw Error(Errc::ConfigError, fmt::format("unknown cluster dimension '{}'", s));
}

struct OpName {
    Condition::Op op;
    const char* text;
};
constexpr OpName kOps[] = {{Condition::Op::Lt, "<"},  {Condition::Op::Le, "<="}, {Condition::Op::Gt, ">"},
                           {Condition::Op::Ge, ">="}, {Condition::Op::Eq, "=="}, {Condition::Op::Ne, "!="},
                           {Condition::Op::NotMissing, "notna"}};

double number_or_nan(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::vector<double> numbers(const json& j) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(number_or_nan(v));
    return out;
}

}  // namespace

RegressionSpec spec_from_json(const json& j) {
    static const std::set<std::string> known{"name",     "dependent", "lead",   "regressors",  "interactions",
                                             "center_interactions",   "fe",     "cluster",     "filter",
                                             "mismeasured",           "cumulant_order"};
    if (!j.is_object()) throw Error(Errc::ConfigError, "regression spec must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw Error(Errc::ConfigError, fmt::format("unknown spec key '{}'", key));
    try {
        RegressionSpec s;
        s.name = j.value("name", std::string{});
        s.dependent = j.at("dependent").get<std::string>();
        s.lead = j.value("lead", 0);
        s.regressors = j.value("regressors", std::vector<std::string>{});
        if (j.contains("interactions"))
            for (const auto& pair : j["interactions"]) {
                if (!pair.is_array() || pair.size() != 2)
                    throw Error(Errc::ConfigError, "interaction must be a two-element array");
                s.interactions.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
            }
        s.center_interactions = j.value("center_interactions", false);
        if (j.contains("fe")) {
            s.fe_dims.clear();
            for (const auto& f : j["fe"]) s.fe_dims.push_back(parse_fe(f.get<std::string>()));
        }
        if (j.contains("cluster")) s.cluster = parse_cluster(j["cluster"].get<std::string>());
        if (j.contains("filter"))
            for (const auto& f : j["filter"]) {
                Condition c;
                c.column = f.at("column").get<std::string>();
                const auto op = f.value("op", std::string("notna"));
                bool found = false;
                for (const auto& o : kOps)
                    if (op == o.text) {
                        c.op = o.op;
                        found = true;
                    }
                if (!found) throw Error(Errc::ConfigError, fmt::format("unknown filter op '{}'", op));
                c.value = f.value("value", 0.0);
                s.filter.push_back(std::move(c));
            }
        if (j.contains("mismeasured") && !j["mismeasured"].is_null())
            s.mismeasured = j["mismeasured"].get<std::string>();
        s.cumulant_order = j.value("cumulant_order", 3);
        if (s.name.empty()) s.name = s.dependent;
        return s;
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("bad regression spec: {}", e.what()));
    }
}

json spec_to_json(const RegressionSpec& s) {
    json j;
    j["name"] = s.name;
    j["dependent"] = s.dependent;
    j["lead"] = s.lead;
    j["regressors"] = s.regressors;
    j["interactions"] = json::array();
    for (const auto& [a, b] : s.interactions) j["interactions"].push_back({a, b});
    j["center_interactions"] = s.center_interactions;
    j["fe"] = json::array();
    for (const auto d : s.fe_dims) j["fe"].push_back(std::string(to_string(d)));
    j["cluster"] = std::string(to_string(s.cluster));
    j["filter"] = json::array();
    for (const auto& c : s.filter) {
        std::string op;
        for (const auto& o : kOps)
            if (o.op == c.op) op = o.text;
        j["filter"].push_back({{"column", c.column}, {"op", op}, {"value", c.value}});
    }
    if (s.mismeasured) j["mismeasured"] = *s.mismeasured;
    j["cumulant_order"] = s.cumulant_order;
    return j;
}

std::vector<RegressionSpec> read_specs_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, fmt::format("cannot open {}", path.string()));
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("{}: {}", path.string(), e.what()));
    }
    const json& list = j.is_object() && j.contains("specs") ? j["specs"] : j;
    std::vector<RegressionSpec> specs;
    if (list.is_array())
        for (const auto& s : list) specs.push_back(spec_from_json(s));
    else
        specs.push_back(spec_from_json(list));
    return specs;
}

nlohmann::ordered_json table_to_json(const ResultTable& table) {
    nlohmann::ordered_json out;
    out["columns"] = nlohmann::ordered_json::array();
    for (const auto& col : table.columns) {
        nlohmann::ordered_json c;
        c["name"] = col.name;
        c["error"] = col.error;
        if (col.result) {
            const auto& r = *col.result;
            nlohmann::ordered_json rj;
            rj["dependent"] = r.dependent;
            rj["lead"] = r.lead;
            rj["terms"] = r.terms;
            rj["coef"] = r.coef;
            rj["se"] = r.se;
            rj["t"] = r.t;
            rj["p"] = r.p;
            auto vcov = nlohmann::ordered_json::array();
            for (Eigen::Index i = 0; i < r.vcov.rows(); ++i) {
                std::vector<double> rowv(static_cast<std::size_t>(r.vcov.cols()));
                for (Eigen::Index k = 0; k < r.vcov.cols(); ++k) rowv[static_cast<std::size_t>(k)] = r.vcov(i, k);
                vcov.push_back(rowv);
            }
            rj["vcov"] = vcov;
            rj["r_squared"] = r.r_squared;
            rj["within_r_squared"] = r.within_r_squared;
            rj["rho_squared"] = r.rho_squared;
            rj["n_obs"] = r.n_obs;
            rj["n_clusters"] = r.n_clusters;
            rj["fe"] = nlohmann::ordered_json::array();
            for (const auto d : r.fe_dims) rj["fe"].push_back(std::string(to_string(d)));
            rj["cluster"] = std::string(to_string(r.cluster));
            rj["dropped"] = r.dropped;
            rj["term_sd"] = r.term_sd;
            rj["dependent_sd"] = r.dependent_sd;
            rj["sweeps"] = r.sweeps;
            rj["eiv"] = r.eiv;
            c["result"] = std::move(rj);
        }
        out["columns"].push_back(std::move(c));
    }
    return out;
}

ResultTable table_from_json(const json& j) {
    ResultTable table;
    try {
        for (const auto& c : j.at("columns")) {
            TableColumn col;
            col.name = c.at("name").get<std::string>();
            col.error = c.value("error", std::string{});
            if (c.contains("result")) {
                const auto& rj = c["result"];
                RegressionResult r;
                r.name = col.name;
                r.dependent = rj.at("dependent").get<std::string>();
                r.lead = rj.value("lead", 0);
                r.terms = rj.at("terms").get<std::vector<std::string>>();
                r.coef = numbers(rj.at("coef"));
                r.se = numbers(rj.at("se"));
                r.t = numbers(rj.at("t"));
                r.p = numbers(rj.at("p"));
                const auto& v = rj.at("vcov");
                r.vcov.resize(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
                for (std::size_t i = 0; i < v.size(); ++i)
                    for (std::size_t k = 0; k < v[i].size(); ++k)
                        r.vcov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = number_or_nan(v[i][k]);
                r.r_squared = number_or_nan(rj.at("r_squared"));
                r.within_r_squared = number_or_nan(rj.at("within_r_squared"));
                r.rho_squared = number_or_nan(rj.at("rho_squared"));
                r.n_obs = rj.at("n_obs").get<std::size_t>();
                r.n_clusters = rj.at("n_clusters").get<std::size_t>();
                for (const auto& f : rj.at("fe")) r.fe_dims.push_back(parse_fe(f.get<std::string>()));
                r.cluster = parse_cluster(rj.at("cluster").get<std::string>());
                r.dropped = rj.value("dropped", std::vector<std::string>{});
                r.term_sd = numbers(rj.at("term_sd"));
                r.dependent_sd = number_or_nan(rj.at("dependent_sd"));
                r.sweeps = rj.value("sweeps", 0);
                r.eiv = rj.value("eiv", false);
                col.result = std::move(r);
            }
            table.columns.push_back(std::move(col));
        }
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, fmt::format("bad results file: {}", e.what()));
    }
    return table;
}

}  // namespace expectq
