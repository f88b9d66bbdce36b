#include "expectq/econometrics.hpp"

#include "expectq/csv.hpp"
#include "expectq/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace expectq {

ResultTable run_table(std::span<const RegressionSpec> specs, const Panel& panel) {
    ResultTable table;
    for (const auto& spec : specs) {
        TableColumn col;
        col.name = spec.name;
        try {
            col.result = estimate(spec, panel);
        } catch (const Error& e) {
            col.error = fmt::format("{}: {}", to_string(e.code()), e.what());
        }
        table.columns.push_back(std::move(col));
    }
    return table;
}

namespace {

std::vector<std::string> all_terms(const ResultTable& table) {
    std::vector<std::string> terms;
    for (const auto& c : table.columns) {
        if (!c.result) continue;
        for (const auto& t : c.result->terms)
            if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
    }
    return terms;
}

bool has_fe(const RegressionResult& r, FeDim d) {
    return std::find(r.fe_dims.begin(), r.fe_dims.end(), d) != r.fe_dims.end();
}

std::string number(double v, std::string_view pattern) {
    if (std::isnan(v)) return "";
    return fmt::format(fmt::runtime(pattern), v);
}

}  // namespace

void render_text(const ResultTable& table, std::ostream& out) {
    const auto ncol = table.columns.size();
    // Lines of the table body; an empty vector marks a rule.
    std::vector<std::vector<std::string>> lines;
    auto add = [&](std::string label, std::vector<std::string> cells) {
        cells.insert(cells.begin(), std::move(label));
        lines.push_back(std::move(cells));
    };
    std::vector<std::string> cells(ncol);

    for (std::size_t c = 0; c < ncol; ++c) cells[c] = fmt::format("({})", c + 1);
    add("", cells);
    for (std::size_t c = 0; c < ncol; ++c) cells[c] = table.columns[c].name;
    add("", cells);
    for (std::size_t c = 0; c < ncol; ++c) {
        const auto& r = table.columns[c].result;
        cells[c] = !r ? "" : r->lead > 0 ? fmt::format("{} t+{}", r->dependent, r->lead) : r->dependent;
    }
    add("Dependent", cells);
    lines.emplace_back();

    bool first = true;
    for (const auto& term : all_terms(table)) {
        std::vector<std::string> coefs(ncol), tstats(ncol);
        for (std::size_t c = 0; c < ncol; ++c) {
            const auto& r = table.columns[c].result;
            if (!r) {
                if (first) coefs[c] = "ERROR";
                continue;
            }
            if (auto i = r->index_of(term)) {
                coefs[c] = number(r->coef[*i], "{:.4g}") + std::string(significance_stars(r->p[*i]));
                tstats[c] = std::isnan(r->t[*i]) ? "" : fmt::format("({:.2f})", r->t[*i]);
            }
        }
        add(term, coefs);
        add("", tstats);
        first = false;
    }
    if (first) {
        for (std::size_t c = 0; c < ncol; ++c) cells[c] = table.columns[c].result ? "" : "ERROR";
        add("", cells);
    }
    lines.emplace_back();

    auto meta = [&](std::string label, auto fn) {
        for (std::size_t c = 0; c < ncol; ++c) cells[c] = table.columns[c].result ? fn(*table.columns[c].result) : "";
        add(std::move(label), cells);
    };
    meta("Firm FE", [](const RegressionResult& r) { return std::string(has_fe(r, FeDim::Firm) ? "Yes" : "No"); });
    meta("Year-quarter FE", [](const RegressionResult& r) { return std::string(has_fe(r, FeDim::Time) ? "Yes" : "No"); });
    meta("Industry FE",
         [](const RegressionResult& r) { return std::string(has_fe(r, FeDim::Industry) ? "Yes" : "No"); });
    meta("Cluster", [](const RegressionResult& r) { return std::string(to_string(r.cluster)); });
    meta("R-squared", [](const RegressionResult& r) { return number(r.r_squared, "{:.3f}"); });
    const bool any_eiv = std::any_of(table.columns.begin(), table.columns.end(),
                                     [](const TableColumn& c) { return c.result && c.result->eiv; });
    if (any_eiv)
        meta("rho-squared", [](const RegressionResult& r) { return r.eiv ? number(r.rho_squared, "{:.3f}") : ""; });
    meta("Observations", [](const RegressionResult& r) { return fmt::format("{}", r.n_obs); });

    std::vector<std::size_t> width(ncol + 1, 0);
    for (const auto& line : lines)
        for (std::size_t k = 0; k < line.size(); ++k) width[k] = std::max(width[k], line[k].size());
    for (std::size_t k = 1; k < width.size(); ++k) width[k] = std::max<std::size_t>(width[k] + 2, 10);
    std::size_t total = 0;
    for (auto w : width) total += w;
    for (const auto& line : lines) {
        if (line.empty()) {
            out << std::string(total, '-') << '\n';
            continue;
        }
        std::string text = fmt::format("{:<{}}", line[0], width[0]);
        for (std::size_t k = 1; k < line.size(); ++k) text += fmt::format("{:>{}}", line[k], width[k]);
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out << text << '\n';
    }

    for (std::size_t c = 0; c < ncol; ++c) {
        const auto& col = table.columns[c];
        if (!col.result) out << fmt::format("({}) {}: {}\n", c + 1, col.name, col.error);
        else if (!col.result->dropped.empty()) {
            out << fmt::format("({}) {}: absorbed by fixed effects:", c + 1, col.name);
            for (const auto& d : col.result->dropped) out << ' ' << d;
            out << '\n';
        }
    }
    out << "t-statistics in parentheses. * p<0.10, ** p<0.05, *** p<0.01\n";
}

void render_csv(const ResultTable& table, std::ostream& out) {
    const std::vector<std::string> header{"model", "term", "estimate", "std_error", "t_stat", "p_value", "stars",
                                          "n_obs", "n_clusters", "r_squared", "within_r_squared", "rho_squared",
                                          "error"};
    write_csv_row(out, header);
    for (const auto& col : table.columns) {
        if (!col.result) {
            write_csv_row(out, std::vector<std::string>{col.name, "", "", "", "", "", "", "", "", "", "", "", col.error});
            continue;
        }
        const auto& r = *col.result;
        for (std::size_t i = 0; i < r.terms.size(); ++i) {
            write_csv_row(out, std::vector<std::string>{
                                   col.name, r.terms[i], format_number(r.coef[i]), format_number(r.se[i]),
                                   format_number(r.t[i]), format_number(r.p[i]), std::string(significance_stars(r.p[i])),
                                   fmt::format("{}", r.n_obs), fmt::format("{}", r.n_clusters),
                                   format_number(r.r_squared), format_number(r.within_r_squared),
                                   format_number(r.rho_squared), ""});
        }
    }
}

}  // namespace expectq
