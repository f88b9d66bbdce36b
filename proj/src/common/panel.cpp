#include "expectq/panel.hpp"

#include "expectq/calendar.hpp"
#include "expectq/csv.hpp"
#include "expectq/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <ostream>

namespace expectq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string key_of(std::string_view firm, int period) {
    return fmt::format("{}\x1f{}", firm, period);
}

}  // namespace

std::size_t Panel::add_row(std::string firm, int period, std::string industry, std::string call_id) {
    firm_.push_back(std::move(firm));
    period_.push_back(period);
    industry_.push_back(std::move(industry));
    call_id_.push_back(std::move(call_id));
    for (auto& [_, col] : columns_) col.push_back(kNaN);
    index_valid_ = false;
    return firm_.size() - 1;
}

bool Panel::has(std::string_view name) const { return columns_.contains(std::string(name)); }

std::vector<double>& Panel::ensure_column(const std::string& name) {
    auto it = columns_.find(name);
    if (it != columns_.end()) return it->second;
    names_.push_back(name);
    return columns_.emplace(name, std::vector<double>(rows(), kNaN)).first->second;
}

void Panel::set_column(const std::string& name, std::vector<double> values) {
    if (values.size() != rows())
        throw Error(Errc::InvalidArgument,
                    fmt::format("column '{}' has {} values for {} rows", name, values.size(), rows()));
    ensure_column(name) = std::move(values);
}

const std::vector<double>& Panel::column(std::string_view name) const {
    auto it = columns_.find(std::string(name));
    if (it == columns_.end()) throw Error(Errc::MissingInput, fmt::format("panel has no column '{}'", name));
    return it->second;
}

std::vector<double>& Panel::column(std::string_view name) {
    auto it = columns_.find(std::string(name));
    if (it == columns_.end()) throw Error(Errc::MissingInput, fmt::format("panel has no column '{}'", name));
    return it->second;
}

void Panel::build_index() const {
    if (index_valid_) return;
    index_.clear();
    index_.reserve(rows());
    for (std::size_t i = 0; i < rows(); ++i) {
        if (!index_.emplace(key_of(firm_[i], period_[i]), i).second)
            throw Error(Errc::JoinKeyCollision,
                        fmt::format("duplicate firm-quarter ({}, {})", firm_[i],
                                    to_string(FiscalQuarter::from_index(period_[i]))));
    }
    index_valid_ = true;
}

std::optional<std::size_t> Panel::find_row(std::string_view firm, int period) const {
    build_index();
    auto it = index_.find(key_of(firm, period));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<double> Panel::lead(std::string_view name, int horizon) const {
    const auto& src = column(name);
    std::vector<double> out(rows(), kNaN);
    for (std::size_t i = 0; i < rows(); ++i) {
        if (auto j = find_row(firm_[i], period_[i] + horizon)) out[i] = src[*j];
    }
    return out;
}

Panel Panel::select(std::span<const std::size_t> rows_to_keep) const {
    Panel out;
    out.names_ = names_;
    for (const auto& n : names_) out.columns_[n].reserve(rows_to_keep.size());
    for (std::size_t r : rows_to_keep) {
        out.firm_.push_back(firm_.at(r));
        out.period_.push_back(period_[r]);
        out.industry_.push_back(industry_[r]);
        out.call_id_.push_back(call_id_[r]);
        for (const auto& n : names_) out.columns_[n].push_back(columns_.at(n)[r]);
    }
    return out;
}

void write_panel_csv(const Panel& panel, std::ostream& out) {
    std::vector<std::string> fields{"firm_id", "fiscal_quarter", "industry", "call_id"};
    for (const auto& n : panel.column_names()) fields.push_back(n);
    write_csv_row(out, fields);
    for (std::size_t i = 0; i < panel.rows(); ++i) {
        fields.clear();
        fields.push_back(panel.firm()[i]);
        fields.push_back(to_string(FiscalQuarter::from_index(panel.period()[i])));
        fields.push_back(panel.industry()[i]);
        fields.push_back(panel.call_id()[i]);
        for (const auto& n : panel.column_names()) fields.push_back(format_number(panel.column(n)[i]));
        write_csv_row(out, fields);
    }
}

Panel read_panel_csv(std::istream& in) {
    CsvTable t = read_csv(in);
    const auto firm_col = t.require_column("firm_id");
    const auto fq_col = t.require_column("fiscal_quarter");
    const auto ind_col = t.column("industry");
    const auto call_col = t.column("call_id");
    std::vector<std::pair<std::size_t, std::string>> numeric;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        const auto& h = t.header[c];
        if (h == "firm_id" || h == "fiscal_quarter" || h == "industry" || h == "call_id") continue;
        numeric.emplace_back(c, h);
    }
    Panel p;
    for (const auto& [_, name] : numeric) p.ensure_column(name);
    for (const auto& row : t.rows) {
        auto r = p.add_row(row[firm_col], parse_fiscal_quarter(row[fq_col]).index(),
                           ind_col ? row[*ind_col] : std::string{},
                           call_col ? row[*call_col] : std::string{});
        for (const auto& [c, name] : numeric) p.column(name)[r] = parse_number(row[c]);
    }
    return p;
}

}  // namespace expectq
