#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace expectq {

/// Firm-quarter table. Key columns are typed; every other variable is a
/// double column where NaN marks a missing value.
class Panel {
public:
    std::size_t rows() const noexcept { return firm_.size(); }

    /// Appends a row; every numeric column gets NaN in the new slot.
    std::size_t add_row(std::string firm, int period, std::string industry = {},
                        std::string call_id = {});

    const std::vector<std::string>& firm() const noexcept { return firm_; }
    const std::vector<int>& period() const noexcept { return period_; }
    const std::vector<std::string>& industry() const noexcept { return industry_; }
    const std::vector<std::string>& call_id() const noexcept { return call_id_; }
    void set_industry(std::size_t row, std::string value) { industry_.at(row) = std::move(value); }
    void set_call_id(std::size_t row, std::string value) { call_id_.at(row) = std::move(value); }

    bool has(std::string_view name) const;
    const std::vector<std::string>& column_names() const noexcept { return names_; }

    /// Returns the named column, creating it NaN-filled when absent.
    std::vector<double>& ensure_column(const std::string& name);
    void set_column(const std::string& name, std::vector<double> values);
    const std::vector<double>& column(std::string_view name) const;
    std::vector<double>& column(std::string_view name);

    /// Row holding (firm, period); JoinKeyCollision if the key is duplicated.
    std::optional<std::size_t> find_row(std::string_view firm, int period) const;

    /// Value of `name` at (firm, period + horizon) for every row; NaN when the
    /// target quarter is absent.
    std::vector<double> lead(std::string_view name, int horizon) const;

    Panel select(std::span<const std::size_t> rows) const;

private:
    void build_index() const;

    std::vector<std::string> firm_;
    std::vector<int> period_;
    std::vector<std::string> industry_;
    std::vector<std::string> call_id_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::vector<double>> columns_;

    mutable std::unordered_map<std::string, std::size_t> index_;
    mutable bool index_valid_ = false;
};

/// Header: firm_id,fiscal_quarter,industry,call_id, then numeric columns in
/// insertion order.
void write_panel_csv(const Panel& panel, std::ostream& out);
Panel read_panel_csv(std::istream& in);

}  // namespace expectq
