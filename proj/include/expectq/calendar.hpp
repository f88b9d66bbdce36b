#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace expectq {

using Date = std::chrono::sys_days;

/// Year + quarter key such as "2013Q2". `index()` is a dense ordinal, so
/// consecutive quarters differ by exactly one.
struct FiscalQuarter {
    int year = 0;
    int quarter = 1;

    int index() const noexcept { return year * 4 + (quarter - 1); }
    static FiscalQuarter from_index(int index) noexcept;

    auto operator<=>(const FiscalQuarter&) const = default;
};

/// Accepts "2013Q2", "2013q2" and "2013-Q2". Throws UnparseableDate.
FiscalQuarter parse_fiscal_quarter(std::string_view text);
std::string to_string(FiscalQuarter fq);

/// ISO-8601 calendar date; a trailing time component ("T..." or " ...") is ignored.
Date parse_iso_date(std::string_view text);
std::string to_string(Date d);

/// Calendar quarter containing `d`.
FiscalQuarter quarter_of(Date d);

/// "YYYY-MM" or a full ISO date; returns year*12 + (month-1).
int parse_month_index(std::string_view text);
int month_index(Date d);

}  // namespace expectq
