#include "expectq/calendar.hpp"

#include "expectq/error.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>

namespace expectq {

namespace {

int parse_int(std::string_view s, std::string_view whole) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw Error(Errc::UnparseableDate, fmt::format("unparseable date '{}'", whole));
    return v;
}

}  // namespace

FiscalQuarter FiscalQuarter::from_index(int index) noexcept {
    int year = index >= 0 ? index / 4 : (index - 3) / 4;
    return {year, index - year * 4 + 1};
}

FiscalQuarter parse_fiscal_quarter(std::string_view text) {
    auto q = text.find_first_of("Qq");
    if (q == std::string_view::npos || q + 2 != text.size())
        throw Error(Errc::UnparseableDate, fmt::format("unparseable fiscal quarter '{}'", text));
    auto year_part = text.substr(0, q);
    if (!year_part.empty() && year_part.back() == '-') year_part.remove_suffix(1);
    FiscalQuarter fq{parse_int(year_part, text), parse_int(text.substr(q + 1), text)};
    if (fq.quarter < 1 || fq.quarter > 4)
        throw Error(Errc::UnparseableDate, fmt::format("quarter out of range in '{}'", text));
    return fq;
}

std::string to_string(FiscalQuarter fq) { return fmt::format("{}Q{}", fq.year, fq.quarter); }

Date parse_iso_date(std::string_view text) {
    auto cut = text.find_first_of("T ");
    if (cut != std::string_view::npos) text = text.substr(0, cut);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw Error(Errc::UnparseableDate, fmt::format("unparseable date '{}'", text));
    using namespace std::chrono;
    year_month_day ymd{year{parse_int(text.substr(0, 4), text)},
                       month{static_cast<unsigned>(parse_int(text.substr(5, 2), text))},
                       day{static_cast<unsigned>(parse_int(text.substr(8, 2), text))}};
    if (!ymd.ok()) throw Error(Errc::UnparseableDate, fmt::format("invalid date '{}'", text));
    return sys_days{ymd};
}

std::string to_string(Date d) {
    std::chrono::year_month_day ymd{d};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

FiscalQuarter quarter_of(Date d) {
    std::chrono::year_month_day ymd{d};
    return {static_cast<int>(ymd.year()), static_cast<int>((static_cast<unsigned>(ymd.month()) - 1) / 3 + 1)};
}

int parse_month_index(std::string_view text) {
    if (text.size() >= 10) return month_index(parse_iso_date(text));
    if (text.size() == 7 && text[4] == '-') {
        int m = parse_int(text.substr(5, 2), text);
        if (m < 1 || m > 12) throw Error(Errc::UnparseableDate, fmt::format("invalid month '{}'", text));
        return parse_int(text.substr(0, 4), text) * 12 + (m - 1);
    }
    if (text.size() == 6) {  // YYYYMM
        int m = parse_int(text.substr(4, 2), text);
        if (m < 1 || m > 12) throw Error(Errc::UnparseableDate, fmt::format("invalid month '{}'", text));
        return parse_int(text.substr(0, 4), text) * 12 + (m - 1);
    }
    throw Error(Errc::UnparseableDate, fmt::format("unparseable month '{}'", text));
}

int month_index(Date d) {
    std::chrono::year_month_day ymd{d};
    return static_cast<int>(ymd.year()) * 12 + static_cast<int>(static_cast<unsigned>(ymd.month())) - 1;
}

}  // namespace expectq
