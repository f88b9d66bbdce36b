#include "expectq/calendar.hpp"
#include "expectq/csv.hpp"
#include "expectq/error.hpp"
#include "expectq/hash.hpp"
#include "expectq/panel.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace expectq;

namespace {

template <class F>
Errc error_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an expectq::Error");
    return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("fiscal quarter parsing and ordinal") {
    const auto fq = parse_fiscal_quarter("2013Q2");
    CHECK(fq.year == 2013);
    CHECK(fq.quarter == 2);
    CHECK(parse_fiscal_quarter("2013q2") == fq);
    CHECK(parse_fiscal_quarter("2013-Q2") == fq);
    CHECK(to_string(fq) == "2013Q2");
    CHECK(FiscalQuarter::from_index(fq.index()) == fq);
    CHECK(parse_fiscal_quarter("2014Q1").index() - parse_fiscal_quarter("2013Q4").index() == 1);
    CHECK(error_code([] { parse_fiscal_quarter("2013Q5"); }) == Errc::UnparseableDate);
    CHECK(error_code([] { parse_fiscal_quarter("Q2 2013"); }) == Errc::UnparseableDate);
}

TEST_CASE("iso dates") {
    const auto d = parse_iso_date("2015-03-31");
    CHECK(to_string(d) == "2015-03-31");
    CHECK(parse_iso_date("2015-03-31T16:30:00Z") == d);
    CHECK(quarter_of(d) == FiscalQuarter{2015, 1});
    CHECK(quarter_of(parse_iso_date("2015-04-01")) == FiscalQuarter{2015, 2});
    CHECK(month_index(d) == 2015 * 12 + 2);
    CHECK(parse_month_index("2015-03") == 2015 * 12 + 2);
    CHECK(error_code([] { parse_iso_date("2015-02-30"); }) == Errc::UnparseableDate);
    CHECK(error_code([] { parse_iso_date("yesterday"); }) == Errc::UnparseableDate);
}

TEST_CASE("csv round trip with quoting") {
    std::ostringstream out;
    const std::vector<std::string> header{"a", "b"};
    const std::vector<std::string> row{"x,y", "say \"hi\""};
    write_csv_row(out, header);
    write_csv_row(out, row);
    std::istringstream in(out.str());
    const auto t = read_csv(in);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0] == row);
    CHECK(t.require_column("b") == 1);
    CHECK_FALSE(t.column("c").has_value());
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, -9.795, 1e-300, 123456789.125, 2.0 / 3.0}) CHECK(parse_number(format_number(v)) == v);
    CHECK(format_number(std::nan("")).empty());
    CHECK(std::isnan(parse_number("")));
    CHECK(std::isnan(parse_number("NA")));
}

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("panel lead and lookup") {
    Panel p;
    for (int t = 0; t < 4; ++t) p.add_row("A", 100 + t);
    p.add_row("B", 100);
    p.set_column("capx", {1, 2, 3, 4, 9});
    const auto lead2 = p.lead("capx", 2);
    CHECK(lead2[0] == 3);
    CHECK(lead2[1] == 4);
    CHECK(std::isnan(lead2[2]));
    CHECK(std::isnan(lead2[3]));
    CHECK(std::isnan(lead2[4]));
    CHECK(p.find_row("A", 102) == std::optional<std::size_t>(2));
    CHECK_FALSE(p.find_row("C", 100).has_value());
    p.add_row("A", 100);
    CHECK(error_code([&] { (void)p.find_row("A", 100); }) == Errc::JoinKeyCollision);
}

TEST_CASE("panel csv round trip") {
    Panel p;
    p.add_row("A", FiscalQuarter{2010, 1}.index(), "IND01", "A-2010Q1");
    p.add_row("B", FiscalQuarter{2010, 2}.index(), "", "");
    p.set_column("x", {1.5, std::nan("")});
    std::ostringstream out;
    write_panel_csv(p, out);
    CHECK(out.str().rfind("firm_id,fiscal_quarter,industry,call_id,x\n", 0) == 0);
    std::istringstream in(out.str());
    const auto q = read_panel_csv(in);
    REQUIRE(q.rows() == 2);
    CHECK(q.period()[1] == FiscalQuarter{2010, 2}.index());
    CHECK(q.industry()[0] == "IND01");
    CHECK(q.column("x")[0] == 1.5);
    CHECK(std::isnan(q.column("x")[1]));
}
