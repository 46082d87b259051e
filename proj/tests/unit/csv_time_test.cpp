#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "misnet/csv.hpp"
#include "misnet/timeutil.hpp"

namespace misnet {
namespace {

TEST(Csv, QuotedFieldsAndLineBreaks) {
    std::istringstream in("a,\"b,c\",\"say \"\"hi\"\"\"\r\n\n\"multi\nline\",x\n");
    csv::Reader reader(in);
    auto r1 = reader.next();
    ASSERT_TRUE(r1);
    EXPECT_EQ(r1->fields, (std::vector<std::string>{"a", "b,c", "say \"hi\""}));
    auto r2 = reader.next();
    ASSERT_TRUE(r2);
    EXPECT_EQ(r2->line, 3u);
    EXPECT_EQ(r2->fields, (std::vector<std::string>{"multi\nline", "x"}));
    EXPECT_FALSE(reader.next());
}

TEST(Csv, UnterminatedQuoteIsMalformed) {
    std::istringstream in("\"open,x\n");
    csv::Reader reader(in);
    auto r = reader.next();
    ASSERT_TRUE(r);
    EXPECT_TRUE(r->malformed);
}

TEST(Csv, EscapeRoundTrip) {
    const std::vector<std::string> fields{"plain", "with,comma", "with\"quote", "line\nbreak", ""};
    std::istringstream in(csv::join(fields) + "\n");
    csv::Reader reader(in);
    EXPECT_EQ(reader.next()->fields, fields);
}

TEST(Csv, FormatDouble) {
    EXPECT_EQ(csv::format_double(0.5), "0.5");
    EXPECT_EQ(csv::format_double(-0.0), "0");
    EXPECT_EQ(csv::format_double(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(csv::format_double(std::nan("")), "nan");
    EXPECT_EQ(csv::format_optional(std::nullopt), "");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(csv::format_double(x)), x);
}

TEST(Time, ParsesEpochAndIso) {
    EXPECT_EQ(parse_timestamp("1464948000"), 1464948000);
    EXPECT_EQ(parse_timestamp("2016-06-03T10:00:00Z"), 1464948000);
    EXPECT_EQ(parse_timestamp("2016-06-03 10:00:00"), 1464948000);
    EXPECT_EQ(parse_timestamp("2016-06-03T10:00:00.987Z"), 1464948000);
    EXPECT_EQ(parse_timestamp("2016-06-03T12:00:00+02:00"), 1464948000);
    EXPECT_EQ(parse_timestamp("2016-06-03T05:30-0430"), 1464948000);
    EXPECT_EQ(parse_timestamp("2016-06-03T10:00"), 1464948000);
    EXPECT_EQ(parse_timestamp("2016-06-03"), 1464912000);
}

TEST(Time, RejectsGarbage) {
    for (const char* bad : {"", "yesterday", "2016-13-01", "2016-02-30", "2016-06-03T25:00:00Z", "12ab",
                            "2016-06-03T10:00:00+2"}) {
        EXPECT_EQ(parse_timestamp(bad), std::nullopt) << bad;
    }
}

TEST(Time, FormatAndMonthBoundaries) {
    EXPECT_EQ(format_timestamp(1464948000), "2016-06-03T10:00:00Z");
    EXPECT_EQ(format_timestamp(*parse_timestamp("2016-12-31T23:59:59Z") + 1), "2017-01-01T00:00:00Z");
    EXPECT_EQ(next_month_start(*parse_timestamp("2016-01-31T12:00:00Z")), *parse_timestamp("2016-02-01"));
    EXPECT_EQ(next_month_start(*parse_timestamp("2016-12-01")), *parse_timestamp("2017-01-01"));
}

}  // namespace
}  // namespace misnet
