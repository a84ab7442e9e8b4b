#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "inquest/csv.hpp"
#include "inquest/error.hpp"

namespace inquest {
namespace {

TEST(Csv, ParsesQuotedFieldsAndSkipsBlankLines) {
    const auto t = csv::parse("a,b,c\n1,\"x,y\",\"say \"\"hi\"\"\"\n\n2,,z\r\n", "t.csv");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][1], "x,y");
    EXPECT_EQ(t.rows[0][2], "say \"hi\"");
    EXPECT_EQ(t.rows[1][1], "");
    EXPECT_EQ(t.rows[1][2], "z");
    EXPECT_EQ(t.line_numbers[1], 4u);
    EXPECT_EQ(t.column("c"), 2u);
}

TEST(Csv, StripsByteOrderMark) {
    const auto t = csv::parse("\xEF\xBB\xBFunit_id\nA\n", "bom.csv");
    EXPECT_EQ(t.column("unit_id"), 0u);
}

TEST(Csv, MissingColumnNamesFile) {
    const auto t = csv::parse("a\n1\n", "f.csv");
    try {
        (void)t.column("b");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("f.csv"), std::string::npos);
    }
}

TEST(Csv, BadNumberReportsRowAndColumn) {
    const auto t = csv::parse("n,x\n1,abc\n", "f.csv");
    try {
        (void)csv::parse_real(t, 0, 1);
        FAIL();
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("f.csv"), std::string::npos);
        EXPECT_NE(msg.find("row"), std::string::npos);
        EXPECT_NE(msg.find("x"), std::string::npos);
    }
}

// Negative counts parse here and are reported later as dataset violations.
TEST(Csv, CountsMustBeIntegers) {
    const auto t = csv::parse("n\n-1\n2.5\n7x\n", "f.csv");
    EXPECT_EQ(csv::parse_count(t, 0, 0), -1);
    EXPECT_THROW((void)csv::parse_count(t, 1, 0), ParseError);
    EXPECT_THROW((void)csv::parse_count(t, 2, 0), ParseError);
}

TEST(Csv, EscapeRoundTrips) {
    const std::vector<std::string> fields{"plain", "a,b", "q\"uote", ""};
    const auto t = csv::parse("h1,h2,h3,h4\n" + csv::join_row(fields) + "\n", "r.csv");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0], fields);
}

TEST(Csv, FormatNumberIsShortestExactText) {
    EXPECT_EQ(csv::format_number(0.0), "0");
    EXPECT_EQ(csv::format_number(16.75), "16.75");
    EXPECT_EQ(csv::format_number(3.0), "3");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = dist(rng);
        EXPECT_EQ(std::stod(csv::format_number(v)), v);
    }
}

}  // namespace
}  // namespace inquest
