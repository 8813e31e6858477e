#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "trendcast/csv.hpp"

using namespace trendcast;

TEST_CASE("split_line handles quotes and embedded commas") {
    CHECK(csv::split_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(csv::split_line("\"x, y\",2") == std::vector<std::string>{"x, y", "2"});
    CHECK(csv::split_line("\"say \"\"hi\"\"\",") == std::vector<std::string>{"say \"hi\"", ""});
    CHECK(csv::split_line("") == std::vector<std::string>{""});
}

TEST_CASE("quote round-trips through split_line") {
    for (std::string s : {"plain", "with,comma", "with \"quote\"", " padded "}) {
        const auto line = csv::join({s, "tail"});
        const auto fields = csv::split_line(line);
        REQUIRE(fields.size() == 2);
        CHECK(fields[0] == s);
    }
}

TEST_CASE("parse keeps 1-based line numbers and skips the header") {
    std::istringstream in("h1,h2\r\n1,2\n\n3,4\n");
    const auto t = csv::parse(in, "mem.csv");
    CHECK(t.header == std::vector<std::string>{"h1", "h2"});
    REQUIRE(t.records.size() == 2);
    CHECK(t.records[0].line == 2);
    CHECK(t.records[1].line == 4);
    CHECK(t.records[1].fields[1] == "4");
}

TEST_CASE("format_double round-trips and writes NaN as an empty field") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, (i % 20) - 10);
        const auto parsed = csv::parse_double(csv::format_double(x));
        REQUIRE(parsed);
        CHECK(*parsed == x);
    }
    CHECK(csv::format_double(std::nan("")) == "");
    CHECK(csv::format_double(100.0) == "100");
}

TEST_CASE("strict numeric parsers reject partial input") {
    CHECK(csv::parse_int("2005") == 2005);
    CHECK_FALSE(csv::parse_int("20x5"));
    CHECK_FALSE(csv::parse_int(""));
    CHECK_FALSE(csv::parse_int("1,000"));
    CHECK(csv::parse_double("0.25") == 0.25);
    CHECK_FALSE(csv::parse_double("0.25abc"));
}
