#include <doctest.h>

#include <cmath>
#include <random>

#include "lingcurr/text_io.hpp"

using namespace lingcurr::io;

TEST_CASE("format_double round-trips") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal(0.0, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double v = normal(rng);
        CHECK(parse_double(format_double(v)).value() == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(3.0) == "3");
}

TEST_CASE("parse_double rejects junk and accepts a leading plus") {
    CHECK_FALSE(parse_double("abc").has_value());
    CHECK_FALSE(parse_double("1.0x").has_value());
    CHECK_FALSE(parse_double("").has_value());
    CHECK(parse_double(" +2.5 ").value() == 2.5);
    CHECK(std::isnan(parse_double("NaN").value()));
    CHECK(parse_integer("42").value() == 42);
    CHECK_FALSE(parse_integer("4.2").has_value());
}

TEST_CASE("csv fields with quotes and commas survive a round trip") {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", ""};
    CHECK(split_csv_line(join_csv(fields)) == fields);
    CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
}

TEST_CASE("trim") {
    CHECK(trim("  x y \t") == "x y");
    CHECK(trim("") == "");
}
