#include "greenshop/errors.hpp"
#include "greenshop/rational.hpp"

#include <doctest.h>

using greenshop::Rational;

TEST_CASE("rational normalizes sign and common factors") {
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational(6, -4).den() == 2);
    CHECK(Rational(0, 5) == Rational(0));
    CHECK_THROWS_AS(Rational(1, 0), greenshop::ParameterError);
}

TEST_CASE("rational parses integers, decimals and fractions") {
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational::parse("1.25") == Rational(5, 4));
    CHECK(Rational::parse("4/3") == Rational(4, 3));
    CHECK(Rational::parse("-0.5") == Rational(-1, 2));
    CHECK_THROWS_AS(Rational::parse("abc"), greenshop::ParseError);
    CHECK_THROWS_AS(Rational::parse("1/0"), greenshop::ParseError);
    CHECK_THROWS_AS(Rational::parse(""), greenshop::ParseError);
}

TEST_CASE("rational prints decimals when they terminate") {
    CHECK(Rational(5, 4).to_string() == "1.25");
    CHECK(Rational(3, 2).to_string() == "1.5");
    CHECK(Rational(4, 3).to_string() == "4/3");
    CHECK(Rational(2).to_string() == "2");
    for (const char *text : {"0.25", "4/3", "1.5", "-7", "1/3"}) CHECK(Rational::parse(Rational::parse(text).to_string()) == Rational::parse(text));
}

TEST_CASE("rational floor, ceil and arithmetic") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(7, 2).ceil() == 4);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(-7, 2).ceil() == -3);
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
    CHECK(Rational(3, 2) * Rational(84) == Rational(126));
    CHECK(Rational(10) / Rational(4, 3) == Rational(15, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK_THROWS_AS(Rational(1) / Rational(0), greenshop::ParameterError);
}
