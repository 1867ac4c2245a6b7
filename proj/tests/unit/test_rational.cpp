#include <doctest.h>

#include <stdexcept>

#include "ivfalsify/rational.hpp"

using namespace ivfalsify;

TEST_CASE("parse_rational accepts fractions, integers, and decimals") {
  CHECK(parse_rational("1/4") == Rational(1, 4));
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(parse_rational("-3/9") == Rational(-1, 3));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("-0") == Rational(0));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("2.5") == Rational(5, 2));
  CHECK(parse_rational("-0.1") == Rational(-1, 10));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(parse_rational("3.") == Rational(3));
  CHECK(parse_rational(" 1/2 ") == Rational(1, 2));
}

TEST_CASE("parse_rational rejects malformed input") {
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("one half"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.2.3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1e3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("."), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("--1"), std::invalid_argument);
}

TEST_CASE("format_rational always includes the denominator") {
  CHECK(format_rational(Rational(1, 2)) == "1/2");
  CHECK(format_rational(Rational(3)) == "3/1");
  CHECK(format_rational(Rational(0)) == "0/1");
  CHECK(format_rational(Rational(-2, 6)) == "-1/3");
}

TEST_CASE("parsed values are canonical so comparisons are exact") {
  // The multiprecision backend does not canonicalize string input on its
  // own; the parser must, or equality and ordering silently break.
  Rational a = parse_rational("2/4");
  Rational b = parse_rational("1/2");
  CHECK(a == b);
  CHECK(format_rational(a) == "1/2");
  CHECK(parse_rational("0.125") + parse_rational("1/8") == Rational(1, 4));
}
