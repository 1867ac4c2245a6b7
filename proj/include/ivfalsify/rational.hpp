#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace ivfalsify {

/// Exact rational number used throughout: all masses, capacities, and bounds
/// are computed without rounding, so feasible/infeasible verdicts are exact.
using Rational = boost::multiprecision::mpq_rational;

/// Parse an exact rational from fraction ("3/4", "-1/2"), integer ("2"), or
/// decimal ("0.25") text. Throws std::invalid_argument on malformed input or
/// a zero denominator. The result is always canonical.
Rational parse_rational(std::string_view text);

/// Render in canonical "p/q" form with an explicit denominator ("1/2",
/// "3/1", "0/1") so serialized output is deterministic and unambiguous.
std::string format_rational(const Rational& value);

}  // namespace ivfalsify
