#include "ivfalsify/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace ivfalsify {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad(text);

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) bad(text);

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad(text);
    Rational denominator{std::string(den)};
    if (denominator == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    value = Rational{std::string(num)} / denominator;
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) bad(text);
    if (!whole.empty() && !all_digits(whole)) bad(text);
    if (!frac.empty() && !all_digits(frac)) bad(text);
    std::string digits = std::string(whole) + std::string(frac);
    Rational scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational{digits.empty() ? "0" : digits} / scale;
  } else {
    if (!all_digits(s)) bad(text);
    value = Rational{std::string(s)};
  }
  if (negative) value = -value;
  mpq_canonicalize(value.backend().data());
  return value;
}

std::string format_rational(const Rational& value) {
  std::string s = value.str();
  if (s.find('/') == std::string::npos) s += "/1";
  return s;
}

}  // namespace ivfalsify
