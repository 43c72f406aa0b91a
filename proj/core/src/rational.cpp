#include "twobridge/rational.hpp"

#include "twobridge/errors.hpp"

#include <cctype>
#include <stdexcept>

namespace twobridge {

Rational rat(long num, long den) {
  if (den == 0) {
    throw std::invalid_argument("rational denominator must be nonzero");
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

bool is_integer(const Rational& r) {
  return r.get_den() == 1;
}

long to_long(const Rational& r) {
  if (!is_integer(r)) {
    throw inconsistency_error("expected integral rational, got " +
                              rational_to_string(r));
  }
  const mpz_class& num = r.get_num();
  if (!num.fits_slong_p()) {
    throw inconsistency_error("integral rational out of long range: " +
                              rational_to_string(r));
  }
  return num.get_si();
}

std::string rational_to_string(const Rational& r) {
  // mpq_class keeps values canonical; get_str already omits "/1".
  return r.get_str();
}

Rational parse_rational(const std::string& text) {
  // Validate shape by hand: gmp's string constructor accepts whitespace and
  // odd bases, and we want strict "[-]digits[/digits]".
  const auto bad = [&] {
    throw std::invalid_argument("malformed rational: '" + text + "'");
  };
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
  std::size_t digits = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    ++pos;
    ++digits;
  }
  if (digits == 0) bad();
  if (pos < text.size()) {
    if (text[pos] != '/') bad();
    ++pos;
    std::size_t den_digits = 0;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      ++den_digits;
    }
    if (den_digits == 0 || pos != text.size()) bad();
  }

  // gmp accepts an optional leading '-' but not '+'.
  const std::string normalised = text[0] == '+' ? text.substr(1) : text;
  Rational r;
  if (r.set_str(normalised, 10) != 0) bad();
  if (r.get_den() == 0) {
    throw std::invalid_argument("zero denominator in rational: '" + text + "'");
  }
  r.canonicalize();
  return r;
}

} // namespace twobridge
