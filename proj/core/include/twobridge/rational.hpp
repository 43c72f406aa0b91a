#pragma once

#include <gmpxx.h>

#include <string>

namespace twobridge {

// All grading arithmetic is exact.  Values such as d-invariants of lens
// spaces are rationals with denominators dividing 4pq, far outside what a
// double can carry through a deep recursion without drift, so the whole
// library standardises on GMP rationals.
using Rational = mpq_class;

// Builds the canonical rational num/den.  den must be nonzero.
Rational rat(long num, long den = 1);

// True when r has denominator 1 (after canonicalisation).
bool is_integer(const Rational& r);

// Converts an integral rational to long.  Throws inconsistency_error if r
// is not an integer or does not fit.
long to_long(const Rational& r);

// Renders in lowest terms: integers without a slash ("-3"), everything
// else as "num/den" with the sign on the numerator ("-1/6").
std::string rational_to_string(const Rational& r);

// Parses the formats produced by rational_to_string (plus arbitrary
// non-canonical "a/b").  Throws std::invalid_argument on malformed text or
// a zero denominator.
Rational parse_rational(const std::string& text);

} // namespace twobridge
