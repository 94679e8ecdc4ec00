#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace w11 {

/// Arbitrary-precision rational. gmpxx keeps arithmetic results canonical
/// (lowest terms, positive denominator); values built from a raw
/// numerator/denominator pair must go through make_rational.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Always "<num>/<den>", including integers ("3/1").
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Accepts "<num>/<den>" or a bare integer.
Rational parse_rational(std::string_view text);

Integer binomial(unsigned long n, unsigned long k);

}  // namespace w11
