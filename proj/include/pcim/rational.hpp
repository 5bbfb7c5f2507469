#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace pcim {

// Every quantity the engine branches on is an exact rational. Rational is
// GMP's mpq_class, which keeps values in lowest terms with a positive
// denominator.
using Rational = mpq_class;
using Integer = mpz_class;

Rational rat(long num, long den = 1);

// Canonical text form: "0", "-7", "3/4", "-22/7". No '+' sign, no sign on
// zero, no leading zeros, denominator >= 2 and coprime with the numerator.
std::string to_string(const Rational& q);

// Strict parser accepting exactly the canonical form above.
std::optional<Rational> try_parse_rational(std::string_view text);

// Throwing variant; raises PcimError{NonCanonicalRational}. `context` is
// prepended to the diagnostic (file:line, field name, ...).
Rational parse_rational(std::string_view text, const std::string& context = "");

double to_double(const Rational& q);

// Natural log of q > 0, accurate even when numerator and denominator are
// far outside double range.
double log_rational(const Rational& q);

Rational pow_rational(const Rational& base, unsigned long exponent);

}  // namespace pcim
