#include "pcim/rational.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "pcim/errors.hpp"

namespace pcim {

Rational rat(long num, long den) {
  if (den == 0) raise(Errc::BadParameters, "rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_str();
}

namespace {

// digits with no leading zero; "0" alone is allowed only for the numerator
bool scan_digits(std::string_view s, std::size_t& pos, bool allow_zero) {
  std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == start) return false;
  std::size_t len = pos - start;
  if (s[start] == '0' && (len > 1 || !allow_zero)) return false;
  return true;
}

}  // namespace

std::optional<Rational> try_parse_rational(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && text[pos] == '-') {
    negative = true;
    ++pos;
  }
  std::size_t num_start = pos;
  if (!scan_digits(text, pos, /*allow_zero=*/!negative)) return std::nullopt;
  std::string_view num = text.substr(num_start, pos - num_start);
  std::string_view den;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    std::size_t den_start = pos;
    if (!scan_digits(text, pos, /*allow_zero=*/false)) return std::nullopt;
    den = text.substr(den_start, pos - den_start);
  }
  if (pos != text.size()) return std::nullopt;

  if (!den.empty()) {
    if (num == "0") return std::nullopt;  // canonical zero is "0"
    if (den == "1") return std::nullopt;  // canonical integers carry no "/1"
    Integer n(std::string(num), 10), d(std::string(den), 10);
    if (gcd(n, d) != 1) return std::nullopt;  // not in lowest terms
    Rational q;
    q.get_num() = negative ? Integer(-n) : n;
    q.get_den() = d;
    return q;
  }
  Integer n(std::string(num), 10);
  Rational q;
  q.get_num() = negative ? Integer(-n) : n;
  q.get_den() = 1;
  return q;
}

Rational parse_rational(std::string_view text, const std::string& context) {
  if (auto q = try_parse_rational(text)) return *q;
  std::string where = context.empty() ? "" : context + ": ";
  raise(Errc::NonCanonicalRational,
        where + "\"" + std::string(text) +
            "\" is not a canonical rational (expected \"p/q\" or \"p\" in lowest terms)");
}

double to_double(const Rational& q) {
  return q.get_d();
}

double log_rational(const Rational& q) {
  if (sgn(q) <= 0) raise(Errc::BadParameters, "log of a non-positive rational");
  long num_exp = 0, den_exp = 0;
  double num_frac = mpz_get_d_2exp(&num_exp, q.get_num().get_mpz_t());
  double den_frac = mpz_get_d_2exp(&den_exp, q.get_den().get_mpz_t());
  return std::log(num_frac) - std::log(den_frac) +
         std::numbers::ln2 * static_cast<double>(num_exp - den_exp);
}

Rational pow_rational(const Rational& base, unsigned long exponent) {
  Rational result;
  mpz_pow_ui(result.get_num().get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(result.get_den().get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  // powers of a canonical rational stay canonical
  return result;
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NotAContraction: return "NotAContraction";
    case Errc::ImageEscapesDomain: return "ImageEscapesDomain";
    case Errc::UnorderedCuts: return "UnorderedCuts";
    case Errc::ZeroSlope: return "ZeroSlope";
    case Errc::OnCutPoint: return "OnCutPoint";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::NotACutPoint: return "NotACutPoint";
    case Errc::BadParameters: return "BadParameters";
    case Errc::MalformedDefinition: return "MalformedDefinition";
    case Errc::PrefixTooShort: return "PrefixTooShort";
    case Errc::ItineraryLeftXtilde: return "ItineraryLeftXtilde";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::LeftXtilde: return "LeftXtilde";
    case Errc::DepthOverflow: return "DepthOverflow";
    case Errc::SeparationRequired: return "SeparationRequired";
    case Errc::LambdaDegenerate: return "LambdaDegenerate";
    case Errc::EpsilonTooLarge: return "EpsilonTooLarge";
    case Errc::RepresentativeOnDeltaPreimage: return "RepresentativeOnDeltaPreimage";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::NonCanonicalRational: return "NonCanonicalRational";
    case Errc::ValidationError: return "ValidationError";
  }
  return "UnknownError";
}

}  // namespace pcim
