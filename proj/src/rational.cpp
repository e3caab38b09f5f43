#include "voaforge/rational.hpp"

#include <cctype>
#include <mutex>
#include <vector>

namespace voaforge {

namespace {

std::size_t scan_digits(std::string_view text, std::size_t pos) {
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  return pos;
}

}  // namespace

Scalar parse_rational(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  std::size_t start = pos;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
  std::size_t digits_end = scan_digits(text, pos);
  if (digits_end == pos) throw ParseError("expected integer numerator", pos);
  std::string numerator(text.substr(start, digits_end - start));
  if (!numerator.empty() && numerator[0] == '+') numerator.erase(0, 1);
  pos = digits_end;
  std::string denominator = "1";
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    std::size_t den_end = scan_digits(text, pos);
    if (den_end == pos) throw ParseError("expected unsigned denominator", pos);
    denominator = std::string(text.substr(pos, den_end - pos));
    pos = den_end;
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw ParseError("trailing characters in rational '" + std::string(text) + "'", pos);
  mpz_class num(numerator, 10);
  mpz_class den(denominator, 10);
  if (den == 0) throw ParseError("zero denominator", pos);
  Scalar value(num, den);
  value.canonicalize();
  return value;
}

std::string to_string(const Scalar& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Scalar binomial(const Scalar& top, long k) {
  if (k < 0) return Scalar(0);
  Scalar result(1);
  for (long i = 0; i < k; ++i) {
    result *= (top - i);
    result /= (i + 1);
  }
  return result;
}

Scalar binomial(long top, long k) {
  if (k < 0) return Scalar(0);
  if (top >= 0) {
    if (k > top) return Scalar(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(top), static_cast<unsigned long>(k));
    return Scalar(r);
  }
  // binom(-a, k) = (-1)^k binom(a + k - 1, k)
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(-top + k - 1), static_cast<unsigned long>(k));
  if (k % 2 != 0) r = -r;
  return Scalar(r);
}

Scalar factorial(long k) {
  if (k < 0) throw std::invalid_argument("factorial of negative integer");
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
  return Scalar(r);
}

Scalar power(const Scalar& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero raised to a negative power");
    Scalar inv = 1 / base;
    return power(inv, -exponent);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Scalar r(num, den);
  r.canonicalize();
  return r;
}

Scalar random_rational(std::mt19937_64& rng, long height, bool nonzero) {
  std::uniform_int_distribution<long> num(-height, height);
  std::uniform_int_distribution<long> den(1, height);
  for (;;) {
    long p = num(rng);
    long q = den(rng);
    Scalar r(p, q);
    r.canonicalize();
    if (!nonzero || r != 0) return r;
  }
}

}  // namespace voaforge
