#pragma once

#include <gmpxx.h>

#include <random>

#include <stdexcept>
#include <string>
#include <string_view>

namespace voaforge {

/// Exact rational scalar. Every quantity in the engine is one of these;
/// GMP keeps numerator/denominator canonical after each arithmetic op.
using Scalar = mpq_class;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses "p" or "p/q" (optional leading sign, q > 0). Rejects anything else,
/// in particular decimals and symbolic constants.
Scalar parse_rational(std::string_view text);

/// "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Scalar& value);

/// Generalized binomial coefficient binom(top, k) for k >= 0; zero for k < 0.
Scalar binomial(const Scalar& top, long k);
Scalar binomial(long top, long k);

Scalar factorial(long k);

/// Integer power of a scalar; negative exponents require a nonzero base.
Scalar power(const Scalar& base, long exponent);

/// Pseudo-random rational p/q with |p| <= height and 1 <= q <= height.
Scalar random_rational(std::mt19937_64& rng, long height = 100, bool nonzero = false);

/// p/q in canonical form (mpq_class(p, q) alone does not reduce).
inline Scalar fraction(long p, long q) {
  Scalar r(p, q);
  r.canonicalize();
  return r;
}

inline Scalar sign_power(long exponent) { return (exponent % 2 == 0) ? Scalar(1) : Scalar(-1); }

}  // namespace voaforge
