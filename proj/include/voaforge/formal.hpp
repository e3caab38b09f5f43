#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "voaforge/rational.hpp"

namespace voaforge::formal {

class WindowError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Thrown when x^l (x-z)^k s fails to be a polynomial of the declared degree.
class ReconstructionError : public std::runtime_error {
 public:
  ReconstructionError(const std::string& what, long power) : std::runtime_error(what), power_(power) {}
  long power() const { return power_; }

 private:
  long power_;
};

class SubstitutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense polynomial, coefficient i multiplies x^i. Trailing zeros are trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coefficients);
  static Polynomial constant(const Scalar& c);
  static Polynomial monomial(long degree, const Scalar& c = Scalar(1));
  /// (x - a)^e for e >= 0.
  static Polynomial linear_power(const Scalar& a, long e);

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  Scalar coefficient(long i) const;
  const std::vector<Scalar>& coefficients() const { return c_; }
  Scalar evaluate(const Scalar& x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Scalar& s) const;
  bool operator==(const Polynomial& o) const { return c_ == o.c_; }

  /// Exact division by (x - a); the quotient and the remainder p(a).
  std::pair<Polynomial, Scalar> divide_linear(const Scalar& a) const;
  /// p(x + a).
  Polynomial shift(const Scalar& a) const;

 private:
  void trim();
  std::vector<Scalar> c_;
};

/// Finite Laurent polynomial with payload T. T needs default construction,
/// T += T, T * Scalar (via scale) and an emptiness test.
template <class T>
class Laurent {
 public:
  using Map = std::map<long, T>;
  Laurent() = default;
  explicit Laurent(Map terms) : terms_(std::move(terms)) { prune(); }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  T coefficient(long p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? T() : it->second;
  }
  T residue() const { return coefficient(-1); }
  void set(long p, T value) {
    terms_[p] = std::move(value);
    prune();
  }
  long min_power() const { return terms_.begin()->first; }
  long max_power() const { return terms_.rbegin()->first; }

 private:
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (is_empty_payload(it->second))
        it = terms_.erase(it);
      else
        ++it;
    }
  }
  static bool is_empty_payload(const Scalar& s) { return s == 0; }
  template <class U>
  static bool is_empty_payload(const U& u) {
    return u.empty();
  }
  Map terms_;
};

using LaurentPolynomial = Laurent<Scalar>;

/// p(x + z0) for a Laurent polynomial with no negative powers.
LaurentPolynomial shift_substitute(const LaurentPolynomial& f, const Scalar& z0);

/// g(x) / (x^l (x - z)^k), kept canonical: x does not divide g and (x - z)
/// does not divide g. When k = 0 the value of z carries no information.
class RationalFunction {
 public:
  RationalFunction() : z_(-1) {}
  RationalFunction(Polynomial numerator, long l, long k, Scalar z);

  const Polynomial& numerator() const { return g_; }
  long l() const { return l_; }
  long k() const { return k_; }
  const Scalar& z() const { return z_; }
  bool is_zero() const { return g_.is_zero(); }

  /// Coefficient of x^p in the expansion at x = 0 (zero below -l).
  Scalar iota_zero_coefficient(long p) const;
  /// Coefficient of x^p in the expansion at infinity (zero above the top power).
  Scalar iota_infty_coefficient(long p) const;
  /// Largest power present in the expansion at infinity.
  long top_power() const;

  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator*(const Scalar& s) const;

  /// Exact comparison of the represented functions.
  bool operator==(const RationalFunction& o) const;

 private:
  void canonicalize();
  Polynomial g_;
  long l_ = 0;
  long k_ = 0;
  Scalar z_;
};

/// f(x + z0). The poles {0, z} move to {-z0, z - z0}; the result must again
/// have its poles inside {0, z'} for a single nonzero z'.
RationalFunction shift_substitute(const RationalFunction& f, const Scalar& z0);

enum class Direction { AtZero, AtInfinity };

/// Coefficients over an explicit contiguous power range. Queries outside the
/// range are errors, except on the side where the series is known to stop:
/// an at-zero window flagged `complete` has nothing below `lo`, an
/// at-infinity window flagged `complete` has nothing above `hi`.
class SeriesWindow {
 public:
  SeriesWindow(Direction d, long lo, long hi, std::vector<Scalar> coeffs, bool complete = false);

  Direction direction() const { return dir_; }
  long lo() const { return lo_; }
  long hi() const { return hi_; }
  bool complete() const { return complete_; }
  Scalar at(long p) const;
  bool covers(long p) const;
  SeriesWindow slice(long lo, long hi) const;

  /// Product of two windows of the same direction, over the range where all
  /// contributions are known.
  SeriesWindow operator*(const SeriesWindow& o) const;
  SeriesWindow times(const LaurentPolynomial& p) const;

  bool operator==(const SeriesWindow& o) const;

 private:
  Direction dir_;
  long lo_, hi_;
  std::vector<Scalar> c_;
  bool complete_;
};

enum class BinomKind { XMinusZ, ZMinusX, X1MinusX2 };

/// Binomial expansion under the formal-variable convention: (x-z)^n in
/// descending powers of x, (z-x)^n in ascending powers of x, and for
/// (x1-x2)^n the window is indexed by the power of x2 (x1^{n-i} implicit).
SeriesWindow binom_expand(BinomKind kind, long n, const Scalar& z, long lo, long hi);
/// Whole expansion for n >= 0.
SeriesWindow binom_expand(BinomKind kind, long n, const Scalar& z);

SeriesWindow iota_zero(const RationalFunction& f, long lo, long hi);
SeriesWindow iota_infty(const RationalFunction& f, long lo, long hi);

/// Inverse of iota_infty given the certificate that x^l (x-z)^k s is a
/// polynomial of degree at most degree_bound.
RationalFunction rational_from_upper_expansion(const SeriesWindow& s, long l, long k, const Scalar& z,
                                               long degree_bound);

Scalar residue(const SeriesWindow& s);
Scalar residue(const LaurentPolynomial& p);

}  // namespace voaforge::formal
