#include <doctest.h>

#include <random>

#include "voaforge/formal.hpp"

using namespace voaforge;
using namespace voaforge::formal;

namespace {

std::vector<Scalar> coeffs(const SeriesWindow& s) {
  std::vector<Scalar> v;
  for (long p = s.lo(); p <= s.hi(); ++p) v.push_back(s.at(p));
  return v;
}

std::vector<Scalar> ints(std::initializer_list<long> xs) {
  std::vector<Scalar> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

RationalFunction random_rational_function(std::mt19937_64& rng, const Scalar& z) {
  std::uniform_int_distribution<long> small(0, 3), deg(0, 5);
  std::vector<Scalar> g(static_cast<std::size_t>(deg(rng) + 1));
  for (auto& c : g) c = random_rational(rng, 9);
  if (g.back() == 0) g.back() = 1;
  return RationalFunction(Polynomial(g), small(rng), small(rng), z);
}

// Test-only oracle: multiply the truncated expansion of f by a Laurent
// polynomial term by term.
Scalar residue_at_z_oracle(const RationalFunction& f) {
  // Res_{x=z} g(x) / (x^l (x-z)^k) = coefficient of y^{k-1} in g(z+y) (z+y)^{-l}.
  if (f.k() == 0) return Scalar(0);
  Polynomial shifted = f.numerator().shift(f.z());
  Scalar acc(0);
  for (long a = 0; a <= f.k() - 1; ++a) {
    long b = f.k() - 1 - a;  // power of y from (z+y)^{-l}
    acc += shifted.coefficient(a) * binomial(-f.l(), b) * power(f.z(), -f.l() - b);
  }
  return acc;
}

}  // namespace

TEST_CASE("binomial expansion conventions") {
  CHECK(coeffs(binom_expand(BinomKind::XMinusZ, -1, Scalar(1), -3, -1)) == ints({1, 1, 1}));
  CHECK(coeffs(binom_expand(BinomKind::ZMinusX, -1, Scalar(1), 0, 2)) == ints({1, 1, 1}));
  CHECK(coeffs(binom_expand(BinomKind::XMinusZ, 2, Scalar(1))) == ints({1, -2, 1}));
  CHECK(coeffs(binom_expand(BinomKind::ZMinusX, 2, Scalar(1))) == ints({1, -2, 1}));
  CHECK(coeffs(binom_expand(BinomKind::X1MinusX2, 3, Scalar(0))) == ints({1, -3, 3, -1}));
  CHECK_THROWS_AS(binom_expand(BinomKind::XMinusZ, -1, Scalar(1), 0, 3), WindowError);
  CHECK_THROWS_AS(binom_expand(BinomKind::ZMinusX, -1, Scalar(1), -3, -1), WindowError);
}

TEST_CASE("expansions at zero and infinity") {
  RationalFunction f(Polynomial::constant(1), 0, 1, Scalar(-1));  // 1/(x+1)
  CHECK(coeffs(iota_zero(f, 0, 3)) == ints({1, -1, 1, -1}));
  CHECK(coeffs(iota_infty(f, -3, -1)) == ints({1, -1, 1}));
  RationalFunction inv_x(Polynomial::constant(1), 1, 0, Scalar(-1));
  CHECK(coeffs(iota_zero(inv_x, -1, 1)) == ints({1, 0, 0}));
  CHECK_THROWS_AS(iota_zero(inv_x, -2, 0), WindowError);
  CHECK_THROWS_AS(iota_infty(f, -2, 0), WindowError);
  // polynomial: both expansions agree
  RationalFunction p(Polynomial(ints({1, 2, 3})), 0, 0, Scalar(-1));
  CHECK(coeffs(iota_zero(p, 0, 2)) == coeffs(iota_infty(p, 0, 2)));
  // difference at power 0 for 1/(x+1)
  CHECK(f.iota_zero_coefficient(0) - f.iota_infty_coefficient(0) == 1);
}

TEST_CASE("expansion at zero equals multiplied-out truncations") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Scalar z = random_rational(rng, 9, true);
    RationalFunction f = random_rational_function(rng, z);
    // oracle: x^{-l} * g * (z-x)^{-k} * (-1)^k, using binom_expand for (z-x)^{-k}
    long hi = 4;
    SeriesWindow zinv = binom_expand(BinomKind::ZMinusX, -f.k(), z, 0, hi + f.l() + 1);
    LaurentPolynomial::Map m;
    for (long j = 0; j <= f.numerator().degree(); ++j)
      if (f.numerator().coefficient(j) != 0) m[j - f.l()] = f.numerator().coefficient(j) * sign_power(f.k());
    SeriesWindow oracle = zinv.times(LaurentPolynomial(m));
    for (long p = -f.l(); p <= hi; ++p) {
      if (!oracle.covers(p)) continue;
      CHECK(f.iota_zero_coefficient(p) == oracle.at(p));
    }
  }
}

TEST_CASE("reconstruction examples") {
  SeriesWindow s(Direction::AtInfinity, -3, -1, ints({1, -1, 1}), true);
  RationalFunction r = rational_from_upper_expansion(s, 0, 1, Scalar(-1), 0);
  CHECK(r == RationalFunction(Polynomial::constant(1), 0, 1, Scalar(-1)));
  SeriesWindow five(Direction::AtInfinity, -2, 0, ints({0, 0, 5}), true);
  CHECK(rational_from_upper_expansion(five, 0, 0, Scalar(-1), 0) ==
        RationalFunction(Polynomial::constant(5), 0, 0, Scalar(-1)));
  RationalFunction q(Polynomial(ints({0, 1})), 0, 2, Scalar(2));  // x/(x-2)^2
  SeriesWindow up = iota_infty(q, -8, q.top_power());
  CHECK(rational_from_upper_expansion(up, 0, 2, Scalar(2), 1) == q);
  // a violated certificate
  SeriesWindow bad(Direction::AtInfinity, -4, -1, ints({1, 1, 1, 1}), true);
  CHECK_THROWS_AS(rational_from_upper_expansion(bad, 0, 1, Scalar(-1), 0), ReconstructionError);
}

TEST_CASE("shift substitution") {
  LaurentPolynomial sq(LaurentPolynomial::Map{{2, Scalar(1)}});
  LaurentPolynomial shifted = shift_substitute(sq, Scalar(1));
  CHECK(shifted.coefficient(2) == 1);
  CHECK(shifted.coefficient(1) == 2);
  CHECK(shifted.coefficient(0) == 1);
  CHECK_THROWS_AS(shift_substitute(LaurentPolynomial(LaurentPolynomial::Map{{-1, Scalar(1)}}), Scalar(1)),
                  SubstitutionError);
  RationalFunction inv_x(Polynomial::constant(1), 1, 0, Scalar(-1));
  RationalFunction moved = shift_substitute(inv_x, Scalar(1));  // 1/(x+1)
  CHECK(moved == RationalFunction(Polynomial::constant(1), 0, 1, Scalar(-1)));
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Scalar z = random_rational(rng, 9, true);
    RationalFunction f = random_rational_function(rng, z);
    Scalar z0 = (trial % 2 == 0) ? z : Scalar(0);
    if (trial % 3 == 0) {
      f = RationalFunction(f.numerator(), f.l(), 0, z);
      z0 = random_rational(rng, 9, true);
    }
    RationalFunction g = shift_substitute(f, z0);
    CHECK(shift_substitute(g, -z0) == f);
    // values agree at a sample point away from the poles
    Scalar x(7, 13);
    auto value = [](const RationalFunction& h, const Scalar& at) -> Scalar {
      return h.numerator().evaluate(at) / (power(at, h.l()) * power(at - h.z(), h.k()));
    };
    CHECK(value(g, x) == value(f, x + z0));
  }
  RationalFunction two_poles(Polynomial::constant(1), 1, 1, Scalar(-1));
  CHECK_THROWS_AS(shift_substitute(two_poles, Scalar(3)), SubstitutionError);
}

TEST_CASE("residues") {
  CHECK(residue(LaurentPolynomial(LaurentPolynomial::Map{{-1, Scalar(1)}})) == 1);
  CHECK(residue(LaurentPolynomial(LaurentPolynomial::Map{{0, Scalar(3)}, {2, Scalar(1)}})) == 0);
  RationalFunction f(Polynomial::constant(1), 1, 1, Scalar(-1));  // 1/(x(x+1))
  CHECK(residue(iota_zero(f, -1, 2)) == 1);
  CHECK_THROWS_AS(residue(iota_zero(f, 0, 2)), WindowError);
}

TEST_CASE("residue difference against partial fractions") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    Scalar z = random_rational(rng, 9, true);
    RationalFunction f = random_rational_function(rng, z);
    Scalar r0 = f.iota_zero_coefficient(-1 < -f.l() ? -f.l() : -1);
    if (-1 < -f.l()) r0 = 0;
    Scalar rinf = (-1 > f.top_power()) ? Scalar(0) : f.iota_infty_coefficient(-1);
    // The expansion at 0 minus the one at infinity picks up minus the residue at z.
    CHECK(r0 - rinf == -residue_at_z_oracle(f));
  }
}

TEST_CASE("expansions are linear over Laurent monomials and binomial multipliers") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    Scalar z = random_rational(rng, 9, true);
    RationalFunction f = random_rational_function(rng, z);
    long e = static_cast<long>(trial % 5) - 2;
    RationalFunction mono(Polynomial::constant(1), -e, 0, z);  // x^e
    RationalFunction mf = mono * f;
    for (long p = std::max(-f.l() + e, -mf.l()); p <= 4; ++p)
      CHECK(mf.iota_zero_coefficient(p) == f.iota_zero_coefficient(p - e));
    for (long p = mf.top_power() - 5; p <= mf.top_power(); ++p)
      CHECK(mf.iota_infty_coefficient(p) == f.iota_infty_coefficient(p - e));
    for (long n = -3; n <= 3; ++n) {
      RationalFunction lin(Polynomial::constant(1), 0, -n, z);  // (x-z)^n
      RationalFunction nf = lin * f;
      // at zero: multiply by (-z+x)^n expanded ascending
      SeriesWindow fz = iota_zero(f, -f.l(), 6);
      SeriesWindow bz = binom_expand(BinomKind::ZMinusX, n, z, 0, 8);
      LaurentPolynomial::Map sign;
      sign[0] = sign_power(n);
      SeriesWindow mult = (fz * bz).times(LaurentPolynomial(sign));
      for (long p = mult.lo(); p <= mult.hi(); ++p) CHECK(nf.iota_zero_coefficient(p) == mult.at(p));
      // at infinity: multiply by (x-z)^n expanded descending
      long top = f.top_power();
      SeriesWindow fi = iota_infty(f, top - 8, top);
      SeriesWindow bi = binom_expand(BinomKind::XMinusZ, n, z, n - 8, n);
      SeriesWindow multi = fi * bi;
      for (long p = multi.lo(); p <= multi.hi(); ++p) CHECK(nf.iota_infty_coefficient(p) == multi.at(p));
    }
  }
}

TEST_CASE("reconstruction inverts the expansion at infinity on 100 samples") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<long> small(0, 3), deg(0, 5), slack(0, 4);
  for (int trial = 0; trial < 100; ++trial) {
    Scalar z = random_rational(rng, 9, true);
    long l = small(rng), k = small(rng), d = deg(rng);
    std::vector<Scalar> g(static_cast<std::size_t>(d + 1));
    for (auto& c : g) c = random_rational(rng, 9);
    g.back() = random_rational(rng, 9, true);
    RationalFunction f(Polynomial(g), l, k, z);
    long top = d - l - k;
    long extra = slack(rng);
    SeriesWindow s = iota_infty(f, top - (d + k + l) - extra, std::max(top, f.top_power()));
    RationalFunction r = rational_from_upper_expansion(s, l, k, z, d);
    CHECK(r == f);
    CHECK(iota_infty(r, s.lo(), s.hi()) == s);
  }
}
