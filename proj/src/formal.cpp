#include "voaforge/formal.hpp"

#include <algorithm>
#include <limits>

namespace voaforge::formal {

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::vector<Scalar> coefficients) : c_(std::move(coefficients)) { trim(); }

Polynomial Polynomial::constant(const Scalar& c) { return Polynomial(std::vector<Scalar>{c}); }

Polynomial Polynomial::monomial(long degree, const Scalar& c) {
  if (degree < 0) throw std::invalid_argument("monomial of negative degree");
  std::vector<Scalar> v(static_cast<std::size_t>(degree + 1));
  v.back() = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::linear_power(const Scalar& a, long e) {
  if (e < 0) throw std::invalid_argument("negative power of a linear factor");
  std::vector<Scalar> v(static_cast<std::size_t>(e + 1));
  for (long i = 0; i <= e; ++i) v[static_cast<std::size_t>(i)] = binomial(e, i) * power(-a, e - i);
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Scalar Polynomial::coefficient(long i) const {
  if (i < 0 || i > degree()) return Scalar(0);
  return c_[static_cast<std::size_t>(i)];
}

Scalar Polynomial::evaluate(const Scalar& x) const {
  Scalar r(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Scalar> v(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Scalar(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial();
  std::vector<Scalar> v(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator*(const Scalar& s) const {
  std::vector<Scalar> v(c_);
  for (auto& x : v) x *= s;
  return Polynomial(std::move(v));
}

std::pair<Polynomial, Scalar> Polynomial::divide_linear(const Scalar& a) const {
  if (is_zero()) return {Polynomial(), Scalar(0)};
  std::vector<Scalar> q(c_.size() - 1);
  Scalar carry(0);
  for (long i = degree(); i >= 0; --i) {
    carry = carry * a + c_[static_cast<std::size_t>(i)];
    if (i > 0) q[static_cast<std::size_t>(i - 1)] = carry;
  }
  return {Polynomial(std::move(q)), carry};
}

Polynomial Polynomial::shift(const Scalar& a) const {
  Polynomial r;
  Polynomial step(std::vector<Scalar>{a, Scalar(1)});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * step + constant(*it);
  return r;
}

LaurentPolynomial shift_substitute(const LaurentPolynomial& f, const Scalar& z0) {
  if (f.is_zero()) return f;
  if (f.min_power() < 0)
    throw SubstitutionError("x -> x + z0 in a negative power is not a Laurent polynomial; use a rational function");
  std::vector<Scalar> c(static_cast<std::size_t>(f.max_power() + 1));
  for (const auto& [p, v] : f.terms()) c[static_cast<std::size_t>(p)] = v;
  Polynomial s = Polynomial(std::move(c)).shift(z0);
  LaurentPolynomial::Map m;
  for (long i = 0; i <= s.degree(); ++i)
    if (s.coefficient(i) != 0) m[i] = s.coefficient(i);
  return LaurentPolynomial(std::move(m));
}

// ---------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(Polynomial numerator, long l, long k, Scalar z)
    : g_(std::move(numerator)), l_(l), k_(k), z_(std::move(z)) {
  if (z_ == 0) throw std::invalid_argument("pole location z must be nonzero");
  canonicalize();
}

void RationalFunction::canonicalize() {
  if (l_ < 0) {
    g_ = g_ * Polynomial::monomial(-l_);
    l_ = 0;
  }
  if (k_ < 0) {
    g_ = g_ * Polynomial::linear_power(z_, -k_);
    k_ = 0;
  }
  if (g_.is_zero()) {
    l_ = k_ = 0;
    return;
  }
  while (l_ > 0 && g_.coefficient(0) == 0) {
    g_ = g_.divide_linear(Scalar(0)).first;
    --l_;
  }
  while (k_ > 0) {
    auto [q, r] = g_.divide_linear(z_);
    if (r != 0) break;
    g_ = std::move(q);
    --k_;
  }
}

long RationalFunction::top_power() const {
  if (g_.is_zero()) return std::numeric_limits<long>::min() / 4;
  return g_.degree() - l_ - k_;
}

Scalar RationalFunction::iota_zero_coefficient(long p) const {
  if (g_.is_zero()) return Scalar(0);
  if (p < -l_) return Scalar(0);
  Scalar acc(0);
  const long top = std::min(g_.degree(), p + l_);
  for (long j = 0; j <= top; ++j) {
    const Scalar& gj = g_.coefficient(j);
    if (gj == 0) continue;
    long i = p + l_ - j;
    Scalar e = (k_ == 0) ? Scalar(i == 0 ? 1 : 0) : binomial(-k_, i) * power(-z_, -k_ - i);
    acc += gj * e;
  }
  return acc;
}

Scalar RationalFunction::iota_infty_coefficient(long p) const {
  if (g_.is_zero()) return Scalar(0);
  if (p > top_power()) return Scalar(0);
  Scalar acc(0);
  for (long j = 0; j <= g_.degree(); ++j) {
    const Scalar& gj = g_.coefficient(j);
    if (gj == 0) continue;
    long i = j - l_ - k_ - p;
    if (i < 0) continue;
    Scalar d = (k_ == 0) ? Scalar(i == 0 ? 1 : 0) : binomial(-k_, i) * power(-z_, i);
    acc += gj * d;
  }
  return acc;
}

namespace {

Scalar common_z(const RationalFunction& a, const RationalFunction& b) {
  if (a.k() > 0 && b.k() > 0 && a.z() != b.z())
    throw std::invalid_argument("rational functions with different pole sets");
  return a.k() > 0 ? a.z() : b.z();
}

}  // namespace

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  Scalar z = common_z(*this, o);
  return RationalFunction(g_ * o.g_, l_ + o.l_, k_ + o.k_, z);
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  Scalar z = common_z(*this, o);
  long l = std::max(l_, o.l_), k = std::max(k_, o.k_);
  Polynomial a = g_ * Polynomial::monomial(l - l_) * Polynomial::linear_power(z, k - k_);
  Polynomial b = o.g_ * Polynomial::monomial(l - o.l_) * Polynomial::linear_power(z, k - o.k_);
  return RationalFunction(a + b, l, k, z);
}

RationalFunction RationalFunction::operator*(const Scalar& s) const { return RationalFunction(g_ * s, l_, k_, z_); }

bool RationalFunction::operator==(const RationalFunction& o) const {
  if (!(g_ == o.g_) || l_ != o.l_ || k_ != o.k_) return false;
  return k_ == 0 || z_ == o.z_;
}

RationalFunction shift_substitute(const RationalFunction& f, const Scalar& z0) {
  if (f.is_zero() || z0 == 0) return f;
  // New pole positions: -z0 (order l) and z - z0 (order k).
  long zero_order = 0;
  std::vector<std::pair<Scalar, long>> others;
  auto place = [&](const Scalar& where, long order) {
    if (order == 0) return;
    if (where == 0)
      zero_order += order;
    else
      others.emplace_back(where, order);
  };
  place(-z0, f.l());
  place(f.z() - z0, f.k());
  if (others.size() > 1)
    throw SubstitutionError("shifted function has poles at two nonzero points; outside the {0, z} pole set");
  Scalar new_z = others.empty() ? f.z() : others.front().first;
  long new_k = others.empty() ? 0 : others.front().second;
  return RationalFunction(f.numerator().shift(z0), zero_order, new_k, new_z);
}

// -------------------------------------------------------------- SeriesWindow

SeriesWindow::SeriesWindow(Direction d, long lo, long hi, std::vector<Scalar> coeffs, bool complete)
    : dir_(d), lo_(lo), hi_(hi), c_(std::move(coeffs)), complete_(complete) {
  if (hi < lo) throw WindowError("empty series window");
  if (c_.size() != static_cast<std::size_t>(hi - lo + 1)) throw WindowError("window size mismatch");
}

bool SeriesWindow::covers(long p) const {
  if (p >= lo_ && p <= hi_) return true;
  if (!complete_) return false;
  return dir_ == Direction::AtZero ? p < lo_ : p > hi_;
}

Scalar SeriesWindow::at(long p) const {
  if (p >= lo_ && p <= hi_) return c_[static_cast<std::size_t>(p - lo_)];
  if (covers(p)) return Scalar(0);
  throw WindowError("power " + std::to_string(p) + " outside series window [" + std::to_string(lo_) + "," +
                    std::to_string(hi_) + "]");
}

SeriesWindow SeriesWindow::slice(long lo, long hi) const {
  std::vector<Scalar> v;
  for (long p = lo; p <= hi; ++p) v.push_back(at(p));
  bool complete = complete_ && ((dir_ == Direction::AtZero && lo <= lo_) || (dir_ == Direction::AtInfinity && hi >= hi_));
  return SeriesWindow(dir_, lo, hi, std::move(v), complete);
}

SeriesWindow SeriesWindow::operator*(const SeriesWindow& o) const {
  if (dir_ != o.dir_) throw WindowError("product of windows with different directions");
  if (!complete_ || !o.complete_) throw WindowError("product needs windows that are complete on their truncated side");
  long lo, hi;
  if (dir_ == Direction::AtZero) {
    lo = lo_ + o.lo_;
    hi = std::min(lo_ + o.hi_, o.lo_ + hi_);
  } else {
    hi = hi_ + o.hi_;
    lo = std::max(hi_ + o.lo_, o.hi_ + lo_);
  }
  std::vector<Scalar> v;
  for (long p = lo; p <= hi; ++p) {
    Scalar acc(0);
    for (long i = lo_; i <= hi_; ++i) {
      long j = p - i;
      if (j < o.lo_ || j > o.hi_) continue;
      acc += at(i) * o.at(j);
    }
    v.push_back(acc);
  }
  return SeriesWindow(dir_, lo, hi, std::move(v), true);
}

SeriesWindow SeriesWindow::times(const LaurentPolynomial& poly) const {
  if (poly.is_zero()) return SeriesWindow(dir_, lo_, hi_, std::vector<Scalar>(c_.size()), complete_);
  long pmin = poly.min_power(), pmax = poly.max_power();
  long lo, hi;
  if (dir_ == Direction::AtZero) {
    lo = complete_ ? lo_ + pmin : lo_ + pmax;
    hi = hi_ + pmin;
  } else {
    lo = lo_ + pmax;
    hi = complete_ ? hi_ + pmax : hi_ + pmin;
  }
  if (hi < lo) throw WindowError("product window is empty");
  std::vector<Scalar> v;
  for (long p = lo; p <= hi; ++p) {
    Scalar acc(0);
    for (const auto& [q, c] : poly.terms()) acc += c * at(p - q);
    v.push_back(acc);
  }
  return SeriesWindow(dir_, lo, hi, std::move(v), complete_);
}

bool SeriesWindow::operator==(const SeriesWindow& o) const {
  return dir_ == o.dir_ && lo_ == o.lo_ && hi_ == o.hi_ && c_ == o.c_;
}

// ------------------------------------------------------------- expansions

SeriesWindow binom_expand(BinomKind kind, long n, const Scalar& z, long lo, long hi) {
  if (hi < lo) throw WindowError("empty window");
  std::vector<Scalar> v;
  switch (kind) {
    case BinomKind::XMinusZ: {
      if (z == 0) throw std::invalid_argument("z must be nonzero");
      if (lo > n || (n >= 0 && hi < 0)) throw WindowError("window outside the support of (x-z)^n");
      for (long p = lo; p <= hi; ++p) v.push_back(binomial(n, n - p) * power(-z, n - p));
      return SeriesWindow(Direction::AtInfinity, lo, hi, std::move(v), hi >= n);
    }
    case BinomKind::ZMinusX: {
      if (z == 0) throw std::invalid_argument("z must be nonzero");
      if (hi < 0 || (n >= 0 && lo > n)) throw WindowError("window outside the support of (z-x)^n");
      for (long p = lo; p <= hi; ++p)
        v.push_back(p < 0 ? Scalar(0) : binomial(n, p) * power(z, n - p) * sign_power(p));
      return SeriesWindow(Direction::AtZero, lo, hi, std::move(v), lo <= 0);
    }
    case BinomKind::X1MinusX2: {
      if (hi < 0 || (n >= 0 && lo > n)) throw WindowError("window outside the support of (x1-x2)^n");
      for (long p = lo; p <= hi; ++p) v.push_back(p < 0 ? Scalar(0) : binomial(n, p) * sign_power(p));
      return SeriesWindow(Direction::AtZero, lo, hi, std::move(v), lo <= 0);
    }
  }
  throw std::logic_error("unknown binomial kind");
}

SeriesWindow binom_expand(BinomKind kind, long n, const Scalar& z) {
  if (n < 0) throw WindowError("a full expansion exists only for n >= 0");
  return binom_expand(kind, n, z, 0, n);
}

SeriesWindow iota_zero(const RationalFunction& f, long lo, long hi) {
  if (hi < lo) throw WindowError("empty window");
  if (lo < -f.l()) throw WindowError("expansion at 0 requested below power -l");
  std::vector<Scalar> v;
  for (long p = lo; p <= hi; ++p) v.push_back(f.iota_zero_coefficient(p));
  return SeriesWindow(Direction::AtZero, lo, hi, std::move(v), lo == -f.l() || f.is_zero());
}

SeriesWindow iota_infty(const RationalFunction& f, long lo, long hi) {
  if (hi < lo) throw WindowError("empty window");
  if (!f.is_zero() && hi > f.top_power()) throw WindowError("expansion at infinity requested above its top power");
  std::vector<Scalar> v;
  for (long p = lo; p <= hi; ++p) v.push_back(f.iota_infty_coefficient(p));
  return SeriesWindow(Direction::AtInfinity, lo, hi, std::move(v), f.is_zero() || hi == f.top_power());
}

RationalFunction rational_from_upper_expansion(const SeriesWindow& s, long l, long k, const Scalar& z,
                                               long degree_bound) {
  if (s.direction() != Direction::AtInfinity) throw WindowError("reconstruction needs an expansion at infinity");
  if (l < 0 || k < 0) throw std::invalid_argument("pole orders must be nonnegative");
  if (degree_bound < 0) return RationalFunction(Polynomial(), 0, 0, z == 0 ? Scalar(-1) : z);
  // (x - z)^k = sum_a binom(k,a) (-z)^{k-a} x^a
  std::vector<Scalar> factor(static_cast<std::size_t>(k + 1));
  for (long a = 0; a <= k; ++a) factor[static_cast<std::size_t>(a)] = binomial(k, a) * power(-z, k - a);
  auto g_at = [&](long j) {
    Scalar acc(0);
    for (long a = 0; a <= k; ++a) acc += factor[static_cast<std::size_t>(a)] * s.at(j - l - a);
    return acc;
  };
  std::vector<Scalar> g(static_cast<std::size_t>(degree_bound + 1));
  for (long j = 0; j <= degree_bound; ++j) g[static_cast<std::size_t>(j)] = g_at(j);
  // Certificate check on every power that the window determines.
  for (long j = s.lo() + l + k; j < 0; ++j)
    if (g_at(j) != 0)
      throw ReconstructionError("x^l (x-z)^k s has a nonzero coefficient at negative power " + std::to_string(j), j);
  if (s.complete()) {
    for (long j = degree_bound + 1; j <= s.hi() + l + k; ++j)
      if (j - l - k >= s.lo() && g_at(j) != 0)
        throw ReconstructionError("x^l (x-z)^k s exceeds the declared degree at power " + std::to_string(j), j);
  }
  return RationalFunction(Polynomial(std::move(g)), l, k, z == 0 ? Scalar(-1) : z);
}

Scalar residue(const SeriesWindow& s) {
  if (!s.covers(-1)) throw WindowError("series window does not cover power -1");
  return s.at(-1);
}

Scalar residue(const LaurentPolynomial& p) { return p.residue(); }

}  // namespace voaforge::formal
