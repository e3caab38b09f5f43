#include "voaforge/regrep.hpp"

#include <algorithm>
#include <set>

#include "voaforge/notation.hpp"
#include "voaforge/parallel.hpp"

namespace voaforge::regrep {

namespace {

const Scalar kZ(-1);  // the second pole of every matrix coefficient

std::optional<Certificate> effective(std::optional<Certificate> cert, std::optional<long> support) {
  if (!support) return cert;
  // Finite support: Y° expansions are Laurent polynomials, so there is no
  // pole at -1 and the pole at 0 is bounded by the support.
  Certificate implicit{0, *support};
  if (!cert) return implicit;
  return Certificate{std::min(cert->left, implicit.left), std::min(cert->right, implicit.right)};
}

UVector state_to_uvector(const State& s) { return s.coeffs; }

Scalar coordinate(const UVector& v, std::size_t c) { return v.get(static_cast<Index>(c)); }

long weight_of(const Module& V, Index vid) { return V.level(vid); }

void require_voa_state(const Module& W, const State& v, const char* what) { W.voa().check_state(v, what); }

// ---------------------------------------------------------------- node kinds

class Table : public Functional {
 public:
  Table(const Module& W, std::size_t dim, std::map<Index, UVector> values, long support)
      : Functional(W, dim, std::nullopt, support), values_(std::move(values)) {}
  std::string describe() const override { return "table(" + std::to_string(values_.size()) + " values)"; }

 protected:
  UVector compute(Index wid) const override {
    auto it = values_.find(wid);
    return it == values_.end() ? UVector() : it->second;
  }

 private:
  std::map<Index, UVector> values_;
};

class Certified : public Functional {
 public:
  Certified(FunctionalPtr inner, Certificate c, bool hide_support)
      : Functional(inner->module(), inner->dim(), c, hide_support ? std::nullopt : inner->support()),
        inner_(std::move(inner)) {}
  std::string describe() const override {
    return "certified(" + std::to_string(certificate()->left) + "," + std::to_string(certificate()->right) + "; " +
           inner_->describe() + ")";
  }

 protected:
  UVector compute(Index wid) const override { return inner_->at(wid); }

 private:
  FunctionalPtr inner_;
};

class MatrixCoefficient : public Functional {
 public:
  MatrixCoefficient(const Module& M, long n, State u)
      : Functional(M.voa(), M.level_end(n), Certificate{n, n}, std::nullopt), M_(&M), u_(std::move(u)) {}
  std::string describe() const override { return "matrix-coefficient(" + format_state(u_) + ")"; }

 protected:
  UVector compute(Index vid) const override {
    const Module& V = module();
    return state_to_uvector(M_->mode(V.basis(vid), weight_of(V, vid) - 1, u_));
  }

 private:
  const Module* M_;
  State u_;
};

std::optional<Certificate> mode_certificate(Side side, const State& v, long m, const Functional& f) {
  auto c = f.certificate();
  if (!c) return std::nullopt;
  Certificate out = *c;
  long& changed = side == Side::Left ? out.left : out.right;
  const long base = changed;
  long worst = -1;
  for (long t : v.levels()) worst = std::max(worst, base + t - m - 1);
  changed = v.is_zero() ? -1 : worst;
  return out;
}

std::optional<long> mode_support(Side side, const State& v, long m, const Functional& f) {
  if (side == Side::Left || !f.support()) return std::nullopt;
  long worst = -1;
  for (long t : v.levels()) worst = std::max(worst, *f.support() + t - m - 1);
  return worst;
}

class ModeImage : public Functional {
 public:
  ModeImage(Side side, State v, long m, FunctionalPtr f)
      : Functional(f->module(), f->dim(), mode_certificate(side, v, m, *f), mode_support(side, v, m, *f)),
        side_(side),
        v_(std::move(v)),
        m_(m),
        f_(std::move(f)) {
    if (!f_->certificate()) throw UncertifiedInput("mode action needs a certified or finite-support functional");
  }
  std::string describe() const override {
    return std::string(side_ == Side::Left ? "L" : "R") + "[" + format_state(v_) + "](" + std::to_string(m_) + ") " +
           f_->describe();
  }

 protected:
  UVector compute(Index wid) const override {
    UVector out;
    for (const auto& [vid, c] : v_.coeffs) out.add_scaled(basis_mode(vid, wid), c);
    return out;
  }

 private:
  UVector basis_mode(Index vid, Index wid) const {
    const long q = -m_ - 1;
    if (f_->support()) {
      const Module& W = module();
      const long t = weight_of(W.voa(), vid), lw = W.level(wid);
      if (side_ == Side::Right) return f_->opposite_coefficient(vid, wid, q);
      // expansion at 0 of F(x - 1) for the Laurent polynomial F
      UVector out;
      if (q < 0) return out;
      for (long p = lw - t - *f_->support(); p <= lw - t; ++p) {
        Scalar c = binomial(p, q) * sign_power(p - q);
        if (c != 0) out.add_scaled(f_->opposite_coefficient(vid, wid, p), c);
      }
      return out;
    }
    const auto& rs =
        side_ == Side::Right ? f_->matrix_coefficients(vid, wid) : f_->shifted_matrix_coefficients(vid, wid);
    std::vector<SparseVector::Entry> e;
    for (std::size_t c = 0; c < rs.size(); ++c) {
      Scalar x = rs[c].iota_zero_coefficient(q);
      if (x != 0) e.emplace_back(static_cast<Index>(c), x);
    }
    return SparseVector::from_entries(std::move(e));
  }

  Side side_;
  State v_;
  long m_;
  FunctionalPtr f_;
};

std::optional<Certificate> max_certificate(const std::vector<std::pair<Scalar, FunctionalPtr>>& terms) {
  std::optional<Certificate> out;
  for (const auto& [c, f] : terms) {
    if (c == 0) continue;
    auto fc = f->certificate();
    if (!fc) return std::nullopt;
    if (!out)
      out = fc;
    else
      out = Certificate{std::max(out->left, fc->left), std::max(out->right, fc->right)};
  }
  if (!out) out = Certificate{-1, -1};
  return out;
}

std::optional<long> max_support(const std::vector<std::pair<Scalar, FunctionalPtr>>& terms) {
  long out = -1;
  for (const auto& [c, f] : terms) {
    if (c == 0) continue;
    if (!f->support()) return std::nullopt;
    out = std::max(out, *f->support());
  }
  return out;
}

class Combination : public Functional {
 public:
  Combination(const Module& W, std::size_t dim, std::vector<std::pair<Scalar, FunctionalPtr>> terms)
      : Functional(W, dim, max_certificate(terms), max_support(terms)), terms_(std::move(terms)) {}
  std::string describe() const override {
    std::string out = "sum(";
    for (std::size_t i = 0; i < terms_.size(); ++i)
      out += (i ? ", " : "") + to_string(terms_[i].first) + " * " + terms_[i].second->describe();
    return out + ")";
  }

 protected:
  UVector compute(Index wid) const override {
    UVector out;
    for (const auto& [c, f] : terms_)
      if (c != 0) out.add_scaled(f->at(wid), c);
    return out;
  }

 private:
  std::vector<std::pair<Scalar, FunctionalPtr>> terms_;
};

class DualAction : public Functional {
 public:
  DualAction(State a1, State a2, FunctionalPtr f, long n)
      : Functional(f->module(), f->dim(), Certificate{n, n}, std::nullopt),
        a1_(std::move(a1)),
        theta_a2_(theta(a2)),
        f_(std::move(f)),
        n_(n) {}
  std::string describe() const override {
    return "dual-action(" + format_state(a1_) + ", theta^-1 " + format_state(theta_a2_) + ") " + f_->describe();
  }

 protected:
  UVector compute(Index wid) const override {
    const Module& W = module();
    State x = anv::star_right(W, W.basis(wid), a1_, n_);
    return (*f_)(anv::star(W, theta_a2_, x, n_));
  }

 private:
  State a1_, theta_a2_;
  FunctionalPtr f_;
  long n_;
};

// Terms of a deformed mode: calls emit(coefficient, u, k) for the undeformed
// modes u_k it expands into. bound(weight of u) is the first k from which u_k
// acts as zero.
template <class Bound, class Emit>
void deform_terms(const Scalar& z0, const State& v, long m, Route route, Bound bound, Emit emit) {
  if (v.is_zero()) return;
  const Module& V = *v.module;
  for (long t : v.levels()) {
    State u = v.level_component(t);
    Scalar zi(1);  // (-z0)^i / i!
    for (long i = 0; i <= t && !u.is_zero(); ++i) {
      const long top = bound(t - i);
      if (route == Route::Relation) {
        for (long j = 0; m + j < top; ++j) {
          Scalar c = zi * binomial(2 * t - m - 2 - i, j) * power(-z0, j);
          if (c != 0) emit(c, u, m + j);
        }
      } else {
        for (long k = m; k < top; ++k) {
          Scalar c = zi * binomial(k + 1 + i - 2 * t, k - m) * power(z0, k - m);
          if (c != 0) emit(c, u, k);
        }
      }
      u = V.L(1, u);
      zi *= -z0 / Scalar(i + 1);
    }
  }
}

long vanishing_bound(Side side, const Functional& f, long weight) {
  auto c = f.certificate();
  if (!c) throw UncertifiedInput("deformed modes need a certified functional");
  return weight + (side == Side::Left ? c->left : c->right);
}

}  // namespace

// ------------------------------------------------------------ Functional

Functional::Functional(const Module& W, std::size_t dim, std::optional<Certificate> cert, std::optional<long> support)
    : W_(&W), dim_(dim), cert_(effective(cert, support)), support_(support) {}

UVector Functional::at(Index wid) const {
  if (support_ && W_->level(wid) > *support_) return UVector();
  {
    std::lock_guard lock(mutex_);
    auto it = values_.find(wid);
    if (it != values_.end()) return it->second;
  }
  UVector v = compute(wid);
  std::lock_guard lock(mutex_);
  return values_.emplace(wid, std::move(v)).first->second;
}

UVector Functional::operator()(const State& w) const {
  W_->check_state(w, "functional evaluation");
  UVector out;
  for (const auto& [id, c] : w.coeffs) {
    if (support_ && W_->level(id) > *support_) continue;
    out.add_scaled(at(id), c);
  }
  return out;
}

UVector Functional::opposite_coefficient(Index vid, Index wid, long p) const {
  const Module& V = W_->voa();
  const long level = W_->level(wid) - weight_of(V, vid) - p;
  if (level < 0) return UVector();
  if (support_ && level > *support_) return UVector();
  return (*this)(y_o_coefficient(*W_, V.basis(vid), W_->basis(wid), p));
}

const Functional::Poles& Functional::poles(Index vid, Index wid) const {
  const auto key = std::make_pair(vid, wid);
  {
    std::lock_guard lock(mutex_);
    auto it = poles_.find(key);
    if (it != poles_.end()) return *it->second;
  }
  const long t = weight_of(W_->voa(), vid), lw = W_->level(wid);
  const long hi = lw - t;
  auto out = std::make_shared<Poles>();
  out->plain.resize(dim_);
  if (support_) {
    const long lo = hi - *support_;
    std::vector<UVector> F;
    for (long p = lo; p <= hi; ++p) F.push_back(opposite_coefficient(vid, wid, p));
    for (std::size_t c = 0; c < dim_; ++c) {
      std::vector<Scalar> g;
      for (const auto& x : F) g.push_back(coordinate(x, c));
      // F = x^lo * g(x)
      if (lo >= 0) {
        std::vector<Scalar> shifted(static_cast<std::size_t>(lo), Scalar(0));
        shifted.insert(shifted.end(), g.begin(), g.end());
        out->plain[c] = formal::RationalFunction(formal::Polynomial(std::move(shifted)), 0, 0, kZ);
      } else {
        out->plain[c] = formal::RationalFunction(formal::Polynomial(std::move(g)), -lo, 0, kZ);
      }
    }
  } else {
    if (!cert_) throw UncertifiedInput("matrix coefficients need a certificate: " + describe());
    const long l = std::max(0L, t + cert_->right), k = std::max(0L, t + cert_->left);
    const long lo = -l - k - kCheckCoefficients;
    if (hi >= lo) {
      std::vector<UVector> F;
      for (long p = lo; p <= hi; ++p) F.push_back(opposite_coefficient(vid, wid, p));
      for (std::size_t c = 0; c < dim_; ++c) {
        std::vector<Scalar> s;
        for (const auto& x : F) s.push_back(coordinate(x, c));
        formal::SeriesWindow window(formal::Direction::AtInfinity, lo, hi, std::move(s), true);
        try {
          out->plain[c] = formal::rational_from_upper_expansion(window, l, k, kZ, hi + l + k);
        } catch (const formal::ReconstructionError& e) {
          throw CertificateViolation("certificate contradicted for v = " + format_basis(W_->voa(), vid) +
                                     ", w = " + format_basis(*W_, wid) + ": " + e.what() + " [" + describe() + "]");
        }
      }
    } else {
      for (auto& r : out->plain) r = formal::RationalFunction(formal::Polynomial(), 0, 0, kZ);
    }
  }
  out->shifted.reserve(dim_);
  for (const auto& r : out->plain) out->shifted.push_back(formal::shift_substitute(r, kZ));
  std::lock_guard lock(mutex_);
  return *poles_.emplace(key, std::move(out)).first->second;
}

const std::vector<formal::RationalFunction>& Functional::matrix_coefficients(Index vid, Index wid) const {
  return poles(vid, wid).plain;
}

const std::vector<formal::RationalFunction>& Functional::shifted_matrix_coefficients(Index vid, Index wid) const {
  return poles(vid, wid).shifted;
}

// ------------------------------------------------------------ constructions

FunctionalPtr table_functional(const Module& W, std::size_t dim, std::map<Index, UVector> values) {
  long support = -1;
  for (auto it = values.begin(); it != values.end();) {
    if (it->first < 0 || static_cast<std::size_t>(it->first) >= W.size())
      throw std::out_of_range("table functional: basis id out of range");
    if (!it->second.empty() && it->second.max_index() >= static_cast<Index>(dim))
      throw std::out_of_range("table functional: value outside U");
    if (it->second.empty()) {
      it = values.erase(it);
      continue;
    }
    support = std::max(support, W.level(it->first));
    ++it;
  }
  return std::make_shared<Table>(W, dim, std::move(values), support);
}

FunctionalPtr dual_functional(const Module& W, Index id, std::size_t dim, std::size_t coord) {
  return table_functional(W, dim, {{id, UVector::unit(static_cast<Index>(coord))}});
}

FunctionalPtr random_table(const Module& W, long N, std::size_t dim, std::mt19937_64& rng, long height) {
  std::map<Index, UVector> values;
  for (Index id = 0; id < W.level_end(N); ++id) {
    std::vector<SparseVector::Entry> e;
    for (std::size_t c = 0; c < dim; ++c) e.emplace_back(static_cast<Index>(c), random_rational(rng, height));
    values[id] = SparseVector::from_entries(std::move(e));
  }
  return table_functional(W, dim, std::move(values));
}

FunctionalPtr assume_certificate(FunctionalPtr f, Certificate c, bool hide_support) {
  return std::make_shared<Certified>(std::move(f), c, hide_support);
}

FunctionalPtr matrix_coefficient(const Module& M, long n, const State& u) {
  M.check_state(u, "matrix coefficient");
  if (n < 0) throw std::invalid_argument("matrix coefficient needs n >= 0");
  if (u.max_level() > n) throw std::invalid_argument("matrix coefficient: u must lie in the lowest n+1 levels");
  return std::make_shared<MatrixCoefficient>(M, n, u);
}

FunctionalPtr mode_image(Side side, const State& v, long m, FunctionalPtr f) {
  require_voa_state(f->module(), v, "mode image");
  return std::make_shared<ModeImage>(side, v, m, std::move(f));
}

FunctionalPtr o_image(Side side, const State& v, FunctionalPtr f) {
  std::vector<std::pair<Scalar, FunctionalPtr>> terms;
  const Module& W = f->module();
  for (long t : v.levels()) terms.emplace_back(Scalar(1), mode_image(side, v.level_component(t), t - 1, f));
  if (terms.size() == 1) return terms.front().second;
  return std::make_shared<Combination>(W, f->dim(), std::move(terms));
}

FunctionalPtr combination(std::vector<std::pair<Scalar, FunctionalPtr>> terms) {
  if (terms.empty()) throw std::invalid_argument("empty combination");
  const Module& W = terms.front().second->module();
  const std::size_t dim = terms.front().second->dim();
  for (const auto& [c, f] : terms)
    if (&f->module() != &W || f->dim() != dim) throw RealizationMismatch("combination of incompatible functionals");
  return std::make_shared<Combination>(W, dim, std::move(terms));
}

FunctionalPtr dual_action(const State& a1, const State& a2, FunctionalPtr f, long n) {
  auto c = f->certificate();
  if (!c || std::max(c->left, c->right) > n)
    throw UncertifiedInput("dual action needs a functional certified at level " + std::to_string(n));
  require_voa_state(f->module(), a1, "dual action");
  require_voa_state(f->module(), a2, "dual action");
  return std::make_shared<DualAction>(a1, a2, std::move(f), n);
}

FunctionalPtr exp_l1(Side side, const Scalar& s, FunctionalPtr f) {
  auto c = f->certificate();
  if (!c) throw UncertifiedInput("exponential of L(1) needs a certified functional");
  const long horizon = side == Side::Left ? c->left : c->right;
  if (horizon <= 0 || s == 0) return f;
  const Module& V = f->module().voa();
  std::vector<std::pair<Scalar, FunctionalPtr>> terms{{Scalar(1), f}};
  FunctionalPtr current = f;
  Scalar coeff(1);
  for (long i = 1; i <= horizon; ++i) {
    current = mode_image(side, V.omega(), 2, current);
    coeff *= s / Scalar(i);
    terms.emplace_back(coeff, current);
  }
  return combination(std::move(terms));
}

FunctionalPtr sigma(FunctionalPtr f, int sign) {
  return exp_l1(Side::Left, Scalar(sign), exp_l1(Side::Right, Scalar(-sign), std::move(f)));
}

FunctionalPtr deformed_mode(Side side, const Scalar& z0, const State& v, long m, FunctionalPtr f, Route route) {
  require_voa_state(f->module(), v, "deformed mode");
  std::vector<std::pair<Scalar, FunctionalPtr>> terms;
  deform_terms(
      z0, v, m, route, [&](long weight) { return vanishing_bound(side, *f, weight); },
      [&](const Scalar& c, const State& u, long k) { terms.emplace_back(c, mode_image(side, u, k, f)); });
  if (terms.empty()) return combination({{Scalar(0), f}});
  return combination(std::move(terms));
}

FunctionalPtr o_deformed(Side side, const State& v, FunctionalPtr f) {
  const Scalar z0 = side == Side::Left ? Scalar(1) : Scalar(-1);
  std::vector<std::pair<Scalar, FunctionalPtr>> terms;
  for (long t : v.levels())
    terms.emplace_back(Scalar(1), deformed_mode(side, z0, v.level_component(t), t - 1, f, Route::Relation));
  if (terms.empty()) return combination({{Scalar(0), f}});
  return combination(std::move(terms));
}

State deformed_mode(const Module& W, const Scalar& z0, const State& v, long m, const State& w, Route route) {
  require_voa_state(W, v, "deformed mode");
  W.check_state(w, "deformed mode");
  State out = W.zero();
  if (w.is_zero()) return out;
  const long lw = w.max_level();
  deform_terms(
      z0, v, m, route, [&](long weight) { return weight + lw; },
      [&](const Scalar& c, const State& u, long k) { out += c * W.mode(u, k, w); });
  return out;
}

State deformed_round_trip(const Module& W, const Scalar& z0, const State& v, long m, const State& w) {
  State out = W.zero();
  if (w.is_zero()) return out;
  const long lw = w.max_level();
  deform_terms(
      -z0, v, m, Route::Relation, [&](long weight) { return weight + lw; },
      [&](const Scalar& c, const State& u, long k) { out += c * deformed_mode(W, z0, u, k, w, Route::Relation); });
  return out;
}

FunctionalPtr deformed_round_trip(Side side, const Scalar& z0, const State& v, long m, FunctionalPtr f) {
  std::vector<std::pair<Scalar, FunctionalPtr>> terms;
  deform_terms(
      -z0, v, m, Route::Relation, [&](long weight) { return vanishing_bound(side, *f, weight); },
      [&](const Scalar& c, const State& u, long k) {
        terms.emplace_back(c, deformed_mode(side, z0, u, k, f, Route::Relation));
      });
  if (terms.empty()) return combination({{Scalar(0), f}});
  return combination(std::move(terms));
}

formal::RationalFunction matrix_coeff_rational(const Functional& f, const State& v, const State& w,
                                               std::size_t coord) {
  const Module& W = f.module();
  require_voa_state(W, v, "matrix coefficient");
  W.check_state(w, "matrix coefficient");
  if (coord >= f.dim()) throw std::out_of_range("coordinate outside U");
  formal::RationalFunction out(formal::Polynomial(), 0, 0, kZ);
  for (const auto& [vid, a] : v.coeffs)
    for (const auto& [wid, b] : w.coeffs) out = out + f.matrix_coefficients(vid, wid)[coord] * Scalar(a * b);
  return out;
}

UVector yl_mode_direct(const Functional& f, Index vid, long m, Index wid) {
  const Module& W = f.module();
  auto c = f.certificate();
  if (!c) throw UncertifiedInput("left modes need a certified functional");
  const long t = weight_of(W.voa(), vid), lw = W.level(wid);
  const long hi = lw - t;
  long l = std::max(0L, t + c->right);
  long k = std::max(0L, t + c->left);
  if (f.support()) l = std::max(l, *f.support() - hi);
  const long q = -m - 1;
  // S(x) = (x+z)^l f Y°(v, x+z) w, each (x+z)^{p+l} expanded in nonnegative powers of z.
  auto S = [&](long r) {
    UVector acc;
    for (long p = r - l; p <= hi; ++p) {
      Scalar coeff = binomial(p + l, p + l - r) * power(kZ, p + l - r);
      if (coeff != 0) acc.add_scaled(f.opposite_coefficient(vid, wid, p), coeff);
    }
    return acc;
  };
  // (z+x)^{-l} in nonnegative powers of x, times S; S vanishes below x^{-k}.
  UVector out;
  for (long j = 0; j <= q + k; ++j) {
    Scalar coeff = binomial(-l, j) * power(kZ, -l - j);
    if (coeff != 0) out.add_scaled(S(q - j), coeff);
  }
  return out;
}

// ------------------------------------------------------------ checks

WindowVerdict pole_window_test(const Functional& f, long n, Index vid, Index wid, long depth) {
  const Module& W = f.module();
  const long t = weight_of(W.voa(), vid);
  const long a = t + n;
  WindowVerdict verdict;
  if (a < 0) throw std::invalid_argument("pole test needs wt v + n >= 0");
  for (long q = -depth; q <= -1; ++q) {
    UVector acc;
    for (long j = 0; j <= a; ++j) acc.add_scaled(f.opposite_coefficient(vid, wid, q - a - j), binomial(a, j));
    if (!acc.empty()) {
      verdict.ok = false;
      verdict.power = q;
      verdict.detail = "x^" + std::to_string(q) + " survives for v = " + format_basis(W.voa(), vid) +
                       ", w = " + format_basis(W, wid);
      return verdict;
    }
  }
  return verdict;
}

WindowVerdict jacobi_window_check(const Functional& f, Index vid, Index wid, long lo, long hi) {
  const Module& W = f.module();
  const long top = W.level(wid) - weight_of(W.voa(), vid);
  const auto& plain = f.matrix_coefficients(vid, wid);
  const auto& shifted = f.shifted_matrix_coefficients(vid, wid);
  long l = 0, k = 0;
  for (const auto& r : plain) l = std::max(l, r.l());
  for (const auto& r : shifted) k = std::max(k, r.l());
  auto series = [&](const std::vector<formal::RationalFunction>& rs, long p) {
    std::vector<SparseVector::Entry> e;
    for (std::size_t c = 0; c < rs.size(); ++c) e.emplace_back(static_cast<Index>(c), rs[c].iota_zero_coefficient(p));
    return SparseVector::from_entries(std::move(e));
  };
  WindowVerdict verdict;
  for (long p = lo; p <= hi; ++p)
    for (long q = lo; q <= hi; ++q) {
      UVector A, B, C;
      for (long i = 0; q - p + i <= top; ++i) {
        if (p >= 0 && i > p) break;
        A.add_scaled(f.opposite_coefficient(vid, wid, q - p + i), binomial(p, i) * power(-kZ, i));
      }
      for (long i = 0; q - i >= -l; ++i) {
        if (p >= 0 && i > p) break;
        B.add_scaled(series(plain, q - i), binomial(p, i) * power(-kZ, p - i));
      }
      for (long j = 0; -p - 1 - j >= -k; ++j)
        C.add_scaled(series(shifted, -p - 1 - j), power(kZ, -q - j - 1) * binomial(q + j, j) * sign_power(j));
      if (A - B != C) {
        verdict.ok = false;
        verdict.power = p;
        verdict.detail = "mismatch at x0^" + std::to_string(p) + " x^" + std::to_string(q);
        return verdict;
      }
    }
  return verdict;
}

FunctionalPtr certify_hom_anw(FunctionalPtr alpha, long n, const CertifyOptions& options) {
  const Module& W = alpha->module();
  long D = options.cutoff;
  if (D < 0) {
    if (!alpha->support()) throw std::invalid_argument("certification of an infinite-support functional needs a cutoff");
    D = *alpha->support() + 2 * n + 3;
  }
  D = std::min<long>(D, W.max_level());
  anv::AnContext ctx(W, n, D, anv::Variant::OprimeW, D, options.parallel);
  const auto& elements = ctx.elements();
  const auto& values = ctx.element_values();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!(*alpha)(values[i]).empty()) {
      std::string witness = elements[i].describe(W);
      throw CertificationFailure("functional does not vanish on " + witness, witness, values[i]);
    }
  }
  const Module& V = W.voa();
  const long vmax = std::min<long>(options.window_vmax, V.max_level());
  for (Index vid = 0; vid < V.level_end(vmax); ++vid) {
    const long t = V.level(vid);
    for (Index wid = 0; wid < static_cast<Index>(W.size()); ++wid) {
      const long lw = W.level(wid);
      // coefficients reach level lw + t + 2n + depth; keep inside the module
      const long depth = std::min<long>(4, W.max_level() - lw - t - 2 * n);
      if (depth < 1) break;
      if (alpha->support() && lw + n + 1 > *alpha->support()) break;
      WindowVerdict v = pole_window_test(*alpha, n, vid, wid, depth);
      if (!v.ok) throw CertificationFailure("pole test failed: " + v.detail, v.detail, W.zero());
    }
  }
  return assume_certificate(std::move(alpha), Certificate{n, n});
}

// ------------------------------------------------------------ Omega_n

std::vector<std::size_t> OmegaBasis::dims() const {
  std::vector<std::size_t> out;
  for (const auto& l : levels) out.push_back(l.size());
  return out;
}

std::size_t OmegaBasis::dimension() const {
  std::size_t d = 0;
  for (const auto& l : levels) d += l.size();
  return d;
}

namespace {

std::vector<SparseVector> to_rows(const std::vector<State>& states) {
  std::vector<SparseVector> rows;
  for (const auto& s : states) rows.push_back(s.coeffs);
  return rows;
}

Index ambient_of(const std::vector<State>& a) {
  Index n = 0;
  for (const auto& s : a)
    if (!s.is_zero()) n = std::max(n, s.coeffs.max_index() + 1);
  return n;
}

}  // namespace

bool OmegaBasis::contains(const State& w) const {
  if (w.is_zero()) return true;
  for (long l : w.levels()) {
    if (l > K) throw CutoffError("state above the computed window", l);
    std::vector<State> rows = levels[static_cast<std::size_t>(l)];
    const Index ambient = std::max(ambient_of(rows), w.coeffs.max_index() + 1);
    auto span = linalg::rref(to_rows(rows), ambient);
    if (!span.in_span(w.level_component(l).coeffs).member) return false;
  }
  return true;
}

OmegaBasis omega_n_basis(const Module& W, long n, long K, long vmax) {
  const Module& V = W.voa();
  OmegaBasis out;
  out.n = n;
  out.K = K;
  out.vmax = vmax;
  out.module = &W;
  vmax = std::min<long>(vmax, V.max_level());
  for (long L = 0; L <= K; ++L) {
    const Index begin = W.level_begin(L), end = W.level_end(L);
    const Index cols = end - begin;
    // rows of the stacked map: one per (v, m, target basis state)
    std::map<std::tuple<Index, long, Index>, std::vector<SparseVector::Entry>> rows;
    for (Index vid = 0; vid < V.level_end(vmax); ++vid) {
      const long t = V.level(vid);
      for (long m = n; L - m - 1 >= 0; ++m) {
        if (L - m - 1 > W.max_level()) continue;
        for (Index c = 0; c < cols; ++c) {
          State img = W.mode(V.basis(vid), t + m, W.basis(begin + c));
          for (const auto& [id, x] : img.coeffs) rows[{vid, m, id}].emplace_back(c, x);
        }
      }
    }
    std::vector<SparseVector> mat;
    for (auto& [key, e] : rows) mat.push_back(SparseVector::from_entries(std::move(e)));
    std::vector<State> basis;
    for (const auto& k : linalg::kernel_basis(mat, cols)) {
      std::vector<SparseVector::Entry> e;
      for (const auto& [c, x] : k) e.emplace_back(begin + c, x);
      basis.emplace_back(&W, SparseVector::from_entries(std::move(e)));
    }
    out.levels.push_back(std::move(basis));
  }
  return out;
}

std::vector<State> omega_n_deformed(const Module& W, long n, long K, long vmax, const Scalar& z0) {
  const Module& V = W.voa();
  vmax = std::min<long>(vmax, V.max_level());
  const Index cols = W.level_end(K);
  std::map<std::tuple<Index, long, Index>, std::vector<SparseVector::Entry>> rows;
  for (Index vid = 0; vid < V.level_end(vmax); ++vid) {
    const long t = V.level(vid);
    for (long m = n; m <= K - 1 || m == n; ++m)
      for (Index c = 0; c < cols; ++c) {
        State img = deformed_mode(W, z0, V.basis(vid), t + m, W.basis(c), Route::Relation);
        for (const auto& [id, x] : img.coeffs) rows[{vid, m, id}].emplace_back(c, x);
      }
  }
  std::vector<SparseVector> mat;
  for (auto& [key, e] : rows) mat.push_back(SparseVector::from_entries(std::move(e)));
  std::vector<State> out;
  for (auto& k : linalg::kernel_basis(mat, cols)) out.emplace_back(&W, std::move(k));
  return out;
}

bool same_span(const std::vector<State>& a, const std::vector<State>& b) {
  const Index ambient = std::max(ambient_of(a), ambient_of(b));
  auto ra = to_rows(a), rb = to_rows(b);
  const std::size_t rank_a = linalg::rref(ra, ambient).rank();
  const std::size_t rank_b = linalg::rref(rb, ambient).rank();
  ra.insert(ra.end(), rb.begin(), rb.end());
  return rank_a == rank_b && linalg::rref(ra, ambient).rank() == rank_a;
}

NilpotencyVerdict nilpotency_check(const OmegaBasis& omega, const State& v, long m, long power) {
  const Module& W = *omega.module;
  NilpotencyVerdict verdict;
  for (const auto& level : omega.levels)
    for (const State& w : level) {
      State x = w;
      for (long i = 0; i < power && !x.is_zero(); ++i) x = W.mode(v, m, x);
      if (!x.is_zero()) {
        verdict.ok = false;
        verdict.witness = w;
        return verdict;
      }
    }
  return verdict;
}

State o_action(const Module& W, const State& v, const State& w) {
  State out = W.zero();
  for (long t : v.levels()) out += W.mode(v.level_component(t), t - 1, w);
  return out;
}

GeneratedSubmodule generated_submodule(const Module& W, const std::vector<State>& seeds, long K, long vmax) {
  const Module& V = W.voa();
  vmax = std::min<long>(vmax, V.max_level());
  auto pass = [&](const std::vector<State>& from) {
    std::vector<linalg::SpanHandle> spans;
    for (long L = 0; L <= K; ++L) spans.emplace_back(W.level_end(K));
    for (const State& s : from) {
      if (s.is_zero()) continue;
      if (!s.is_homogeneous()) throw std::invalid_argument("seeds must be homogeneous");
      const long ls = s.max_level();
      for (Index vid = 0; vid < V.level_end(vmax); ++vid) {
        const long t = V.level(vid);
        for (long L = 0; L <= K; ++L) {
          State x = W.mode(V.basis(vid), ls + t - 1 - L, s);
          if (!x.is_zero()) spans[static_cast<std::size_t>(L)].insert(x.coeffs);
        }
      }
    }
    std::vector<std::vector<State>> basis;
    for (auto& sp : spans) {
      sp.finalize();
      std::vector<State> level;
      for (auto& r : sp.rows()) level.emplace_back(&W, r);
      basis.push_back(std::move(level));
    }
    return basis;
  };
  GeneratedSubmodule out;
  out.basis = pass(seeds);
  std::vector<State> all;
  for (const auto& level : out.basis) {
    out.dims.push_back(level.size());
    all.insert(all.end(), level.begin(), level.end());
  }
  auto again = pass(all);
  for (std::size_t L = 0; L < again.size(); ++L) {
    std::vector<State> merged = out.basis[L];
    merged.insert(merged.end(), again[L].begin(), again[L].end());
    out.second_pass.push_back(merged.empty() ? 0 : linalg::rref(to_rows(merged), W.level_end(K)).rank());
  }
  return out;
}

// ------------------------------------------------------------ induction

std::size_t AnModule::dim() const {
  return realization ? static_cast<std::size_t>(realization->level_end(n)) : 0;
}

std::vector<UVector> AnModule::action(const State& v) const {
  std::vector<UVector> cols;
  for (Index j = 0; j < static_cast<Index>(dim()); ++j) cols.push_back(o_action(*realization, v, realization->basis(j)).coeffs);
  return cols;
}

void check_an_module(const AnModule& U, const anv::AnTable& table) {
  if (U.dim() == 0) return;
  if (&U.realization->voa() != table.V) throw RealizationMismatch("module and table belong to different algebras");
  if (U.n != table.n) throw std::invalid_argument("module and table use different n");
  const std::size_t k = table.basis.size();
  std::vector<std::vector<UVector>> rho;
  for (Index id : table.basis) rho.push_back(U.action(table.V->basis(id)));
  auto apply = [&](const std::vector<UVector>& m, const UVector& x) {
    UVector out;
    for (const auto& [j, c] : x) out.add_scaled(m[static_cast<std::size_t>(j)], c);
    return out;
  };
  std::set<std::pair<std::size_t, std::size_t>> skipped;
  for (const auto& [i, j, level] : table.overflow) skipped.emplace(i, j);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (skipped.count({i, j})) continue;
      for (std::size_t e = 0; e < U.dim(); ++e) {
        UVector basis_e = UVector::unit(static_cast<Index>(e));
        UVector lhs = apply(rho[i], apply(rho[j], basis_e));
        UVector rhs;
        for (const auto& [b, c] : table.products[i][j]) rhs.add_scaled(apply(rho[static_cast<std::size_t>(b)], basis_e), c);
        if (lhs != rhs)
          throw std::domain_error("module action is not multiplicative on " +
                                  format_basis(*table.V, table.basis[i]) + " * " +
                                  format_basis(*table.V, table.basis[j]));
      }
    }
}

bool InducedModuleResult::below_lowest_vanishes() const {
  return std::all_of(below_lowest.begin(), below_lowest.end(), [](std::size_t d) { return d == 0; });
}

InducedModuleResult induce(const Module& V, const AnModule& U, long K, const InduceOptions& options) {
  InducedModuleResult out;
  out.n = U.n;
  out.K = K;
  if (U.dim() == 0) {
    out.dims.assign(static_cast<std::size_t>(K + 1), 0);
    out.below_lowest.assign(2, 0);
    out.oracle.assign(static_cast<std::size_t>(K + 1), 0);
    return out;
  }
  const Module& M = *U.realization;
  if (&M.voa() != &V) throw RealizationMismatch("the module does not belong to this VOA");
  const long n = U.n;
  out.lowest_weight = M.base_weight();
  for (long L = 0; L <= K; ++L) out.oracle.push_back(M.dim(L));
  const long T = options.test_level >= 0 ? options.test_level : K + 2;
  const Index tests = V.level_end(T);

  std::vector<std::pair<long, FunctionalPtr>> seeds;  // (level of u, sigma(f_u))
  for (Index j = 0; j < static_cast<Index>(U.dim()); ++j)
    seeds.emplace_back(M.level(j), sigma(matrix_coefficient(M, n, M.basis(j)), options.sigma_sign));

  auto measure = [&](long k, long max_weight) -> std::size_t {
    std::vector<FunctionalPtr> candidates;
    for (const auto& [lu, f] : seeds)
      for (Index vid = 0; vid < V.level_end(std::min<long>(max_weight, V.max_level())); ++vid) {
        const long t = V.level(vid);
        candidates.push_back(mode_image(Side::Left, V.basis(vid), t - 1 - k + lu, f));
      }
    const std::size_t d = U.dim();
    std::vector<SparseVector> rows(candidates.size());
    parallel_for(candidates.size(), options.parallel, [&](std::size_t i) {
      std::vector<SparseVector::Entry> e;
      for (Index w = 0; w < tests; ++w)
        for (const auto& [c, x] : candidates[i]->at(w)) e.emplace_back(w * static_cast<Index>(d) + c, x);
      rows[i] = SparseVector::from_entries(std::move(e));
    });
    return linalg::rref(rows, tests * static_cast<Index>(d)).rank();
  };
  for (long k = 0; k <= K; ++k) out.dims.push_back(measure(k, k + options.weight_slack));
  for (long k = -n - 2; k <= -n - 1; ++k) out.below_lowest.push_back(measure(k, 2 + options.weight_slack));
  return out;
}

}  // namespace voaforge::regrep
