#include "voaforge/anv.hpp"

#include <algorithm>

#include "voaforge/notation.hpp"
#include "voaforge/parallel.hpp"

namespace voaforge::anv {

State residue_product(const Module& W, const State& v, const State& w, long a, long b_offset) {
  const Module& V = W.voa();
  V.check_state(v, "residue product");
  W.check_state(w, "residue product");
  State out = W.zero();
  if (v.is_zero() || w.is_zero()) return out;
  const long lw = w.max_level();
  for (long wt : v.levels()) {
    State vc = v.level_component(wt);
    const long b = b_offset + wt;
    // v_{i-a} w vanishes once wt + lw - (i - a) - 1 < 0
    long imax = wt + lw - 1 + a;
    if (b >= 0) imax = std::min(imax, b);
    for (long i = 0; i <= imax; ++i) {
      Scalar c = binomial(b, i);
      if (c == 0) continue;
      out += c * W.mode(vc, i - a, w);
    }
  }
  return out;
}

State circ(const Module& W, const State& v, const State& w, long n) { return residue_product(W, v, w, 2 * n + 2, n); }

State generalized(const Module& W, const State& v, const State& w, long n, long r, long s) {
  if (s < 0 || r < s) throw std::invalid_argument("generalized product needs r >= s >= 0");
  return residue_product(W, v, w, 2 * n + 2 + r, n + s);
}

State star(const Module& W, const State& v, const State& w, long n) {
  State out = W.zero();
  for (long m = 0; m <= n; ++m) out += binomial(-n - 1, m) * residue_product(W, v, w, n + m + 1, n);
  return out;
}

State star_right(const Module& W, const State& w, const State& v, long n) {
  State out = W.zero();
  for (long m = 0; m <= n; ++m)
    out += binomial(-n - 1, m) * sign_power(n - m) * residue_product(W, v, w, n + m + 1, m - 1);
  return out;
}

State commutator_term(const Module& W, const State& v, const State& w) { return residue_product(W, v, w, 0, -1); }

State translation(const Module& W, const State& w) { return W.L(-1, w) + W.L(0, w); }

std::string to_string(Variant v) {
  switch (v) {
    case Variant::OnV:
      return "O_n(V)";
    case Variant::OprimeW:
      return "O'_n(W)";
    case Variant::OnW:
      return "O_n(W)";
  }
  return "";
}

std::string SpanningElement::describe(const Module& W) const {
  auto st = [](const Module& m, Index id) { return format_basis(m, id); };
  switch (kind) {
    case Kind::Circ:
      return "circ(" + st(W.voa(), u) + ", " + st(W, w) + ")";
    case Kind::Generalized:
      return "generalized(" + st(W.voa(), u) + ", " + st(W, w) + ", r=" + std::to_string(r) +
             ", s=" + std::to_string(s) + ")";
    case Kind::Translation:
      return "translation(" + st(W, w) + ")";
  }
  return "";
}

// ---------------------------------------------------------------- context

AnContext::AnContext(const Module& W, long n, long cutoff, Variant variant, long slack, bool parallel)
    : W_(&W), n_(n), D_(cutoff), variant_(variant), slack_(slack), N_(W.level_end(cutoff)), span_(N_) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  if (variant == Variant::OnV && !W.is_voa()) throw RealizationMismatch("O_n(V) lives on the VOA itself");
  const Module& V = W.voa();
  using Kind = SpanningElement::Kind;
  const long base = 2 * n + 1;
  for (long lw = 0; lw + base + 1 <= cutoff; ++lw) {
    for (long lu = 1; lu + lw + base <= cutoff; ++lu) {
      for (Index u = V.level_begin(lu); u < V.level_end(lu); ++u)
        for (Index w = W.level_begin(lw); w < W.level_end(lw); ++w) {
          elements_.push_back({Kind::Circ, u, w, 0, 0, lu + lw + base});
          for (long r = 1; r <= slack && lu + lw + base + r <= cutoff; ++r)
            for (long s = 0; s <= r; ++s) elements_.push_back({Kind::Generalized, u, w, r, s, lu + lw + base + r});
        }
    }
  }
  if (variant != Variant::OprimeW)
    for (long lw = 0; lw + 1 <= cutoff; ++lw)
      for (Index w = W.level_begin(lw); w < W.level_end(lw); ++w)
        elements_.push_back({Kind::Translation, 0, w, 0, 0, lw + 1});
  std::stable_sort(elements_.begin(), elements_.end(), [](const SpanningElement& a, const SpanningElement& b) {
    return std::tie(a.top_level, a.u, a.w) < std::tie(b.top_level, b.u, b.w);
  });

  values_.assign(elements_.size(), State());
  std::vector<SparseVector> rows(elements_.size());
  parallel_for(elements_.size(), parallel, [&](std::size_t i) {
    const SpanningElement& e = elements_[i];
    State value;
    switch (e.kind) {
      case Kind::Circ:
        value = circ(W, V.basis(e.u), W.basis(e.w), n);
        break;
      case Kind::Generalized:
        value = generalized(W, V.basis(e.u), W.basis(e.w), n, e.r, e.s);
        break;
      case Kind::Translation:
        value = translation(W, W.basis(e.w));
        break;
    }
    rows[i] = to_columns(value);
    values_[i] = std::move(value);
  });
  span_ = parallel ? linalg::rref_parallel(rows, N_) : linalg::rref(rows, N_);
}

SparseVector AnContext::to_columns(const State& x) const {
  W_->check_state(x, "span reduction");
  std::vector<SparseVector::Entry> e;
  e.reserve(x.coeffs.size());
  for (const auto& [id, c] : x.coeffs) {
    if (id >= N_)
      throw CutoffError("state reaches level " + std::to_string(W_->level(id)) + " above the context cutoff " +
                            std::to_string(D_),
                        W_->level(id));
    e.emplace_back(N_ - 1 - id, c);
  }
  return SparseVector::from_entries(std::move(e));
}

State AnContext::from_columns(const SparseVector& c) const {
  std::vector<SparseVector::Entry> e;
  for (const auto& [col, x] : c) e.emplace_back(N_ - 1 - col, x);
  return State(W_, SparseVector::from_entries(std::move(e)));
}

State AnContext::normal_form(const State& x) const { return from_columns(span_.reduce(to_columns(x)).residual); }

std::vector<Index> AnContext::representatives(long max_level) const {
  std::vector<Index> out;
  Index end = W_->level_end(std::min(max_level, D_));
  for (Index id = 0; id < end; ++id)
    if (!span_.is_pivot(N_ - 1 - id)) out.push_back(id);
  return out;
}

std::size_t AnContext::quotient_dimension(long level) const { return representatives(level).size(); }

std::shared_ptr<const AnContext> ContextCache::get(const Module& W, long n, long cutoff, Variant variant, long slack) {
  auto key = std::make_tuple(&W, n, cutoff, static_cast<int>(variant), slack);
  {
    std::lock_guard lock(mutex_);
    auto it = contexts_.find(key);
    if (it != contexts_.end()) return it->second;
  }
  auto ctx = std::make_shared<const AnContext>(W, n, cutoff, variant, slack);
  std::lock_guard lock(mutex_);
  return contexts_.emplace(key, ctx).first->second;
}

std::size_t ContextCache::size() const {
  std::lock_guard lock(mutex_);
  return contexts_.size();
}

Congruence congruent(const State& x, const State& y, ContextCache& cache, long n, Variant variant, long start_cutoff,
                     long max_cutoff, long slack) {
  State d = x - y;
  Congruence result;
  result.cutoff = start_cutoff;
  if (d.is_zero()) {
    result.congruent = true;
    return result;
  }
  const Module& W = *d.module;
  long D = std::max(start_cutoff, d.max_level());
  max_cutoff = std::min<long>(max_cutoff, W.max_level());
  for (; D <= max_cutoff; D += 2) {
    result.cutoff = D;
    if (cache.get(W, n, D, variant, slack)->contains(d)) {
      result.congruent = true;
      return result;
    }
  }
  return result;
}

// ------------------------------------------------------------------ table

SparseVector AnTable::coordinates(const State& x, const AnContext& ctx) const {
  State nf = ctx.normal_form(x);
  std::vector<SparseVector::Entry> e;
  for (const auto& [id, c] : nf.coeffs) {
    auto it = std::lower_bound(basis.begin(), basis.end(), id);
    if (it == basis.end() || *it != id)
      throw CutoffInsufficient("normal form reaches level " + std::to_string(V->level(id)) +
                                   " above the table cutoff " + std::to_string(cutoff),
                               V->level(id));
    e.emplace_back(it - basis.begin(), c);
  }
  return SparseVector::from_entries(std::move(e));
}

const AnContext& table_context(const AnTable& t, ContextCache& cache) {
  return *cache.get(*t.V, t.n, t.internal_cutoff, Variant::OnV);
}

AnTable an_table(const Module& V, long n, long D, ContextCache& cache) {
  if (!V.is_voa()) throw RealizationMismatch("A_n(V) tables need the VOA itself");
  AnTable t;
  t.V = &V;
  t.n = n;
  t.cutoff = D;
  t.internal_cutoff = 2 * D + 2 * n;
  if (t.internal_cutoff > V.max_level())
    throw CutoffInsufficient("products of representatives need level " + std::to_string(t.internal_cutoff) +
                                 " but " + V.name() + " is enumerated to " + std::to_string(V.max_level()),
                             t.internal_cutoff);
  const AnContext& ctx = *cache.get(V, n, t.internal_cutoff, Variant::OnV);
  t.basis = ctx.representatives(D);
  for (long l = 0; l <= D; ++l) t.filtration.push_back(ctx.quotient_dimension(l));
  t.identity = static_cast<std::size_t>(std::lower_bound(t.basis.begin(), t.basis.end(), Index(0)) - t.basis.begin());
  const std::size_t k = t.basis.size();
  t.products.assign(k, std::vector<SparseVector>(k));
  t.theta.assign(k, SparseVector());
  std::vector<long> overflow_level(k * k, -1);
  parallel_for(k * k, true, [&](std::size_t ij) {
    std::size_t i = ij / k, j = ij % k;
    try {
      t.products[i][j] = t.coordinates(star(V, V.basis(t.basis[i]), V.basis(t.basis[j]), n), ctx);
    } catch (const CutoffInsufficient& e) {
      overflow_level[ij] = e.required();
    }
  });
  for (std::size_t ij = 0; ij < k * k; ++ij)
    if (overflow_level[ij] >= 0) t.overflow.emplace_back(ij / k, ij % k, overflow_level[ij]);
  for (std::size_t i = 0; i < k; ++i) t.theta[i] = t.coordinates(theta(V.basis(t.basis[i])), ctx);
  t.omega_class = t.coordinates(V.omega(), ctx);
  Index omega_id = V.omega().coeffs.min_index();
  auto it = std::lower_bound(t.basis.begin(), t.basis.end(), omega_id);
  if (it != t.basis.end() && *it == omega_id) t.omega = static_cast<std::size_t>(it - t.basis.begin());
  return t;
}

State psi_reduce(const State& x, const AnContext& lower) { return lower.normal_form(x); }

State bimodule_act(const State& a, const State& w, Side side, const AnContext& ctx) {
  const Module& W = ctx.module();
  State raw = side == Side::Left ? star(W, a, w, ctx.n()) : star_right(W, w, a, ctx.n());
  return ctx.normal_form(raw);
}

}  // namespace voaforge::anv
