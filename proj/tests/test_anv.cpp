#include <doctest.h>

#include <random>

#include "voaforge/anv.hpp"
#include "voaforge/notation.hpp"

using namespace voaforge;
using namespace voaforge::anv;

namespace {

State random_state(const Module& m, std::mt19937_64& rng, long lo, long hi) {
  std::uniform_int_distribution<long> lv(lo, hi);
  for (int attempt = 0; attempt < 50; ++attempt) {
    long l = lv(rng);
    if (m.dim(l) == 0) continue;
    State s = m.zero();
    for (Index id = m.level_begin(l); id < m.level_end(l); ++id) s += m.basis(id, random_rational(rng, 5));
    if (!s.is_zero()) return s;
  }
  return m.lowest();
}

// Plain dense Gaussian elimination, kept separate from the sparse engine.
std::size_t dense_rank(std::vector<std::vector<Scalar>> m) {
  std::size_t rank = 0;
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Scalar f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

bool congruent_mod(const State& x, const State& y, ContextCache& cache, long n, Variant v) {
  return congruent(x, y, cache, n, v, 0, 12, 2).congruent;
}

}  // namespace

TEST_CASE("circ and generalized products on small states") {
  auto H = Module::heisenberg(10);
  auto Vir = Module::virasoro(Scalar(1, 2), 10);
  State a = H->heisenberg_generator();
  State one = H->vacuum();
  CHECK(circ(*H, one, a, 0).is_zero());
  CHECK(circ(*H, one, one, 2).is_zero());
  CHECK(circ(*H, a, a, 0) == parse_state("a(-2)a(-1)|0> + a(-1)^2|0>", *H));

  auto M = Module::verma(Vir, Scalar(3, 4), 8);
  State w = M->lowest() + parse_state("L(-1)|h>", *M);
  State lhs = circ(*M, Vir->omega(), w, 0);
  State rhs = M->L(-3, w) + Scalar(2) * M->L(-2, w) + M->L(-1, w);
  CHECK(lhs == rhs);

  State g = generalized(*Vir, Vir->omega(), Vir->vacuum(), 0, 1, 0);
  CHECK(g == parse_state("L(-4)|0> + 2 L(-3)|0> + L(-2)|0>", *Vir));
  CHECK(generalized(*Vir, Vir->omega(), Vir->vacuum(), 1, 0, 0) ==
        circ(*Vir, Vir->omega(), Vir->vacuum(), 1));
  CHECK_THROWS_AS(generalized(*Vir, Vir->omega(), Vir->vacuum(), 0, 1, 2), std::invalid_argument);
}

TEST_CASE("star products with the vacuum and the generator") {
  auto H = Module::heisenberg(14);
  auto F = Module::fock(H, Scalar(2, 3), 14);
  State a = H->heisenberg_generator();
  State one = H->vacuum();
  CHECK(star(*H, a, a, 0) == parse_state("a(-1)^2|0>", *H));
  CHECK(star(*H, a, a, 0) == Scalar(2) * H->omega());
  CHECK(star(*H, a, one, 0) == a);
  std::mt19937_64 rng(11);
  for (long n = 0; n <= 3; ++n)
    for (int k = 0; k < 5; ++k) {
      State v = random_state(*H, rng, 0, 4);
      State w = random_state(*F, rng, 0, 4);
      CHECK(star(*H, one, v, n) == v);
      CHECK(star(*F, one, w, n) == w);
      CHECK(star_right(*F, w, one, n) == w);
    }
}

TEST_CASE("translation times w is a fixed multiple of the circ product") {
  auto H = Module::heisenberg(12);
  auto Vir = Module::virasoro(Scalar(-22, 5), 12);
  std::mt19937_64 rng(5);
  for (const Module* V : {H.get(), Vir.get()})
    for (long n = 0; n <= 2; ++n)
      for (int k = 0; k < 6; ++k) {
        State v = random_state(*V, rng, 0, 3);
        State w = random_state(*V, rng, 0, 3);
        State lhs = star(*V, translation(*V, v), w, n);
        Scalar factor = sign_power(n) * Scalar(2 * n + 1) * binomial(2 * n, n);
        CHECK(lhs == factor * circ(*V, v, w, n));
      }
}

TEST_CASE("span rank agrees with dense elimination") {
  auto H = Module::heisenberg(8);
  auto Vir = Module::virasoro(Scalar(1), 8);
  auto F = Module::fock(H, Scalar(-1, 2), 8);
  struct Case {
    const Module* m;
    long n, D;
    Variant v;
  };
  for (Case c : {Case{H.get(), 0, 6, Variant::OnV}, Case{Vir.get(), 1, 7, Variant::OnV},
                 Case{F.get(), 0, 5, Variant::OprimeW}, Case{F.get(), 1, 6, Variant::OnW}}) {
    AnContext ctx(*c.m, c.n, c.D, c.v, 2, false);
    const Index N = c.m->level_end(c.D);
    std::vector<std::vector<Scalar>> dense;
    for (const State& s : ctx.element_values()) {
      std::vector<Scalar> row(static_cast<std::size_t>(N));
      for (const auto& [id, x] : s.coeffs) row[static_cast<std::size_t>(id)] = x;
      dense.push_back(std::move(row));
    }
    CHECK(ctx.rank() == dense_rank(dense));
    CHECK(ctx.quotient_dimension(c.D) + ctx.rank() == static_cast<std::size_t>(N));
    AnContext par(*c.m, c.n, c.D, c.v, 2, true);
    CHECK(par.rank() == ctx.rank());
    CHECK(par.representatives(c.D) == ctx.representatives(c.D));
    for (const State& s : ctx.element_values()) CHECK(ctx.contains(s));
  }
}

TEST_CASE("quotient filtrations of A_0") {
  ContextCache cache;
  auto H = Module::heisenberg(10);
  AnTable t = an_table(*H, 0, 4, cache);
  CHECK(t.filtration == std::vector<std::size_t>{1, 2, 3, 4, 5});
  // A_0 of the Heisenberg VOA is a polynomial ring: products leave the window
  // exactly when the degrees add past the cutoff.
  for (auto [i, j, level] : t.overflow) {
    CHECK(i + j > 4);
    CHECK(level == static_cast<long>(i + j));
  }
  CHECK(t.overflow.size() == 10);

  auto Vir = Module::virasoro(Scalar(1, 2), 14);
  AnTable tv = an_table(*Vir, 0, 6, cache);
  CHECK(tv.filtration == std::vector<std::size_t>{1, 1, 2, 2, 3, 3, 4});
  REQUIRE(tv.basis.size() == 4);
  for (std::size_t i = 0; i < tv.basis.size(); ++i) {
    Partition p(i, 2);
    CHECK(tv.basis[i] == Vir->id_of(p));
  }
  REQUIRE(tv.omega.has_value());
  CHECK(tv.products[tv.identity][*tv.omega] == SparseVector::unit(*tv.omega));
}

TEST_CASE("algebra laws hold modulo the span") {
  ContextCache cache;
  auto H = Module::heisenberg(14);
  auto Vir = Module::virasoro(Scalar(7, 3), 14);
  std::mt19937_64 rng(2024);
  for (const Module* V : {H.get(), Vir.get()})
    for (long n = 0; n <= 1; ++n)
      for (int k = 0; k < 3; ++k) {
        State u = random_state(*V, rng, 0, 2);
        State v = random_state(*V, rng, 0, 2);
        State w = random_state(*V, rng, 0, 2);
        CHECK(congruent_mod(star(*V, v, V->vacuum(), n), v, cache, n, Variant::OnV));
        CHECK(congruent_mod(star(*V, star(*V, u, v, n), w, n), star(*V, u, star(*V, v, w, n), n), cache, n,
                            Variant::OnV));
        CHECK(congruent_mod(star(*V, V->omega(), v, n), star(*V, v, V->omega(), n), cache, n, Variant::OnV));
        CHECK(congruent_mod(theta(star(*V, u, v, n)), star(*V, theta(v), theta(u), n), cache, n, Variant::OnV));
        CHECK(congruent_mod(star_right(*V, u, v, n), star(*V, u, v, n), cache, n, Variant::OnV));
        CHECK(congruent_mod(star(*V, u, v, n) - star(*V, v, u, n), commutator_term(*V, u, v), cache, n,
                            Variant::OnV));
        CHECK(congruent_mod(star(*V, u, v, n + 1), star(*V, u, v, n), cache, n, Variant::OnV));
      }
}

TEST_CASE("bimodule actions on a module") {
  ContextCache cache;
  auto H = Module::heisenberg(14);
  auto F = Module::fock(H, Scalar(1, 3), 14);
  auto Vir = Module::virasoro(Scalar(1, 2), 14);
  auto M = Module::verma(Vir, Scalar(1, 16), 14);
  std::mt19937_64 rng(77);
  for (const Module* W : {F.get(), M.get()}) {
    const Module& V = W->voa();
    for (long n = 0; n <= 1; ++n)
      for (int k = 0; k < 3; ++k) {
        State u = random_state(V, rng, 0, 2);
        State v = random_state(V, rng, 0, 2);
        State w = random_state(*W, rng, 0, 2);
        CHECK(congruent_mod(star(*W, star(V, u, v, n), w, n), star(*W, u, star(*W, v, w, n), n), cache, n,
                            Variant::OnW));
        CHECK(congruent_mod(star_right(*W, star_right(*W, w, u, n), v, n), star_right(*W, w, star(V, u, v, n), n),
                            cache, n, Variant::OnW));
        CHECK(congruent_mod(star_right(*W, star(*W, u, w, n), v, n), star(*W, u, star_right(*W, w, v, n), n), cache,
                            n, Variant::OnW));
        CHECK(congruent_mod(star(*W, u, w, n) - star_right(*W, w, u, n), commutator_term(*W, u, w), cache, n,
                            Variant::OnW));
      }
    // the left action preserves the span
    AnContext small(*W, 0, 4, Variant::OnW, 2, false);
    for (std::size_t i = 0; i < small.element_values().size(); i += 7) {
      State x = small.element_values()[i];
      CHECK(congruent_mod(star(*W, V.omega(), x, 0), W->zero(), cache, 0, Variant::OnW));
    }
    AnContext ctx(*W, 0, 6, Variant::OnW, 2, false);
    State a = V.is_voa() && V.algebra() == Algebra::Heisenberg ? V.heisenberg_generator() : V.omega();
    State cls = bimodule_act(a, W->lowest(), Side::Left, ctx);
    CHECK(ctx.contains(cls - star(*W, a, W->lowest(), 0)));
  }
}

TEST_CASE("contexts reject bad input") {
  auto H = Module::heisenberg(6);
  auto F = Module::fock(H, Scalar(1), 6);
  CHECK_THROWS_AS(AnContext(*F, 0, 4, Variant::OnV), RealizationMismatch);
  CHECK_THROWS_AS(AnContext(*H, -1, 4, Variant::OnV), std::invalid_argument);
  ContextCache cache;
  CHECK_THROWS_AS(an_table(*H, 0, 4, cache), CutoffInsufficient);
  AnContext ctx(*H, 0, 3, Variant::OnV);
  CHECK_THROWS_AS(ctx.normal_form(H->basis(H->level_begin(5))), CutoffError);
}

TEST_CASE("congruence is not vacuous") {
  ContextCache cache;
  auto H = Module::heisenberg(14);
  auto Vir = Module::virasoro(Scalar(7, 3), 14);
  for (const Module* V : {H.get(), Vir.get()})
    for (long n = 0; n <= 2; ++n) {
      State w = V->omega();
      CHECK_FALSE(congruent_mod(w, w + V->vacuum(), cache, n, Variant::OnV));
      CHECK_FALSE(congruent_mod(star(*V, w, w, n), star(*V, w, w, n) + w, cache, n, Variant::OnV));
    }
}
