#include "voaforge/verify.hpp"

#include <chrono>
#include <random>
#include <sstream>

#include "voaforge/anv.hpp"
#include "voaforge/formal.hpp"
#include "voaforge/notation.hpp"
#include "voaforge/regrep.hpp"

namespace voaforge::verify {

void Check::record(bool ok, const std::string& what) {
  if (ok) {
    ++passed;
    return;
  }
  ++failed;
  if (failed <= 3) notes.push_back("FAILED: " + what);
}

bool Report::ok() const {
  for (const auto& c : checks)
    if (c.failed > 0) return false;
  return true;
}

namespace {

using formal::RationalFunction;
using formal::SeriesWindow;

class Timer {
 public:
  explicit Timer(Check& c) : check_(c), start_(std::chrono::steady_clock::now()) {}
  ~Timer() { check_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  Check& check_;
  std::chrono::steady_clock::time_point start_;
};

Check named(std::string name) {
  Check c;
  c.name = std::move(name);
  return c;
}

std::mt19937_64 make_rng(const Options& o, std::uint64_t salt) { return std::mt19937_64(o.seed * 1000003ULL + salt); }

State theta_of(const State& v, const Options& o) {
  // the tampered map drops the sign (-1)^{L(0)} and is not an involution
  return o.tamper_theta ? exp_L1(v, Scalar(1)) : theta(v);
}

long random_level(const Module& m, std::mt19937_64& rng, long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  for (int attempt = 0; attempt < 100; ++attempt) {
    long l = d(rng);
    if (m.dim(l) > 0) return l;
  }
  return 0;
}

State random_homogeneous(const Module& m, std::mt19937_64& rng, long level) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    State s = m.zero();
    for (Index id = m.level_begin(level); id < m.level_end(level); ++id)
      s += m.basis(id, random_rational(rng, 5));
    if (!s.is_zero()) return s;
  }
  return m.basis(m.level_begin(level));
}

State random_state(const Module& m, std::mt19937_64& rng, long lo, long hi) {
  return random_homogeneous(m, rng, random_level(m, rng, lo, hi));
}

// A rational away from the small values where Verma modules degenerate.
Scalar generic_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-400, 400), den(7, 97);
  for (;;) {
    Scalar r = fraction(num(rng), den(rng));
    if (r.get_den() > 3) return r;
  }
}

std::string show(const State& s) { return format_state(s); }

// x == y modulo the span; inconclusive verdicts are counted separately.
void record_congruence(Check& c, const State& x, const State& y, anv::ContextCache& cache, long n,
                       anv::Variant variant, const Options& o, const std::string& what) {
  const Module& W = *x.module;
  State d = x - y;
  if (d.is_zero()) {
    c.record(true, what);
    return;
  }
  const long level = d.max_level();
  anv::Congruence verdict;
  verdict.cutoff = o.cutoff;
  if (o.raise_cutoff) {
    const long stop = std::min<long>(std::max(o.cutoff, level) + 4, W.max_level());
    verdict = anv::congruent(x, y, cache, n, variant, std::min(std::max(o.cutoff, level), stop), stop, 2);
  } else if (level <= o.cutoff) {
    verdict = anv::congruent(x, y, cache, n, variant, o.cutoff, o.cutoff, 2);
  }
  if (verdict.congruent) {
    c.record(true, what);
  } else {
    ++c.inconclusive;
    if (c.inconclusive <= 3) c.notes.push_back("inconclusive up to cutoff " + std::to_string(verdict.cutoff) + ": " + what);
  }
}

// ------------------------------------------------------------------ formal

RationalFunction random_rational_function(std::mt19937_64& rng, const Scalar& z) {
  std::uniform_int_distribution<long> small(0, 3), deg(0, 5);
  std::vector<Scalar> g(static_cast<std::size_t>(deg(rng) + 1));
  for (auto& c : g) c = random_rational(rng, 9);
  g.back() = random_rational(rng, 9, true);
  return RationalFunction(formal::Polynomial(g), small(rng), small(rng), z);
}

Check expansion_identities(const Options& o) {
  Check c = named("expansion maps and reconstruction");
  Timer t(c);
  auto rng = make_rng(o, 1);
  using namespace formal;
  // linearity
  for (int trial = 0; trial < 30; ++trial) {
    Scalar z = random_rational(rng, 9, true);
    RationalFunction f = random_rational_function(rng, z), g = random_rational_function(rng, z);
    Scalar a = random_rational(rng, 9), b = random_rational(rng, 9);
    RationalFunction h = f * a + g * b;
    const long lo = -std::max({f.l(), g.l(), h.l()});
    bool ok = true;
    for (long p = lo; p <= lo + 8; ++p)
      ok = ok && h.iota_zero_coefficient(p) ==
                     a * f.iota_zero_coefficient(p) + b * g.iota_zero_coefficient(p);
    const long top = std::max({f.top_power(), g.top_power(), h.top_power()});
    for (long p = top - 8; p <= top; ++p)
      ok = ok && h.iota_infty_coefficient(p) ==
                     a * f.iota_infty_coefficient(p) + b * g.iota_infty_coefficient(p);
    c.record(ok, "linearity, trial " + std::to_string(trial));
  }
  // multiplying by (x - z)^n commutes with both expansions
  for (int trial = 0; trial < 10; ++trial) {
    Scalar z = random_rational(rng, 9, true);
    RationalFunction f = random_rational_function(rng, z);
    for (long n = -3; n <= 3; ++n) {
      RationalFunction nf = RationalFunction(Polynomial::constant(1), 0, -n, z) * f;
      SeriesWindow fz = iota_zero(f, -f.l(), 6);
      SeriesWindow bz = binom_expand(BinomKind::ZMinusX, n, z, 0, 8);
      LaurentPolynomial::Map sign;
      sign[0] = sign_power(n);
      SeriesWindow at_zero = (fz * bz).times(LaurentPolynomial(sign));
      bool ok = true;
      for (long p = at_zero.lo(); p <= at_zero.hi(); ++p) ok = ok && nf.iota_zero_coefficient(p) == at_zero.at(p);
      const long top = f.top_power();
      SeriesWindow at_inf = iota_infty(f, top - 8, top) * binom_expand(BinomKind::XMinusZ, n, z, n - 8, n);
      for (long p = at_inf.lo(); p <= at_inf.hi(); ++p) ok = ok && nf.iota_infty_coefficient(p) == at_inf.at(p);
      c.record(ok, "multiplier identity, n = " + std::to_string(n));
    }
  }
  // reconstruction round trip
  std::uniform_int_distribution<long> small(0, 3), deg(0, 5);
  for (int trial = 0; trial < 100; ++trial) {
    Scalar z = random_rational(rng, 9, true);
    const long l = small(rng), k = small(rng), d = deg(rng);
    std::vector<Scalar> g(static_cast<std::size_t>(d + 1));
    for (auto& x : g) x = random_rational(rng, 9);
    g.back() = random_rational(rng, 9, true);
    RationalFunction f(Polynomial(g), l, k, z);
    const long top = d - l - k;
    SeriesWindow s = iota_infty(f, top - (d + k + l), std::max(top, f.top_power()));
    bool ok = false;
    try {
      ok = rational_from_upper_expansion(s, l, k, z, d) == f;
    } catch (const ReconstructionError&) {
    }
    c.record(ok, "reconstruction, trial " + std::to_string(trial));
  }
  return c;
}

// ------------------------------------------------------------------ A_n(V)

struct Realizations {
  std::shared_ptr<Module> heis, vir;
  explicit Realizations(std::mt19937_64& rng, int max_level = 20)
      : heis(Module::heisenberg(max_level)), vir(Module::virasoro(generic_rational(rng), max_level)) {}
};

Check algebra_laws(const Options& o) {
  Check c = named("A_n(V) identity, associativity, central omega, theta");
  Timer t(c);
  auto rng = make_rng(o, 2);
  Realizations r(rng);
  anv::ContextCache cache;
  for (const Module* V : {r.heis.get(), r.vir.get()})
    for (long n = 0; n <= 2; ++n)
      for (int trial = 0; trial < 50; ++trial) {
        long a, b, d;
        do {
          a = random_level(*V, rng, 0, 5);
          b = random_level(*V, rng, 0, 5);
          d = random_level(*V, rng, 0, 5);
        } while (a + b + d > 5);
        State u = random_homogeneous(*V, rng, a), v = random_homogeneous(*V, rng, b),
              w = random_homogeneous(*V, rng, d);
        const std::string tag = V->name() + " n=" + std::to_string(n) + " u=" + show(u);
        const auto on = anv::Variant::OnV;
        record_congruence(c, anv::star(*V, V->vacuum(), u, n), u, cache, n, on, o, "1*u, " + tag);
        record_congruence(c, anv::star(*V, u, V->vacuum(), n), u, cache, n, on, o, "u*1, " + tag);
        record_congruence(c, anv::star(*V, anv::star(*V, u, v, n), w, n), anv::star(*V, u, anv::star(*V, v, w, n), n),
                          cache, n, on, o, "associativity, " + tag);
        record_congruence(c, anv::star(*V, V->omega(), u, n), anv::star(*V, u, V->omega(), n), cache, n, on, o,
                          "omega central, " + tag);
        record_congruence(c, theta_of(anv::star(*V, u, v, n), o),
                          anv::star(*V, theta_of(v, o), theta_of(u, o), n), cache, n, on, o,
                          "theta reverses products, " + tag);
      }
  return c;
}

Check right_action_and_commutator(const Options& o) {
  Check c = named("right product and commutator congruences");
  Timer t(c);
  auto rng = make_rng(o, 3);
  Realizations r(rng, 16);
  auto F = Module::fock(r.heis, generic_rational(rng), 16);
  auto M = Module::verma(r.vir, generic_rational(rng), 16);
  anv::ContextCache cache;
  for (long n = 0; n <= 1; ++n)
    for (int trial = 0; trial < 30; ++trial) {
      const Module& V = trial % 2 ? *r.vir : *r.heis;
      State u = random_state(V, rng, 0, 3), v = random_state(V, rng, 0, 3);
      record_congruence(c, anv::star(V, u, v, n), anv::star_right(V, u, v, n), cache, n, anv::Variant::OnV, o,
                        "right product formula on " + V.name() + ", u=" + show(u) + ", v=" + show(v));
    }
  for (long n = 0; n <= 1; ++n)
    for (int trial = 0; trial < 30; ++trial) {
      const Module& W = trial % 2 ? *M : *F;
      const Module& V = W.voa();
      State v = random_state(V, rng, 0, 3), w = random_state(W, rng, 0, 3);
      record_congruence(c, anv::star(W, v, w, n) - anv::star_right(W, w, v, n), anv::commutator_term(W, v, w), cache,
                        n, anv::Variant::OnW, o, "commutator on " + W.name() + ", v=" + show(v) + ", w=" + show(w));
    }
  return c;
}

Check projection_homomorphism(const Options& o) {
  Check c = named("A_{n+1}(V) -> A_n(V) is multiplicative");
  Timer t(c);
  auto rng = make_rng(o, 4);
  Realizations r(rng, 16);
  anv::ContextCache cache;
  for (int trial = 0; trial < 20; ++trial) {
    const Module& V = trial % 2 ? *r.vir : *r.heis;
    State x = random_state(V, rng, 0, 3), y = random_state(V, rng, 0, 3);
    record_congruence(c, anv::star(V, x, y, 1), anv::star(V, x, y, 0), cache, 0, anv::Variant::OnV, o,
                      "on " + V.name() + ", x=" + show(x) + ", y=" + show(y));
  }
  // the larger subspace maps into the smaller one
  for (const Module* V : {r.heis.get(), r.vir.get()}) {
    anv::AnContext upper(*V, 1, 8, anv::Variant::OnV, 2, o.parallel);
    auto lower = cache.get(*V, 0, 10, anv::Variant::OnV, 2);
    const auto& values = upper.element_values();
    for (std::size_t i = 0; i < values.size(); i += std::max<std::size_t>(1, values.size() / 10))
      c.record(anv::psi_reduce(values[i], *lower).is_zero(), "spanning element " + std::to_string(i) + " on " + V->name());
  }
  return c;
}

Check translation_identity(const Options& o) {
  Check c = named(o.literal ? "translation identity with constant C(2n+1,n)" : "translation identity with constant C(2n,n)");
  Timer t(c);
  auto rng = make_rng(o, 5);
  Realizations r(rng, 16);
  auto F = Module::fock(r.heis, generic_rational(rng), 14);
  auto M = Module::verma(r.vir, generic_rational(rng), 14);
  std::size_t alternative = 0;
  for (long n = 0; n <= 2; ++n) {
    const Scalar stated = sign_power(n) * Scalar(2 * n + 1) * binomial(2 * n + 1, n);
    const Scalar derived = sign_power(n) * Scalar(2 * n + 1) * binomial(2 * n, n);
    const Scalar& factor = o.literal ? stated : derived;
    const Scalar& other = o.literal ? derived : stated;
    for (int trial = 0; trial < 20; ++trial) {
      const Module& W = *std::vector<const Module*>{r.heis.get(), r.vir.get(), F.get(), M.get()}[trial % 4];
      const Module& V = W.voa();
      State v = random_state(V, rng, 0, 3), w = random_state(W, rng, 0, 3);
      State lhs = anv::star(W, anv::translation(V, v), w, n);
      State base = anv::circ(W, v, w, n);
      c.record(lhs == factor * base, "n=" + std::to_string(n) + " on " + W.name() + ", v=" + show(v));
      if (lhs == other * base) ++alternative;
    }
  }
  c.note(std::string("the ") + (o.literal ? "constant C(2n,n)" : "constant C(2n+1,n)") + " holds on " +
         std::to_string(alternative) + " of 60 samples");
  return c;
}

// ------------------------------------------------------------------ functionals

struct FunctionalFamily {
  std::shared_ptr<Module> heis, vir, fock, verma;
  std::vector<regrep::FunctionalPtr> functionals;  ///< all carry certificates
  explicit FunctionalFamily(std::mt19937_64& rng)
      : heis(Module::heisenberg(30)),
        vir(Module::virasoro(generic_rational(rng), 30)),
        fock(Module::fock(heis, generic_rational(rng), 6)),
        verma(Module::verma(vir, generic_rational(rng), 6)) {
    functionals.push_back(regrep::random_table(*heis, 3, 1, rng));
    functionals.push_back(regrep::random_table(*vir, 4, 2, rng));
    functionals.push_back(regrep::matrix_coefficient(*fock, 0, fock->lowest()));
    functionals.push_back(regrep::matrix_coefficient(*verma, 1, verma->lowest() + verma->L(-1, verma->lowest())));
    functionals.push_back(regrep::matrix_coefficient(*fock, 1, random_state(*fock, rng, 1, 1)));
  }
};

Check commutativity_and_jacobi(const Options& o) {
  Check c = named("left/right actions commute; Jacobi windows");
  Timer t(c);
  auto rng = make_rng(o, 6);
  FunctionalFamily fam(rng);
  std::uniform_int_distribution<long> mode(-2, 2);
  for (int trial = 0; trial < 25; ++trial) {
    auto f = fam.functionals[static_cast<std::size_t>(trial) % fam.functionals.size()];
    const Module& V = f->module();
    State v1 = random_state(V, rng, 0, 2), v2 = random_state(V, rng, 0, 2);
    const long m = mode(rng), k = mode(rng);
    auto lr = regrep::mode_image(regrep::Side::Left, v1, m, regrep::mode_image(regrep::Side::Right, v2, k, f));
    auto rl = regrep::mode_image(regrep::Side::Right, v2, k, regrep::mode_image(regrep::Side::Left, v1, m, f));
    bool ok = true;
    for (Index w = 0; w < V.level_end(2); ++w) ok = ok && lr->at(w) == rl->at(w);
    c.record(ok, "commutator on " + f->describe());
  }
  for (int trial = 0; trial < 25; ++trial) {
    auto f = fam.functionals[static_cast<std::size_t>(trial) % fam.functionals.size()];
    const Module& V = f->module();
    std::uniform_int_distribution<Index> vd(0, V.level_end(2) - 1), wd(0, V.level_end(2) - 1);
    const Index vid = vd(rng), wid = wd(rng);
    auto verdict = regrep::jacobi_window_check(*f, vid, wid, -4, 4);
    c.record(verdict.ok, "Jacobi window on " + f->describe() + ": " + verdict.detail);
  }
  return c;
}

Check certification(const Options& o) {
  Check c = named("homomorphisms on A'_n(W) are exactly the certified functionals");
  Timer t(c);
  auto rng = make_rng(o, 7);
  auto H = Module::heisenberg(16);
  auto Vir = Module::virasoro(generic_rational(rng), 16);
  regrep::CertifyOptions opt;
  opt.cutoff = 6;
  opt.parallel = o.parallel;
  for (int trial = 0; trial < 20; ++trial) {
    const long n = trial % 2;
    const bool heis = (trial / 2) % 2 == 0;
    std::shared_ptr<Module> M = heis ? Module::fock(H, generic_rational(rng), 4)
                                     : Module::verma(Vir, generic_rational(rng), 4);
    State u = random_state(*M, rng, 0, n);
    auto f = regrep::matrix_coefficient(*M, n, u);
    bool ok = true;
    std::string detail;
    try {
      regrep::certify_hom_anw(f, n, opt);
    } catch (const regrep::CertificationFailure& e) {
      ok = false;
      detail = e.what();
    }
    c.record(ok, "matrix coefficient of " + M->name() + " at n=" + std::to_string(n) + " rejected: " + detail);
  }
  std::vector<std::pair<regrep::FunctionalPtr, long>> negatives;
  negatives.emplace_back(regrep::dual_functional(*Vir, Vir->level_begin(2)), 0);
  for (int i = 0; i < 4; ++i)
    negatives.emplace_back(regrep::random_table(i % 2 ? *Vir : *H, 2 + i, 1, rng), i / 2);
  for (const auto& [f, n] : negatives) {
    bool rejected = false;
    std::string witness;
    try {
      regrep::certify_hom_anw(f, n, opt);
    } catch (const regrep::CertificationFailure& e) {
      rejected = !e.witness().empty();
      witness = e.witness();
    }
    c.record(rejected, "accepted " + f->describe());
    if (rejected && c.notes.size() < 2) c.note("rejection witness: " + witness);
  }
  return c;
}

Check bimodule_routes_and_sigma(const Options& o) {
  Check c = named("o-operators are star products; sigma intertwines");
  Timer t(c);
  auto rng = make_rng(o, 8);
  auto H = Module::heisenberg(40);
  auto Vir = Module::virasoro(generic_rational(rng), 30);
  for (const Module* V : {H.get(), Vir.get()})
    for (long n = 0; n <= 1; ++n) {
      std::shared_ptr<Module> M = V == H.get() ? Module::fock(H, generic_rational(rng), 6)
                                              : Module::verma(Vir, generic_rational(rng), 6);
      auto f = regrep::matrix_coefficient(*M, n, random_state(*M, rng, 0, n));
      for (int trial = 0; trial < 25; ++trial) {
        State v = random_state(*V, rng, 0, 2);
        State w = random_state(*V, rng, 0, 2);
        auto left = regrep::o_deformed(regrep::Side::Left, v, f);
        auto right = regrep::o_deformed(regrep::Side::Right, v, f);
        const bool ok = (*left)(w) == (*f)(anv::star(*V, w, v, n)) &&
                        (*right)(w) == (*f)(anv::star(*V, theta_of(v, o), w, n));
        c.record(ok, "o-operator routes on " + V->name() + " n=" + std::to_string(n) + ", v=" + show(v));
      }
      // five (a1, a2) pairs, five test states each
      auto s = regrep::sigma(f, 1);
      for (int pair = 0; pair < 5; ++pair) {
        State a1 = random_state(*V, rng, 0, 2), a2 = random_state(*V, rng, 0, 2);
        auto lhs = regrep::sigma(regrep::dual_action(a1, a2, f, n), 1);
        auto rhs = regrep::o_image(regrep::Side::Left, a1, regrep::o_image(regrep::Side::Right, a2, s));
        for (int k = 0; k < 5; ++k) {
          State w = random_state(*V, rng, 0, 2);
          c.record((*lhs)(w) == (*rhs)(w), "sigma on " + V->name() + " n=" + std::to_string(n) + ", a1=" + show(a1) +
                                              ", a2=" + show(a2));
        }
      }
    }
  return c;
}

Check deformation(const Options& o) {
  Check c = named("deformed actions");
  Timer t(c);
  auto rng = make_rng(o, 9);
  auto H = Module::heisenberg(14);
  auto Vir = Module::virasoro(generic_rational(rng), 14);
  auto F = Module::fock(H, generic_rational(rng), 10);
  auto M = Module::verma(Vir, generic_rational(rng), 10);
  std::uniform_int_distribution<long> mode(-2, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const Module& W = trial % 2 ? *M : *F;
    const Scalar z0 = trial % 4 < 2 ? Scalar(1) : Scalar(-1);
    State v = random_state(W.voa(), rng, 0, 3), w = random_state(W, rng, 0, 2);
    const long m = mode(rng);
    c.record(regrep::deformed_round_trip(W, z0, v, m, w) == W.mode(v, m, w),
             "round trip on " + W.name() + ", v=" + show(v));
    c.record(regrep::deformed_mode(W, z0, v, m, w, regrep::Route::Relation) ==
                 regrep::deformed_mode(W, z0, v, m, w, regrep::Route::Definition),
             "two routes on " + W.name() + ", v=" + show(v));
  }
  auto f = regrep::random_table(*H, 2, 1, rng);
  for (int trial = 0; trial < 10; ++trial) {
    State v = random_state(*H, rng, 0, 2);
    const long m = mode(rng);
    const auto side = trial % 2 ? regrep::Side::Left : regrep::Side::Right;
    auto back = regrep::deformed_round_trip(side, Scalar(1), v, m, f);
    auto direct = regrep::mode_image(side, v, m, f);
    bool ok = true;
    for (Index w = 0; w < H->level_end(3); ++w) ok = ok && back->at(w) == direct->at(w);
    c.record(ok, "round trip on functionals, v=" + show(v));
  }
  for (const Module* W : {F.get(), M.get(), H.get()})
    for (long n = 0; n <= 1; ++n)
      for (const Scalar& z0 : {Scalar(1), Scalar(-1)}) {
        auto plain = regrep::omega_n_basis(*W, n, 4, 4);
        std::vector<State> flat;
        for (const auto& l : plain.levels) flat.insert(flat.end(), l.begin(), l.end());
        c.record(regrep::same_span(regrep::omega_n_deformed(*W, n, 4, 4, z0), flat),
                 "Omega_" + std::to_string(n) + " of " + W->name());
      }
  return c;
}

Check omega_spaces(const Options& o) {
  Check c = named(o.literal ? "Omega_n, shift law, (v_m)^n kills Omega_n" : "Omega_n, shift law, (v_m)^(n+1) kills Omega_n");
  Timer t(c);
  auto rng = make_rng(o, 10);
  auto H = Module::heisenberg(16);
  auto Vir = Module::virasoro(generic_rational(rng), 16);
  auto M = Module::verma(Vir, generic_rational(rng), 10);
  auto F = Module::fock(H, generic_rational(rng), 10);
  const long K = o.levels, vmax = o.vmax;
  for (const Module* W : {M.get(), F.get(), H.get()})
    c.record(regrep::omega_n_basis(*W, -1, K, vmax).dimension() == 0, "Omega_-1 of " + W->name());
  auto o0 = regrep::omega_n_basis(*M, 0, K, vmax);
  c.record(o0.dimension() == 1, "Omega_0 of " + M->name() + " has dimension " + std::to_string(o0.dimension()));

  // Omega_0..Omega_4 of each module, for the shift law
  std::vector<const Module*> mods{M.get(), F.get(), H.get()};
  std::vector<std::vector<regrep::OmegaBasis>> om(mods.size());
  for (std::size_t i = 0; i < mods.size(); ++i)
    for (long n = 0; n <= 4; ++n) om[i].push_back(regrep::omega_n_basis(*mods[i], n, K, vmax));
  int samples = 0;
  for (int attempt = 0; attempt < 2000 && samples < 30; ++attempt) {
    const std::size_t i = static_cast<std::size_t>(attempt) % mods.size();
    const Module& W = *mods[i];
    const long n = attempt % 3;
    const auto& levels = om[i][static_cast<std::size_t>(n)].levels;
    std::vector<State> basis;
    for (const auto& l : levels) basis.insert(basis.end(), l.begin(), l.end());
    if (basis.empty()) continue;
    State w = W.zero();
    for (const auto& b : basis) w += random_rational(rng, 5) * b;
    State u = random_state(W.voa(), rng, 0, 3);
    const long t = u.max_level();
    std::uniform_int_distribution<long> rd(t - 3, t + 1);
    const long r = rd(rng);
    if (w.is_zero() || w.max_level() + t - r - 1 > K) continue;
    const long target = n + std::max(0L, t - r - 1);
    if (target > 4) continue;
    State img = W.mode(u, r, w);
    c.record(om[i][static_cast<std::size_t>(target)].contains(img),
             "u_r Omega_" + std::to_string(n) + " on " + W.name() + ", u=" + show(u) + ", r=" + std::to_string(r));
    ++samples;
  }

  struct Nil {
    const Module* W;
    State v;
    long m;
  };
  std::vector<Nil> cases{{M.get(), Vir->omega(), 2}, {M.get(), Vir->omega(), 3}, {F.get(), H->heisenberg_generator(), 1},
                         {H.get(), H->heisenberg_generator(), 1}, {H.get(), H->omega(), 2}};
  for (const auto& cs : cases)
    for (long n = 1; n <= 2; ++n) {
      auto omega = regrep::omega_n_basis(*cs.W, n, K, vmax);
      const long power = o.literal ? n : n + 1;
      auto verdict = regrep::nilpotency_check(omega, cs.v, cs.m, power);
      c.record(verdict.ok, "(" + show(cs.v) + ")_" + std::to_string(cs.m) + "^" + std::to_string(power) + " on Omega_" +
                               std::to_string(n) + " of " + cs.W->name() +
                               (verdict.ok ? "" : ", survives on " + show(verdict.witness)));
    }
  return c;
}

Check induction(const Options& o) {
  Check c = named("induced modules");
  Timer t(c);
  auto rng = make_rng(o, 11);
  regrep::InduceOptions opt;
  opt.parallel = o.parallel;
  std::size_t equal = 0;
  for (int sample = 0; sample < 5; ++sample) {
    auto Vir = Module::virasoro(generic_rational(rng), 30);
    auto M = Module::verma(Vir, generic_rational(rng), 8);
    auto r = regrep::induce(*Vir, regrep::AnModule{M.get(), 0}, 4, opt);
    bool bounded = r.dims.size() == r.oracle.size();
    for (std::size_t i = 0; bounded && i < r.dims.size(); ++i) bounded = r.dims[i] <= r.oracle[i];
    std::ostringstream dims;
    for (auto d : r.dims) dims << d << ' ';
    c.record(bounded, "dims " + dims.str() + "exceed the Verma count for " + M->name());
    c.record(r.below_lowest_vanishes(), "nonzero levels below the lowest for " + M->name());
    if (r.dims == r.oracle) ++equal;
  }
  c.note("Virasoro induced dims equal the Verma count in " + std::to_string(equal) + " of 5 samples");
  auto H = Module::heisenberg(30);
  auto F = Module::fock(H, Scalar(0), 8);
  auto h = regrep::induce(*H, regrep::AnModule{F.get(), 0}, 5, opt);
  c.record(h.dims == std::vector<std::size_t>{1, 1, 2, 3, 5, 7}, "Heisenberg induced dims");
  c.record(h.below_lowest_vanishes(), "Heisenberg levels below the lowest");
  return c;
}

Check associativity_and_generation(const Options& o) {
  Check c = named("double actions and generated submodules");
  Timer t(c);
  auto rng = make_rng(o, 12);
  // the expansion passes through u_j v with j far below p, so keep room above
  auto H = Module::heisenberg(24);
  auto Vir = Module::virasoro(generic_rational(rng), 24);
  auto F = Module::fock(H, generic_rational(rng), 20);
  auto M = Module::verma(Vir, generic_rational(rng), 20);
  std::vector<const Module*> mods{H.get(), Vir.get(), F.get(), M.get()};
  std::uniform_int_distribution<long> mode(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const Module& W = *mods[static_cast<std::size_t>(trial) % mods.size()];
    const Module& V = W.voa();
    State u = random_state(V, rng, 0, 3), v = random_state(V, rng, 0, 3), w = random_state(W, rng, 0, 3);
    const long p = mode(rng), q = mode(rng);
    const long lw = w.max_level();
    const long k = u.max_level() + lw + trial % 2;  // any k past the first vanishing mode works
    const long s = std::max(0L, v.max_level() + lw - 1 - q);
    c.record(lassoc_expand(W, u, p, v, q, w, k, s) == W.mode(u, p, W.mode(v, q, w)),
             "expansion on " + W.name() + ", u=" + show(u) + ", v=" + show(v));
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Module& W = *mods[static_cast<std::size_t>(trial) % mods.size()];
    State seed = random_state(W, rng, 0, 1);
    // single mode images reach level K only with states of weight up to about 2K
    auto g = regrep::generated_submodule(W, {seed}, o.levels, 2 * o.levels);
    c.record(g.dims == g.second_pass, "second pass grows the span on " + W.name());
  }
  return c;
}

Check theta_involution(const Options& o) {
  Check c = named("theta is an involution");
  Timer t(c);
  auto rng = make_rng(o, 13);
  Realizations r(rng, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const Module& V = trial % 2 ? *r.vir : *r.heis;
    State v = random_state(V, rng, 0, 5);
    c.record(theta_of(theta_of(v, o), o) == v, "theta twice on " + show(v));
  }
  return c;
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "expansion maps, multiplier identities, reconstruction", expansion_identities},
      {2, "A_n(V) algebra laws", algebra_laws},
      {3, "right product and commutator congruences", right_action_and_commutator},
      {4, "projection A_1(V) -> A_0(V) is multiplicative", projection_homomorphism},
      {5, "translation identity as an exact vector identity",
       [](const Options& o) {
         Options literal = o;
         literal.literal = true;
         return translation_identity(literal);
       }},
      {6, "left/right commutativity and Jacobi windows", commutativity_and_jacobi},
      {7, "certification of A'_n(W) homomorphisms", certification},
      {8, "o-operator routes and sigma intertwining", bimodule_routes_and_sigma},
      {9, "deformed actions", deformation},
      {10, "Omega_n spaces and nilpotency",
       [](const Options& o) {
         Options literal = o;
         literal.literal = true;
         return omega_spaces(literal);
       }},
      {11, "induced modules", induction},
      {12, "double-action expansion and generated submodules", associativity_and_generation},
  };
  return list;
}

Report run_suite(const std::string& suite, const Options& options) {
  using Fn = Check (*)(const Options&);
  std::vector<Fn> fns;
  if (suite == "formal" || suite == "all") fns.push_back(expansion_identities);
  if (suite == "anv" || suite == "all")
    for (Fn f : {algebra_laws, right_action_and_commutator, projection_homomorphism, translation_identity})
      fns.push_back(f);
  if (suite == "regrep" || suite == "all")
    for (Fn f : {theta_involution, commutativity_and_jacobi, certification, bimodule_routes_and_sigma, deformation,
                 omega_spaces, induction, associativity_and_generation})
      fns.push_back(f);
  if (fns.empty()) throw std::invalid_argument("unknown suite '" + suite + "' (formal, anv, regrep, all)");
  Report report;
  for (Fn f : fns) {
    report.checks.push_back(f(options));
    const Check& c = report.checks.back();
    if (c.inconclusive > 0)
      report.warnings.push_back(c.name + ": " + std::to_string(c.inconclusive) +
                                " congruences inconclusive at the cutoffs tried");
  }
  return report;
}

}  // namespace voaforge::verify
