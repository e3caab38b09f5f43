#include <doctest.h>

#include <random>

#include "voaforge/notation.hpp"
#include "voaforge/voa.hpp"

using namespace voaforge;

namespace {

// Brute-force partition counting, independent of the enumerator in the library.
std::size_t count_partitions(int n, int max_part, int min_part) {
  if (n == 0) return 1;
  std::size_t total = 0;
  for (int p = min_part; p <= std::min(n, max_part); ++p) total += count_partitions(n - p, p, min_part);
  return total;
}

State random_homogeneous(const Module& m, std::mt19937_64& rng, long max_level) {
  std::uniform_int_distribution<long> lv(0, max_level);
  for (int attempt = 0; attempt < 50; ++attempt) {
    long l = lv(rng);
    if (m.dim(l) == 0) continue;
    State s = m.zero();
    for (Index id = m.level_begin(l); id < m.level_end(l); ++id) s += m.basis(id, random_rational(rng, 5));
    if (!s.is_zero()) return s;
  }
  return m.lowest();
}

// L(k) on a Fock module by the quadratic formula 1/2 sum_j :alpha(j) alpha(k-j):.
State sugawara(const Module& m, long k, const State& w) {
  State out = m.zero();
  long top = w.max_level() + std::abs(k) + 2;
  for (long j = -top; j <= top; ++j) {
    long a = j, b = k - j;
    if (a > b) continue;  // normal order: larger mode acts first
    Scalar c = (a == b) ? Scalar(1, 2) : Scalar(1);
    out += c * m.generator(a, m.generator(b, w));
  }
  return out;
}

struct Realizations {
  std::shared_ptr<Module> heis = Module::heisenberg(20);
  std::shared_ptr<Module> fock = Module::fock(heis, Scalar(3, 2), 20);
  std::shared_ptr<Module> vir = Module::virasoro(Scalar(1, 2), 20);
  std::shared_ptr<Module> verma = Module::verma(vir, Scalar(1, 16), 20);
};

}  // namespace

TEST_CASE("graded dimensions are partition counts") {
  auto heis = Module::heisenberg(10);
  auto vir = Module::virasoro(Scalar(1, 2), 10);
  auto verma = Module::verma(vir, Scalar(2, 3), 10);
  for (int l = 0; l <= 10; ++l) {
    CHECK(heis->dim(l) == count_partitions(l, l, 1));
    CHECK(verma->dim(l) == count_partitions(l, l, 1));
    CHECK(vir->dim(l) == count_partitions(l, l, 2));
  }
  std::vector<std::size_t> hd, vd;
  for (int l = 0; l <= 5; ++l) hd.push_back(heis->dim(l));
  for (int l = 0; l <= 6; ++l) vd.push_back(vir->dim(l));
  CHECK(hd == std::vector<std::size_t>{1, 1, 2, 3, 5, 7});
  CHECK(vd == std::vector<std::size_t>{1, 0, 1, 1, 2, 2, 4});
  CHECK(partition_counts(10, 2)[6] == 4);
  CHECK_THROWS_AS(heis->dim(11), CutoffError);
}

TEST_CASE("vacuum and conformal vector") {
  Realizations r;
  CHECK(r.vir->L(-1, r.vir->vacuum()).is_zero());
  CHECK(r.heis->L(-1, r.heis->vacuum()).is_zero());
  CHECK(r.vir->omega().weight() == 2);
  CHECK(r.heis->omega().weight() == 2);
  // L(0) acts by weight
  State w = parse_state("a(-3)a(-1)|l>", *r.fock);
  CHECK(r.fock->L(0, w) == (Scalar(9, 8) + 4) * w);
}

TEST_CASE("mode action examples") {
  Realizations r;
  std::mt19937_64 rng(1);
  for (const Module* m : {r.heis.get(), r.fock.get(), r.vir.get(), r.verma.get()}) {
    State w = random_homogeneous(*m, rng, 4);
    for (long k = -3; k <= 3; ++k) CHECK(m->mode(m->voa().vacuum(), k, w) == (k == -1 ? w : m->zero()));
  }
  State omega = r.vir->omega();
  CHECK(r.vir->mode(omega, 3, omega) == (r.vir->central_charge() / 2) * r.vir->vacuum());
  State a = r.heis->heisenberg_generator();
  CHECK(r.heis->mode(a, 0, a).is_zero());
  CHECK(r.heis->mode(a, -1, a) == parse_state("a(-1)^2|0>", *r.heis));
  CHECK(r.heis->mode(a, 1, a) == r.heis->vacuum());
  CHECK_THROWS_AS(r.verma->mode(r.verma->lowest(), 0, r.verma->lowest()), RealizationMismatch);
}

TEST_CASE("modes of the generating fields match the explicit generator rules") {
  Realizations r;
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    State w = random_homogeneous(*r.fock, rng, 5);
    long k = static_cast<long>(trial % 7) - 3;
    CHECK(r.fock->mode(r.heis->heisenberg_generator(), k, w) == r.fock->generator(k, w));
    CHECK(r.fock->L(k, w) == sugawara(*r.fock, k, w));
    State x = random_homogeneous(*r.verma, rng, 5);
    CHECK(r.verma->mode(r.vir->omega(), k + 1, x) == r.verma->generator(k, x));
    State y = random_homogeneous(*r.vir, rng, 6);
    CHECK(r.vir->mode(r.vir->omega(), k + 1, y) == r.vir->generator(k, y));
  }
}

TEST_CASE("generator brackets") {
  Realizations r;
  std::mt19937_64 rng(3);
  const Scalar c = r.verma->central_charge();
  for (int trial = 0; trial < 30; ++trial) {
    long m = static_cast<long>(trial % 7) - 3, n = static_cast<long>((trial * 5) % 7) - 3;
    State w = random_homogeneous(*r.verma, rng, 5);
    State lhs = r.verma->generator(m, r.verma->generator(n, w)) - r.verma->generator(n, r.verma->generator(m, w));
    State rhs = Scalar(m - n) * r.verma->generator(m + n, w);
    if (m + n == 0) rhs += c * fraction(m * m * m - m, 12) * w;
    CHECK(lhs == rhs);
    State f = random_homogeneous(*r.fock, rng, 5);
    State fl = r.fock->generator(m, r.fock->generator(n, f)) - r.fock->generator(n, r.fock->generator(m, f));
    CHECK(fl == (m + n == 0 ? Scalar(m) * f : r.fock->zero()));
  }
}

TEST_CASE("grading law and creation") {
  Realizations r;
  std::mt19937_64 rng(4);
  for (const Module* m : {r.heis.get(), r.fock.get(), r.vir.get(), r.verma.get()}) {
    for (int trial = 0; trial < 10; ++trial) {
      State v = random_homogeneous(m->voa(), rng, 4);
      State w = random_homogeneous(*m, rng, 4);
      for (long k = -2; k <= 4; ++k) {
        State x = m->mode(v, k, w);
        if (!x.is_zero()) {
          CHECK(x.is_homogeneous());
          CHECK(x.weight() == v.weight() + w.weight() - k - 1);
        }
      }
    }
  }
  for (const Module* v : {r.heis.get(), r.vir.get()}) {
    for (int trial = 0; trial < 10; ++trial) {
      State s = random_homogeneous(*v, rng, 5);
      auto y = y_window(*v, s, v->vacuum(), -6, 0);
      CHECK(y.coefficient(0) == s);
      for (long p = -6; p < 0; ++p) CHECK(y.coefficient(p).is_zero());
    }
  }
  auto y1 = y_window(*r.fock, r.heis->vacuum(), r.fock->lowest(), -2, 2);
  CHECK(y1.terms().size() == 1);
  CHECK(y1.coefficient(0) == r.fock->lowest());
  auto yo = y_window(*r.vir, r.vir->omega(), r.vir->vacuum(), 0, 0);
  CHECK(yo.coefficient(0) == r.vir->omega());
  State a = r.heis->heisenberg_generator();
  auto ya = y_window(*r.heis, a, a, -2, 0);
  CHECK(ya.coefficient(0) == parse_state("a(-1)^2|0>", *r.heis));
  CHECK(ya.coefficient(-2) == r.heis->vacuum());
}

TEST_CASE("Borcherds commutator formula on random samples") {
  Realizations r;
  std::mt19937_64 rng(5);
  for (const Module* m : {r.heis.get(), r.fock.get(), r.vir.get(), r.verma.get()}) {
    const Module& V = m->voa();
    std::uniform_int_distribution<long> mode(-2, 3);
    for (int trial = 0; trial < 50; ++trial) {
      State v = random_homogeneous(V, rng, 4);
      State u = random_homogeneous(V, rng, 4);
      State w = random_homogeneous(*m, rng, 3);
      long p = mode(rng), q = mode(rng);
      State lhs = m->mode(v, p, m->mode(u, q, w)) - m->mode(u, q, m->mode(v, p, w));
      State rhs = m->zero();
      for (long i = 0; i <= v.max_level() + u.max_level(); ++i) rhs += binomial(p, i) * m->mode(V.mode(v, i, u), p + q - i, w);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("opposite vertex operator") {
  Realizations r;
  CHECK(y_o_window(*r.fock, r.heis->vacuum(), r.fock->lowest(), -3, 3).coefficient(0) == r.fock->lowest());
  State a = r.heis->heisenberg_generator();
  // -sum_{m<=-1} a_m 1 x^{m-1}: an infinite series whose top term is -a x^{-2}
  auto ya = y_o_window(*r.heis, a, r.heis->vacuum(), -6, 2);
  CHECK(ya.coefficient(-2) == -a);
  for (long p = -1; p <= 2; ++p) CHECK(ya.coefficient(p).is_zero());
  for (long p = -6; p <= -2; ++p) CHECK(ya.coefficient(p) == -r.heis->generator(p + 1, r.heis->vacuum()));
  auto yw = y_o_window(*r.vir, r.vir->omega(), r.vir->vacuum(), -6, -2);
  CHECK(yw.coefficient(-4) == r.vir->omega());
}

TEST_CASE("exponential of L(1) and theta") {
  Realizations r;
  const Module& V = *r.vir;
  CHECK(exp_L1(V.vacuum(), Scalar(7)) == V.vacuum());
  CHECK(exp_L1(V.omega(), Scalar(1)) == V.omega());
  State l3 = parse_state("L(-3)|0>", V);
  CHECK(exp_L1(l3, Scalar(1)) == parse_state("L(-3)|0> + 4 L(-2)|0>", V));
  CHECK(theta(V.vacuum()) == V.vacuum());
  CHECK(theta(V.omega()) == V.omega());
  CHECK(theta(l3) == parse_state("-L(-3)|0> - 4 L(-2)|0>", V));
  for (const Module* m : {r.heis.get(), r.vir.get()})
    for (long l = 0; l <= 8; ++l)
      for (Index id = m->level_begin(l); id < m->level_end(l); ++id) CHECK(theta(theta(m->basis(id))) == m->basis(id));
  CHECK_THROWS_AS(theta(r.verma->lowest()), WeightError);
}

TEST_CASE("conjugating e^{xL(1)} by x1^{L(0)}") {
  Realizations r;
  std::mt19937_64 rng(6);
  for (const Module* m : {r.fock.get(), r.verma.get(), r.vir.get()}) {
    for (int trial = 0; trial < 10; ++trial) {
      State v = random_homogeneous(*m, rng, 6) + random_homogeneous(*m, rng, 6);
      Scalar x = random_rational(rng, 9), x1 = random_rational(rng, 9, true);
      State lhs = scale_by_level(exp_L1(scale_by_level(v, x1), x), 1 / x1);
      CHECK(lhs == exp_L1(v, x * x1));
    }
  }
}

TEST_CASE("associativity expansion") {
  Realizations r;
  State a = r.heis->heisenberg_generator();
  State one = r.heis->vacuum();
  CHECK(lassoc_expand(*r.heis, a, -1, a, -1, one, 1, 1) == parse_state("a(-1)^2|0>", *r.heis));
  State om = r.vir->omega();
  State vac = r.vir->vacuum();
  CHECK(r.vir->mode(om, 0, r.vir->mode(om, -1, vac)) == parse_state("L(-3)|0>", *r.vir));
  CHECK(lassoc_expand(*r.vir, om, 0, om, -1, vac, 0, 0) == parse_state("L(-3)|0>", *r.vir));
  CHECK_THROWS_AS(lassoc_expand(*r.heis, a, -1, a, -1, parse_state("a(-1)|0>", *r.heis), 0, 0), PreconditionError);

  std::mt19937_64 rng(7);
  int checked = 0;
  for (const Module* m : {r.heis.get(), r.fock.get(), r.vir.get(), r.verma.get()}) {
    const Module& V = m->voa();
    std::uniform_int_distribution<long> mode(-2, 2);
    for (int trial = 0; trial < 50; ++trial) {
      State u = random_homogeneous(V, rng, 3);
      State v = random_homogeneous(V, rng, 3);
      State w = random_homogeneous(*m, rng, 3);
      long p = mode(rng), q = mode(rng);
      // smallest k with x^k Y(u,x)w regular, smallest s with x^{s+1+q} Y(v,x)w regular
      long k = u.max_level() + w.max_level() + 1;
      while (k > -10 && m->mode(u, k - 1, w).is_zero()) --k;
      long s = v.max_level() + w.max_level() - q;
      while (s > 0 && m->mode(v, s + q, w).is_zero()) --s;
      if (s < 0) s = 0;
      CHECK(lassoc_expand(*m, u, p, v, q, w, k, s) == m->mode(u, p, m->mode(v, q, w)));
      ++checked;
    }
  }
  CHECK(checked == 200);
}

TEST_CASE("state notation round trips") {
  Realizations r;
  State omega = parse_state("1/2 a(-1)^2|0>", *r.heis);
  CHECK(omega == r.heis->omega());
  State two = parse_state("L(-2)L(-2)|0> - 3/10 L(-4)|0>", *r.vir);
  CHECK(two.is_homogeneous());
  CHECK(two.weight() == 4);
  CHECK(format_state(two) == "-3/10 L(-4)|0> + L(-2)^2|0>");
  CHECK(parse_state(format_state(two), *r.vir) == two);
  CHECK(format_state(r.vir->zero()) == "0");
  CHECK(parse_state("0", *r.vir).is_zero());
  CHECK(parse_state("a(1)a(-1)|l>", *r.fock) == r.fock->lowest());
  CHECK(parse_state("a(0)|l>", *r.fock) == Scalar(3, 2) * r.fock->lowest());
  CHECK(format_state(parse_state("2|h>", *r.verma)) == "2 |h>");
  CHECK_THROWS_AS(parse_state("L(-2)|0>", *r.heis), ParseError);
  CHECK_THROWS_AS(parse_state("a(-1)|h>", *r.fock), ParseError);
  CHECK_THROWS_AS(parse_state("L(-2)|0", *r.vir), ParseError);
  CHECK_THROWS_AS(parse_state("L(-2)|0> +", *r.vir), ParseError);
  std::mt19937_64 rng(8);
  for (const Module* m : {r.heis.get(), r.fock.get(), r.vir.get(), r.verma.get()}) {
    for (int trial = 0; trial < 20; ++trial) {
      State s = random_homogeneous(*m, rng, 6) + random_homogeneous(*m, rng, 6);
      std::string text = format_state(s);
      CHECK(parse_state(text, *m) == s);
      CHECK(format_state(parse_state(text, *m)) == text);
    }
  }
}
