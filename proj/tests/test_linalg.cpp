#include <doctest.h>

#include <random>

#include "voaforge/linalg.hpp"

using namespace voaforge;
using namespace voaforge::linalg;

namespace {

SparseVector vec(std::initializer_list<std::pair<Index, long>> entries) {
  std::vector<SparseVector::Entry> e;
  for (auto [i, c] : entries) e.emplace_back(i, Scalar(c));
  return SparseVector::from_entries(e);
}

SparseVector random_vector(std::mt19937_64& rng, Index dim, double density) {
  std::uniform_real_distribution<double> coin(0, 1);
  std::vector<SparseVector::Entry> e;
  for (Index i = 0; i < dim; ++i)
    if (coin(rng) < density) e.emplace_back(i, random_rational(rng, 20));
  return SparseVector::from_entries(e);
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/6") == Scalar(1, 2));
  CHECK(parse_rational("-7") == Scalar(-7));
  CHECK(to_string(Scalar(-3, 10)) == "-3/10");
  CHECK(to_string(Scalar(4)) == "4");
  CHECK_THROWS_AS(parse_rational("pi"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK(binomial(-1, 3) == -1);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(Scalar(1, 2), 2) == Scalar(-1, 8));
  CHECK(power(Scalar(2, 3), -2) == Scalar(9, 4));
}

TEST_CASE("sparse vectors drop zeros") {
  SparseVector a = vec({{0, 1}, {2, 3}});
  SparseVector b = vec({{2, -3}, {1, 1}});
  SparseVector s = a + b;
  CHECK(s.size() == 2);
  CHECK(s.get(2) == 0);
  CHECK((a - a).empty());
  CHECK((Scalar(0) * a).empty());
}

TEST_CASE("rref examples") {
  CHECK(rref({}, 4).rank() == 0);
  SpanHandle h = rref({vec({{1, 1}, {2, 1}}), vec({{2, 1}})}, 4);
  CHECK(h.rank() == 2);
  CHECK(h.pivots() == std::vector<Index>{1, 2});
  CHECK(h.row(1) == vec({{1, 1}}));
}

TEST_CASE("rank of three random vectors in dimension two matches a 2x2 minor") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SparseVector> rows;
    for (int i = 0; i < 3; ++i) rows.push_back(SparseVector::from_dense({random_rational(rng), random_rational(rng)}));
    bool some_minor_nonzero = false;
    bool any_nonzero = false;
    for (int i = 0; i < 3; ++i) {
      if (!rows[i].empty()) any_nonzero = true;
      for (int j = i + 1; j < 3; ++j) {
        Scalar det = rows[i].get(0) * rows[j].get(1) - rows[i].get(1) * rows[j].get(0);
        if (det != 0) some_minor_nonzero = true;
      }
    }
    std::size_t expected = some_minor_nonzero ? 2 : (any_nonzero ? 1 : 0);
    CHECK(rref(rows, 2).rank() == expected);
  }
}

TEST_CASE("in_span examples") {
  SpanHandle h = rref({vec({{1, 1}, {2, 1}}), vec({{2, 1}})}, 4, true);
  Membership zero = h.in_span(SparseVector());
  CHECK(zero.member);
  CHECK(zero.coefficients->empty());
  Membership m = h.in_span(vec({{1, 1}}));
  REQUIRE(m.member);
  CHECK(*m.coefficients == vec({{0, 1}, {1, -1}}));
  SpanHandle e12 = rref({vec({{1, 1}}), vec({{2, 1}})}, 4);
  Membership n = e12.in_span(vec({{3, 1}}));
  CHECK_FALSE(n.member);
  CHECK(n.witness == 3);
  CHECK_THROWS_AS(e12.in_span(vec({{9, 1}})), IndexMismatch);
}

TEST_CASE("kernel examples") {
  std::vector<SparseVector> id = {vec({{0, 1}}), vec({{1, 1}}), vec({{2, 1}})};
  CHECK(kernel_basis(id, 3).empty());
  CHECK(kernel_basis({}, 3).size() == 3);
  auto k = kernel_basis({vec({{0, 1}, {1, 1}})}, 2);
  REQUIRE(k.size() == 1);
  CHECK(k[0] == vec({{0, 1}, {1, -1}}));
}

TEST_CASE("linear algebra invariants on random systems") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Index dim = 4 + static_cast<Index>(trial % 9);
    std::vector<SparseVector> rows;
    int count = 2 + trial % 7;
    for (int i = 0; i < count; ++i) rows.push_back(random_vector(rng, dim, 0.4));
    // make some rows dependent
    if (count > 3) rows.push_back(rows[0] + Scalar(3) * rows[1]);
    SpanHandle h = rref(rows, dim, true);
    for (std::size_t g = 0; g < rows.size(); ++g) {
      Membership m = h.in_span(rows[g]);
      REQUIRE(m.member);
      SparseVector rebuilt;
      for (const auto& [i, c] : *m.coefficients) rebuilt.add_scaled(rows[static_cast<std::size_t>(i)], c);
      CHECK(rebuilt == rows[g]);
    }
    auto kernel = kernel_basis(rows, dim);
    CHECK(h.rank() + kernel.size() == static_cast<std::size_t>(dim));
    for (const auto& kv : kernel)
      for (const auto& r : rows) {
        Scalar dot(0);
        for (const auto& [i, c] : r) dot += c * kv.get(i);
        CHECK(dot == 0);
      }
    CHECK(h.rank() <= rows.size());
  }
}

TEST_CASE("parallel elimination reproduces the serial RREF") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Index dim = 40;
    std::vector<SparseVector> rows;
    for (int i = 0; i < 60; ++i) rows.push_back(random_vector(rng, dim, 0.15));
    SpanHandle a = rref(rows, dim);
    SpanHandle b = rref_parallel(rows, dim, 7);
    CHECK(a.rank() == b.rank());
    CHECK(a.pivots() == b.pivots());
    CHECK(a.rows() == b.rows());
  }
}
