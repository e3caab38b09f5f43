#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "voaforge/linalg.hpp"
#include "voaforge/voa.hpp"

namespace voaforge::anv {

/// Res_x x^{-a} (1+x)^b Y(v,x) w = sum_{i>=0} C(b,i) v_{i-a} w, linear in v
/// (b is taken per homogeneous component as b_offset + wt).
State residue_product(const Module& W, const State& v, const State& w, long a, long b_offset);

/// v o_n w = Res_x x^{-2n-2} (1+x)^{wt v + n} Y(v,x) w.
State circ(const Module& W, const State& v, const State& w, long n);
/// Res_x x^{-2n-2-r} (1+x)^{wt v + n + s} Y(v,x) w, for r >= s >= 0.
State generalized(const Module& W, const State& v, const State& w, long n, long r, long s);
/// Left product v *_n w = sum_m C(-n-1,m) Res_x x^{-n-m-1} (1+x)^{wt v + n} Y(v,x) w.
State star(const Module& W, const State& v, const State& w, long n);
/// Right product w *_n v = sum_m C(-n-1,m) (-1)^{n-m} Res_x x^{-n-m-1} (1+x)^{wt v + m - 1} Y(v,x) w.
State star_right(const Module& W, const State& w, const State& v, long n);
/// Res_x (1+x)^{wt v - 1} Y(v,x) w.
State commutator_term(const Module& W, const State& v, const State& w);
/// (L(-1) + L(0)) w.
State translation(const Module& W, const State& w);

/// Which subspace a context spans.
enum class Variant {
  OnV,     ///< O_n(V): circ products and (L(-1)+L(0))V, on the VOA itself
  OprimeW, ///< O'_n(W): circ products (plus their generalized forms) on a module
  OnW      ///< O_n(W) = O'_n(W) + (L(-1)+L(0))W
};
std::string to_string(Variant v);

/// One spanning element, with the data that produced it.
struct SpanningElement {
  enum class Kind { Circ, Generalized, Translation };
  Kind kind;
  Index u;   ///< VOA basis id (unused for Translation)
  Index w;   ///< basis id in the acted-on module
  long r = 0;
  long s = 0;
  long top_level;  ///< highest level the element can reach
  std::string describe(const Module& W) const;
};

/// Span of the spanning elements of O_n(V), O'_n(W) or O_n(W) whose top
/// level is at most the cutoff D. Membership is one-sided: a member verdict
/// is a proof, a non-member verdict only says "not found at this cutoff".
/// Columns are indexed from the top level down, so echelon pivots sit at high
/// levels and reduction produces low-level normal forms.
class AnContext {
 public:
  AnContext(const Module& W, long n, long cutoff, Variant variant, long slack = 4, bool parallel = true);

  const Module& module() const { return *W_; }
  long n() const { return n_; }
  long cutoff() const { return D_; }
  Variant variant() const { return variant_; }
  long slack() const { return slack_; }
  std::size_t rank() const { return span_.rank(); }
  /// dim W_{<= level} minus dim(span within W_{<= level}).
  std::size_t quotient_dimension(long level) const;

  /// Residual of x after elimination; zero iff x is in the span.
  State normal_form(const State& x) const;
  bool contains(const State& x) const { return normal_form(x).is_zero(); }
  /// Basis ids at level <= max_level that are not pivots: representatives of the quotient.
  std::vector<Index> representatives(long max_level) const;

  const std::vector<SpanningElement>& elements() const { return elements_; }
  const std::vector<State>& element_values() const { return values_; }

 private:
  SparseVector to_columns(const State& x) const;
  State from_columns(const SparseVector& c) const;

  const Module* W_;
  long n_, D_;
  Variant variant_;
  long slack_;
  Index N_;
  std::vector<SpanningElement> elements_;
  std::vector<State> values_;
  linalg::SpanHandle span_;
};

/// Shared contexts keyed by (module, n, cutoff, variant, slack).
class ContextCache {
 public:
  std::shared_ptr<const AnContext> get(const Module& W, long n, long cutoff, Variant variant, long slack = 4);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::tuple<const Module*, long, long, int, long>, std::shared_ptr<const AnContext>> contexts_;
};

struct Congruence {
  bool congruent = false;  ///< false means inconclusive at every cutoff tried
  long cutoff = 0;         ///< cutoff that proved it, or the largest one tried
};

/// Is x - y in the span? Starts from max(start, level of x - y) and retries
/// with the cutoff raised by 2 up to max_cutoff (bounded by the module).
Congruence congruent(const State& x, const State& y, ContextCache& cache, long n, Variant variant, long start_cutoff,
                     long max_cutoff, long slack = 4);

/// Product table of A_n(V) over representatives of weight <= D.
struct AnTable {
  const Module* V = nullptr;
  long n = 0;
  long cutoff = 0;           ///< D: representatives have weight <= D
  long internal_cutoff = 0;  ///< cutoff of the context used for reductions
  std::vector<Index> basis;  ///< representative basis ids
  /// products[i][j]: coefficients of basis[i] *_n basis[j] on the representatives.
  std::vector<std::vector<SparseVector>> products;
  /// Products whose normal form reached a level above D, with that level.
  std::vector<std::tuple<std::size_t, std::size_t, long>> overflow;
  std::vector<SparseVector> theta;  ///< theta(basis[i]) on the representatives
  std::size_t identity = 0;
  std::optional<std::size_t> omega;  ///< position of the conformal vector when it is a representative
  std::vector<std::size_t> filtration;  ///< cumulative quotient dimension per level 0..D
  SparseVector omega_class;  ///< normal form of omega on the representatives

  /// Coefficients of a state's class on the representatives; throws if its
  /// normal form leaves the representative set.
  SparseVector coordinates(const State& x, const AnContext& ctx) const;
};

/// Thrown when a table or reduction needs a larger cutoff.
class CutoffInsufficient : public std::runtime_error {
 public:
  CutoffInsufficient(const std::string& what, long required) : std::runtime_error(what), required_(required) {}
  long required() const { return required_; }

 private:
  long required_;
};

AnTable an_table(const Module& V, long n, long D, ContextCache& cache);
const AnContext& table_context(const AnTable& t, ContextCache& cache);

/// Reduce a state modulo the O_n(V) span of a context for the smaller n:
/// realizes the surjection A_{n+1}(V) -> A_n(V) on representatives.
State psi_reduce(const State& x, const AnContext& lower);

enum class Side { Left, Right };
/// Class of a *_n w (left) or w *_n a (right) in A'_n(W) or A_n(W).
State bimodule_act(const State& a, const State& w, Side side, const AnContext& ctx);

}  // namespace voaforge::anv
