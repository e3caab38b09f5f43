#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "voaforge/formal.hpp"
#include "voaforge/linalg.hpp"
#include "voaforge/rational.hpp"

namespace voaforge {

using linalg::Index;
using linalg::SparseVector;

/// A requested weight space lies above the module's precomputed level range.
class CutoffError : public std::runtime_error {
 public:
  CutoffError(const std::string& what, long level) : std::runtime_error(what), level_(level) {}
  long level() const { return level_; }

 private:
  long level_;
};

class RealizationMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class WeightError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an expansion formula does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Algebra { Heisenberg, Virasoro };
/// Vacuum: the VOA acting on itself. Fock and Verma are lowest-weight modules.
enum class ModuleKind { Vacuum, Fock, Verma };

/// Descending list of positive parts.
using Partition = std::vector<int>;

class Module;

/// Finite linear combination of basis states of one module. A default
/// constructed State is the zero vector of no particular module and mixes
/// with anything.
struct State {
  const Module* module = nullptr;
  SparseVector coeffs;

  State() = default;
  State(const Module* m, SparseVector c) : module(m), coeffs(std::move(c)) {}

  bool empty() const { return coeffs.empty(); }
  bool is_zero() const { return coeffs.empty(); }

  State operator+(const State& o) const;
  State operator-(const State& o) const;
  State operator-() const;
  State& operator+=(const State& o);
  State& operator-=(const State& o);
  bool operator==(const State& o) const;
  bool operator!=(const State& o) const { return !(*this == o); }

  /// Is every term of the same weight?
  bool is_homogeneous() const;
  /// Weight of a nonzero homogeneous state.
  Scalar weight() const;
  /// Highest level with a nonzero coefficient (-1 for zero).
  long max_level() const;
  /// Component of the given level.
  State level_component(long level) const;
  /// Levels carrying nonzero components, ascending.
  std::vector<long> levels() const;
};

State operator*(const Scalar& c, const State& s);

/// Concrete weight-graded realization: the rank-one Heisenberg VOA or the
/// universal Virasoro VOA acting on itself, or a Fock / Verma module for one
/// of those. The basis is indexed by partitions and enumerated up to
/// max_level; ids ascend with level. Generator modes act by explicit rules,
/// general modes v_m through the iterate recursion, both memoized.
class Module {
 public:
  static std::shared_ptr<Module> heisenberg(int max_level);
  static std::shared_ptr<Module> virasoro(const Scalar& c, int max_level);
  /// Fock module of charge lambda over a Heisenberg VOA.
  static std::shared_ptr<Module> fock(std::shared_ptr<const Module> voa, const Scalar& lambda, int max_level);
  /// Verma module of lowest weight h over a Virasoro VOA.
  static std::shared_ptr<Module> verma(std::shared_ptr<const Module> voa, const Scalar& h, int max_level);

  Algebra algebra() const { return algebra_; }
  ModuleKind kind() const { return kind_; }
  bool is_voa() const { return kind_ == ModuleKind::Vacuum; }
  const Module& voa() const { return is_voa() ? *this : *voa_; }
  /// Central charge (1 for Heisenberg).
  const Scalar& central_charge() const { return c_; }
  /// h for Verma, lambda for Fock, 0 for the vacuum module.
  const Scalar& parameter() const { return param_; }
  /// Weight of the lowest vector.
  const Scalar& base_weight() const { return base_weight_; }
  int max_level() const { return max_level_; }
  int min_part() const { return min_part_; }
  std::string name() const;

  std::size_t size() const { return partitions_.size(); }
  Index level_begin(long level) const;
  Index level_end(long level) const;
  std::size_t dim(long level) const;
  const Partition& partition(Index id) const;
  long level(Index id) const { return level_of_[static_cast<std::size_t>(id)]; }
  Scalar weight(Index id) const { return base_weight_ + level(id); }
  /// Throws std::invalid_argument for a partition violating the part rules.
  Index id_of(const Partition& p) const;
  bool contains(const Partition& p) const;

  State zero() const { return State(this, SparseVector()); }
  State basis(Index id, const Scalar& c = Scalar(1)) const;
  State lowest() const { return basis(0); }
  /// Vacuum of the VOA (only on the vacuum module).
  State vacuum() const;
  /// The conformal vector (only on the vacuum module).
  State omega() const;
  /// alpha(-1)1 on a Heisenberg vacuum module.
  State heisenberg_generator() const;

  /// alpha(k) or L(k), according to the algebra.
  State generator(long k, const State& w) const;
  /// L(k) for either algebra (on Heisenberg through omega).
  State L(long k, const State& w) const;
  /// v_m w for v in the VOA of this module.
  State mode(const State& v, long m, const State& w) const;
  SparseVector mode_basis(Index vid, long m, Index wid) const;

  /// Number of memoized entries (mode action plus generator action).
  std::size_t memo_size() const;

  void check_state(const State& s, const char* what) const;

 private:
  Module() = default;
  void enumerate();
  void require_level(long level, const char* what) const;
  SparseVector generator_basis(long k, Index wid) const;
  SparseVector generator_vector(long k, const SparseVector& w) const;
  SparseVector virasoro_basis(long k, Index wid) const;
  SparseVector heisenberg_basis(long k, Index wid) const;
  SparseVector mode_vector(Index vid, long m, const SparseVector& w) const;
  SparseVector mode_basis_uncached(Index vid, long m, Index wid) const;
  Index prepend(long part, Index id) const;

  Algebra algebra_ = Algebra::Heisenberg;
  ModuleKind kind_ = ModuleKind::Vacuum;
  std::shared_ptr<const Module> voa_;
  Scalar c_{1};
  Scalar param_{0};
  Scalar base_weight_{0};
  int max_level_ = 0;
  int min_part_ = 1;

  std::vector<Partition> partitions_;
  std::vector<long> level_of_;
  std::vector<Index> level_start_;
  std::map<Partition, Index> index_;

  struct ModeKey {
    Index v;
    long m;
    Index w;
    bool operator==(const ModeKey& o) const { return v == o.v && m == o.m && w == o.w; }
  };
  struct ModeKeyHash {
    std::size_t operator()(const ModeKey& k) const {
      std::size_t h = std::hash<Index>()(k.v);
      h = h * 1000003u ^ std::hash<long>()(k.m);
      return h * 1000003u ^ std::hash<Index>()(k.w);
    }
  };
  mutable std::shared_mutex mode_mutex_;
  mutable std::unordered_map<ModeKey, SparseVector, ModeKeyHash> mode_memo_;
  mutable std::shared_mutex gen_mutex_;
  mutable std::unordered_map<ModeKey, SparseVector, ModeKeyHash> gen_memo_;
};

/// Coefficients of Y(v,x)w for powers lo..hi of x: x^p carries v_{-p-1}w.
formal::Laurent<State> y_window(const Module& w_module, const State& v, const State& w, long lo, long hi);
/// Y(e^{xL(1)}(-x^{-2})^{L(0)}v, x^{-1})w restricted to powers lo..hi; v in the VOA.
formal::Laurent<State> y_o_window(const Module& w_module, const State& v, const State& w, long lo, long hi);
/// Coefficient of x^p in Y(e^{xL(1)}(-x^{-2})^{L(0)}v, x^{-1})w.
State y_o_coefficient(const Module& w_module, const State& v, const State& w, long p);

/// sum_i t^i L(1)^i v / i!, on v's own module.
State exp_L1(const State& v, const Scalar& t);
/// e^{L(1)}(-1)^{L(0)} v for v in a VOA.
State theta(const State& v);
/// x1^{L(0)} v (exponents are the integer levels; the base weight is left out).
State scale_by_level(const State& v, const Scalar& x1);

/// sum_{i=0}^{s} sum_{j>=0} C(p-k,i) C(k,j) (u_{p-k-i+j} v)_{q+k+i-j} w, after verifying
/// u_{k+m} w = 0 and v_{s+q+1+m} w = 0 for all m >= 0.
State lassoc_expand(const Module& w_module, const State& u, long p, const State& v, long q, const State& w, long k,
                    long s);

/// Number of partitions of each n in [0, max] with parts at least min_part.
std::vector<std::size_t> partition_counts(int max, int min_part);

}  // namespace voaforge
