#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "voaforge/anv.hpp"
#include "voaforge/formal.hpp"
#include "voaforge/voa.hpp"

namespace voaforge::regrep {

/// Values of functionals live in U = Q^dim, stored sparsely.
using UVector = SparseVector;

/// Which of the two commuting actions on functionals.
enum class Side { Left, Right };

/// Ω-levels (left, right): the functional is killed by every mode
/// v_{wt v + m}, m >= left, of the left action and m >= right of the right
/// action. A level of -1 or less means the functional is zero. Equivalently,
/// x^{wt v + right} (x+1)^{wt v + left} f Y°(v,x) w is a polynomial for all v, w.
struct Certificate {
  long left = 0;
  long right = 0;
  bool operator==(const Certificate&) const = default;
};

/// A certificate was contradicted by actual coefficients: the functional is
/// not in the subspace its certificate claims.
class CertificateViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation that needs pole data was handed a functional without it.
class UncertifiedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear functional W -> U, evaluated lazily on basis states and memoized.
/// Either it has finite support (zero above a known level) or it carries a
/// certificate; derived functionals inherit both through fixed rules.
class Functional {
 public:
  virtual ~Functional() = default;

  const Module& module() const { return *W_; }
  std::size_t dim() const { return dim_; }
  const std::optional<Certificate>& certificate() const { return cert_; }
  /// Highest level with a possibly nonzero value, when finite.
  const std::optional<long>& support() const { return support_; }

  UVector at(Index wid) const;
  UVector operator()(const State& w) const;

  /// Coefficient of x^p in f Y°(v,x) w for a VOA basis state v.
  UVector opposite_coefficient(Index vid, Index wid, long p) const;
  /// The rational functions whose expansions at infinity are the coordinates
  /// of f Y°(v,x) w. Poles only at 0 and -1.
  const std::vector<formal::RationalFunction>& matrix_coefficients(Index vid, Index wid) const;
  /// Same, after x -> x - 1.
  const std::vector<formal::RationalFunction>& shifted_matrix_coefficients(Index vid, Index wid) const;

  virtual std::string describe() const = 0;

 protected:
  /// A finite support also implies the certificate (0, support); the stored
  /// certificate is the sharper of the two.
  Functional(const Module& W, std::size_t dim, std::optional<Certificate> cert, std::optional<long> support);
  virtual UVector compute(Index wid) const = 0;

 private:
  struct Poles {
    std::vector<formal::RationalFunction> plain, shifted;
  };
  const Poles& poles(Index vid, Index wid) const;

  const Module* W_;
  std::size_t dim_;
  std::optional<Certificate> cert_;
  std::optional<long> support_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Index, UVector> values_;
  mutable std::map<std::pair<Index, Index>, std::shared_ptr<const Poles>> poles_;
};

using FunctionalPtr = std::shared_ptr<const Functional>;

/// Number of redundant coefficients used to cross-check a reconstruction.
inline constexpr long kCheckCoefficients = 2;

// ------------------------------------------------------------ constructions

/// Finite-support functional from explicit values on basis states.
FunctionalPtr table_functional(const Module& W, std::size_t dim, std::map<Index, UVector> values);
/// The coordinate functional of one basis state, with value e_coord.
FunctionalPtr dual_functional(const Module& W, Index id, std::size_t dim = 1, std::size_t coord = 0);
/// Random rational values on every basis state of level <= N.
FunctionalPtr random_table(const Module& W, long N, std::size_t dim, std::mt19937_64& rng, long height = 5);
/// Attach a certificate without checking it. With hide_support the finite
/// support is forgotten, forcing the rational-reconstruction route.
FunctionalPtr assume_certificate(FunctionalPtr f, Certificate c, bool hide_support = false);

/// f(v) = o(v) u = v_{wt v - 1} u for u in the lowest n+1 levels of a
/// lowest-weight module M over V, with U = M_{<=n} in basis coordinates.
/// Lies in Hom(A_n(V), U) as the map [v] -> [v].u.
FunctionalPtr matrix_coefficient(const Module& M, long n, const State& u);

/// Res_x x^m Y^side(v,x) f.
FunctionalPtr mode_image(Side side, const State& v, long m, FunctionalPtr f);
/// sum over homogeneous components of v_{wt v - 1}.
FunctionalPtr o_image(Side side, const State& v, FunctionalPtr f);
FunctionalPtr combination(std::vector<std::pair<Scalar, FunctionalPtr>> terms);
/// w -> f(theta(a2) *_n (w *_n a1)).
FunctionalPtr dual_action(const State& a1, const State& a2, FunctionalPtr f, long n);
/// e^{s L^side(1)} f, summed up to the nilpotency horizon of the certificate.
FunctionalPtr exp_l1(Side side, const Scalar& s, FunctionalPtr f);
/// e^{sign (L^L(1) - L^R(1))} f.
FunctionalPtr sigma(FunctionalPtr f, int sign);

/// Two equivalent expansions of a deformed mode in undeformed ones.
enum class Route { Relation, Definition };
/// Res_x x^m (Y^side)^[z0](v,x) f.
FunctionalPtr deformed_mode(Side side, const Scalar& z0, const State& v, long m, FunctionalPtr f, Route route);
/// Res_x x^{wt v - 1} of the deformation by z0 = 1 (left) or z0 = -1 (right).
FunctionalPtr o_deformed(Side side, const State& v, FunctionalPtr f);
/// Deformed mode on a module: Res_x x^m Y^[z0](v,x) w.
State deformed_mode(const Module& W, const Scalar& z0, const State& v, long m, const State& w, Route route);
/// (Y^[z0])^[-z0] mode m of v on w; equals v_m w.
State deformed_round_trip(const Module& W, const Scalar& z0, const State& v, long m, const State& w);
/// Same round trip for functionals.
FunctionalPtr deformed_round_trip(Side side, const Scalar& z0, const State& v, long m, FunctionalPtr f);

/// Coordinate `coord` of f Y°(v,x) w as a rational function.
formal::RationalFunction matrix_coeff_rational(const Functional& f, const State& v, const State& w,
                                               std::size_t coord = 0);

/// Y^L mode computed from the defining formula (z+x)^{-l}((x+z)^l f Y°(v,x+z) w)
/// by direct binomial sums, without rational reconstruction.
UVector yl_mode_direct(const Functional& f, Index vid, long m, Index wid);

// ------------------------------------------------------------ checks

struct WindowVerdict {
  bool ok = true;
  long power = 0;  ///< first offending power when not ok
  std::string detail;
};
/// Is x^{wt v + n} (x+1)^{wt v + n} f Y°(v,x) w free of negative powers on the
/// powers [-depth, -1] that the support of f determines?
WindowVerdict pole_window_test(const Functional& f, long n, Index vid, Index wid, long depth = 8);

/// Jacobi-type identity relating f Y°, Y^R f and Y^L f, compared on
/// Res_{x0} x0^p, coefficient of x^q, for p, q in [lo, hi].
WindowVerdict jacobi_window_check(const Functional& f, Index vid, Index wid, long lo, long hi);

struct CertifyOptions {
  long cutoff = -1;     ///< span cutoff; defaults to the support of the functional
  long window_vmax = 3; ///< weights of VOA states used in the pole test
  bool parallel = true;
};

/// Rejection carrying the spanning element the functional does not kill.
class CertificationFailure : public std::runtime_error {
 public:
  CertificationFailure(const std::string& what, std::string witness, State value)
      : std::runtime_error(what), witness_(std::move(witness)), value_(std::move(value)) {}
  const std::string& witness() const { return witness_; }
  const State& value() const { return value_; }

 private:
  std::string witness_;
  State value_;
};

/// Checks that alpha kills the O'_n(W) spanning elements up to the cutoff and
/// passes the pole test on sampled states; returns alpha with certificate (n, n).
FunctionalPtr certify_hom_anw(FunctionalPtr alpha, long n, const CertifyOptions& options = {});

// ------------------------------------------------------------ Omega_n on modules

/// Candidate Ω_n(W) up to level K: joint kernel of v_{wt v + m}, m >= n, for
/// VOA basis states v of weight <= vmax. A superset of the true space.
struct OmegaBasis {
  long n = 0, K = 0, vmax = 0;
  const Module* module = nullptr;
  std::vector<std::vector<State>> levels;  ///< basis of the candidate per level
  std::vector<std::size_t> dims() const;
  std::size_t dimension() const;
  /// Is the (homogeneous or not) state inside the candidate space?
  bool contains(const State& w) const;
};
OmegaBasis omega_n_basis(const Module& W, long n, long K, long vmax);
/// Same space computed from the deformed modes of z0 (not level-preserving,
/// so computed on W_{<=K} as a whole); returned as one basis.
std::vector<State> omega_n_deformed(const Module& W, long n, long K, long vmax, const Scalar& z0);
/// Do two lists of states span the same subspace?
bool same_span(const std::vector<State>& a, const std::vector<State>& b);

struct NilpotencyVerdict {
  bool ok = true;
  State witness;  ///< basis vector not killed, when !ok
};
/// Is (v_m)^power zero on every basis vector of the candidate?
NilpotencyVerdict nilpotency_check(const OmegaBasis& omega, const State& v, long m, long power);

/// v ↦ v_{wt v - 1}, summed over homogeneous components.
State o_action(const Module& W, const State& v, const State& w);

struct GeneratedSubmodule {
  std::vector<std::size_t> dims;         ///< per level 0..K (relative to the module's grading)
  std::vector<std::size_t> second_pass;  ///< dims after applying the modes once more
  std::vector<std::vector<State>> basis;
};
/// Span of single mode images v_m s (v of weight <= vmax) of homogeneous seeds.
GeneratedSubmodule generated_submodule(const Module& W, const std::vector<State>& seeds, long K, long vmax);

// ------------------------------------------------------------ induction

/// An A_n(V)-module given by the lowest n+1 levels of a lowest-weight
/// module; the action of a class [v] is o(v).
struct AnModule {
  const Module* realization = nullptr;  ///< null for the zero module
  long n = 0;
  std::size_t dim() const;
  /// Matrix (rows of U-coordinates per basis vector) of o(v) on U.
  std::vector<UVector> action(const State& v) const;
};

/// Checks rho(b_i) rho(b_j) = sum_k c_ij^k rho(b_k) for every product of the
/// table that stayed inside its window; throws std::domain_error on mismatch.
void check_an_module(const AnModule& U, const anv::AnTable& table);

struct InduceOptions {
  long weight_slack = 4;  ///< candidates use VOA states of weight <= level + slack
  long test_level = -1;   ///< test states of V up to this level (default K + 2)
  int sigma_sign = 1;
  bool parallel = true;
};

struct InducedModuleResult {
  long n = 0;
  long K = 0;
  Scalar lowest_weight{0};
  std::vector<std::size_t> dims;            ///< per level 0..K
  std::vector<std::size_t> below_lowest;    ///< measured dims at levels -n-2, -n-1
  std::vector<std::size_t> oracle;          ///< graded dims of the realization
  bool below_lowest_vanishes() const;
};
InducedModuleResult induce(const Module& V, const AnModule& U, long K, const InduceOptions& options = {});

}  // namespace voaforge::regrep
