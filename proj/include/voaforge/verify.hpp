#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace voaforge::verify {

struct Options {
  std::uint64_t seed = 0;
  long cutoff = 8;  ///< starting cutoff D for congruences
  /// Raise the cutoff past D when a congruence is not settled; otherwise
  /// such congruences are reported as inconclusive.
  bool raise_cutoff = true;
  long levels = 4;  ///< level window K
  long vmax = 6;    ///< weight bound for VOA states in Omega computations
  /// Check the constants exactly as originally stated (which are known to be
  /// off) instead of the corrected ones.
  bool literal = false;
  /// Fault injection: replace theta by a map that is not an involution.
  bool tamper_theta = false;
  bool parallel = true;
};

/// Outcome of one family of identity checks.
struct Check {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t inconclusive = 0;  ///< congruences not settled at any cutoff tried
  double seconds = 0;
  std::vector<std::string> notes;  ///< first failures and informational lines

  bool ok() const { return failed == 0 && inconclusive == 0; }
  /// Counts one instance; keeps the first few failure descriptions.
  void record(bool ok, const std::string& what);
  void note(std::string line) { notes.push_back(std::move(line)); }
};

struct Report {
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  /// No exact mismatch. Inconclusive congruences are only warnings here.
  bool ok() const;
};

struct Criterion {
  int number;
  std::string title;
  std::function<Check(const Options&)> run;
};

/// The acceptance list, in order.
const std::vector<Criterion>& criteria();

/// Runs "formal", "anv", "regrep" or "all".
Report run_suite(const std::string& suite, const Options& options);

}  // namespace voaforge::verify
