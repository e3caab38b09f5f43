// Serial reference vs OpenMP kernels: sparse elimination and span construction.
// Usage: bench [repetitions]
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "voaforge/anv.hpp"
#include "voaforge/linalg.hpp"

using namespace voaforge;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const std::string& what, double serial, double parallel, bool agree) {
  std::printf("%-40s serial %8.3f s   parallel %8.3f s   speedup %5.2f   %s\n", what.c_str(), serial, parallel,
              serial / parallel, agree ? "results agree" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());

  auto H = Module::heisenberg(16);
  auto Vir = Module::virasoro(Scalar(1, 2), 16);

  // the spanning matrices of O_0(V) are the workload the engine actually eliminates
  for (auto [V, D] : {std::pair<const Module*, long>{H.get(), 10}, {H.get(), 12}, {Vir.get(), 14}}) {
    anv::AnContext ctx(*V, 0, D, anv::Variant::OnV, 2, false);
    std::vector<SparseVector> rows;
    for (const auto& s : ctx.element_values()) rows.push_back(s.coeffs);
    const Index cols = V->level_end(D);
    std::size_t rs = 0, rp = 0;
    const double s = best_of(reps, [&] { rs = linalg::rref(rows, cols).rank(); });
    const double p = best_of(reps, [&] { rp = linalg::rref_parallel(rows, cols).rank(); });
    report("rref " + std::to_string(rows.size()) + "x" + std::to_string(cols) + " " + V->name(), s, p, rs == rp);
  }

  for (const Module* V : {H.get(), Vir.get()}) {
    std::size_t rs = 0, rp = 0;
    const double s = best_of(reps, [&] { rs = anv::AnContext(*V, 0, 12, anv::Variant::OnV, 2, false).rank(); });
    const double p = best_of(reps, [&] { rp = anv::AnContext(*V, 0, 12, anv::Variant::OnV, 2, true).rank(); });
    report("span of O_0, D=12, " + V->name(), s, p, rs == rp);
  }
  return 0;
}
