// Serial reference path vs OpenMP path for the data-parallel kernels.
//
//   qprecon_bench [--threads K] [--reps R]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qprecon/greens.hpp"
#include "qprecon/kernels.hpp"
#include "qprecon/manybody.hpp"
#include "qprecon/matfun.hpp"
#include "qprecon/precond.hpp"

using namespace qprecon;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

volatile double sink = 0.0;

}  // namespace

int main(int argc, char** argv) {
  int threads = omp_get_max_threads();
  int reps = 3;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (!std::strcmp(argv[i], "--threads")) threads = std::atoi(argv[i + 1]);
    else if (!std::strcmp(argv[i], "--reps")) reps = std::atoi(argv[i + 1]);
  }
  omp_set_num_threads(threads);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<double> coeffs(2001);
  for (size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = nd(rng) / (1.0 + static_cast<double>(k));
  const RVector xs = RVector::LinSpaced(200000, -1.0, 1.0);
  const QuadratureRule rule = contour_nodes(1.0, 4.0, 1346);
  const RVector xq = RVector::LinSpaced(20000, 0.0, 50.0);
  const std::vector<double> gammas = {0.5, 1, 2, 3, 4, 5, 6, 8};

  const FockHamiltonian h = hubbard_hamiltonian(2, 1, 1.0, 4.0);
  const GroundStateOracle gs = ground_state(h, 2);
  std::vector<cplx> zs;
  for (int k = 0; k < 16; ++k) zs.emplace_back(-4.0 + 0.5 * k, 0.5);

  Diagonalization a;
  a.v = CMatrix::Identity(8, 8);
  a.d = RVector::LinSpaced(8, 0.5, 4.0);
  const LogicalOperator b{CMatrix::Identity(8, 8) * 0.1, 0.1, 0.0};
  const QuadratureRule small = contour_nodes(1.0, 3.0, 64);

  struct Case {
    const char* name;
    std::function<void(Exec)> run;
  };
  const std::vector<Case> cases = {
      {"cheb_eval_grid (deg 2000, 2e5 pts)", [&](Exec e) { sink = cheb_eval_grid(coeffs, xs, e)(7); }},
      {"rational_eval_grid (J 1346, 2e4 pts)",
       [&](Exec e) { sink = rational_eval_grid(rule.nodes, rule.weights, xq, e)(3).real(); }},
      {"sigma_min_scan (8 gammas, n 256)", [&](Exec e) { sink = sigma_min_scan(gammas, 256, e)[0].sigma_min; }},
      {"greens_sweep (2-site, 16 z)",
       [&](Exec e) { sink = greens_sweep(h, gs, zs, 1, 1, 0.5, 1e-3, e)[0].g.real(); }},
      {"select_oracle (dim 8, J 64)",
       [&](Exec e) { sink = select_oracle(a, b, small, 1e-6, std::nullopt, e).alpha; }},
  };

  std::printf("threads %d, best of %d\n", threads, reps);
  std::printf("%-40s %12s %12s %8s\n", "kernel", "serial [s]", "parallel [s]", "speedup");
  for (const auto& c : cases) {
    const double ts = best_of(reps, [&] { c.run(Exec::serial); });
    const double tp = best_of(reps, [&] { c.run(Exec::parallel); });
    std::printf("%-40s %12.4f %12.4f %8.2f\n", c.name, ts, tp, ts / tp);
  }
  return 0;
}
