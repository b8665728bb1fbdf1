#pragma once

#include <exception>
#include <vector>

#include "qprecon/numlin.hpp"

namespace qprecon {

// Serial is the reference path; parallel must agree bitwise because every
// index writes its own slot and no reduction crosses indices.
enum class Exec { serial, parallel };

template <class F>
void for_each_index(long n, Exec exec, F&& f) {
  if (exec == Exec::serial || n < 2) {
    for (long i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errs(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
      errs[static_cast<size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

// sum_k c_k T_k(x) at every x (Clenshaw).
RVector cheb_eval_grid(const std::vector<double>& coeffs, const RVector& xs, Exec exec = Exec::parallel);
double cheb_eval(const std::vector<double>& coeffs, double x);

// sum_j w_j / (z_j - x) at every real x.
CVector rational_eval_grid(const std::vector<cplx>& nodes, const std::vector<cplx>& weights, const RVector& xs,
                           Exec exec = Exec::parallel);

// x_j = cos(pi (j + 1/2) / M), j = 0..M-1, descending.
RVector chebyshev_gauss_points(long M);

}  // namespace qprecon
