#include "qprecon/kernels.hpp"

#include <cmath>
#include <numbers>

namespace qprecon {

double cheb_eval(const std::vector<double>& c, double x) {
  const long d = static_cast<long>(c.size()) - 1;
  if (d < 0) return 0.0;
  double b1 = 0.0, b2 = 0.0;
  const double x2 = 2.0 * x;
  for (long k = d; k >= 1; --k) {
    const double b0 = c[static_cast<size_t>(k)] + x2 * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

RVector cheb_eval_grid(const std::vector<double>& coeffs, const RVector& xs, Exec exec) {
  RVector out(xs.size());
  constexpr long chunk = 256;
  const long nchunks = (xs.size() + chunk - 1) / chunk;
  for_each_index(nchunks, exec, [&](long b) {
    const long lo = b * chunk, hi = std::min<long>(xs.size(), lo + chunk);
    for (long i = lo; i < hi; ++i) out(i) = cheb_eval(coeffs, xs(i));
  });
  return out;
}

CVector rational_eval_grid(const std::vector<cplx>& nodes, const std::vector<cplx>& weights, const RVector& xs,
                           Exec exec) {
  CVector out(xs.size());
  constexpr long chunk = 64;
  const long nchunks = (xs.size() + chunk - 1) / chunk;
  for_each_index(nchunks, exec, [&](long b) {
    const long lo = b * chunk, hi = std::min<long>(xs.size(), lo + chunk);
    for (long i = lo; i < hi; ++i) {
      cplx s = 0.0;
      for (size_t j = 0; j < nodes.size(); ++j) s += weights[j] / (nodes[j] - xs(i));
      out(i) = s;
    }
  });
  return out;
}

RVector chebyshev_gauss_points(long M) {
  RVector x(M);
  for (long j = 0; j < M; ++j) x(j) = std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(M));
  return x;
}

}  // namespace qprecon
