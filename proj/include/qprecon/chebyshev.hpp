#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qprecon/numlin.hpp"

namespace qprecon {

using ScalarFn = std::function<double(double)>;

// Chebyshev coefficients c_0..c_{M-1} from samples at the M Chebyshev-Gauss
// points cos(pi (j + 1/2) / M) (DCT-II).
std::vector<double> cheb_coeffs_from_gauss(const std::vector<double>& values);

struct ChebSeries {
  std::vector<double> coeffs;
  int degree = 0;
  // target descriptor
  std::string target;
  double beta = 0.0;
  double alpha_prime = 0.0;
  bool odd = false;

  double operator()(double x) const;
};

// c_k = (2 - delta_k0)/pi int g T_k / sqrt(1 - y^2) by Chebyshev-Gauss
// quadrature with 4(d+1) points.
ChebSeries chebyshev_coeffs(const ScalarFn& g, int d);

// 32 8^r (r+1)! ||g^{(r+1)}||_inf / d^r
double chebyshev_truncation_bound(int r, double deriv_sup, int d);

// ceil(8 e R (log(32 C R / eps) + 2)^(sigma + 1))
double gevrey_degree(double C, double R, double sigma, double eps);

// Finite-difference weights for the m-th derivative at x0 from nodes xs
// (Fornberg recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m);

// Central-difference estimate of g^{(k)}(y) with accuracy order `order`.
double fd_derivative(const ScalarFn& g, double y, int k, double h, int order = 8);

}  // namespace qprecon
