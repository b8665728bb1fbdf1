#pragma once

#include <vector>

#include "qprecon/chebyshev.hpp"
#include "qprecon/cost.hpp"
#include "qprecon/numlin.hpp"

namespace qprecon {

// Odd polynomial p in the Chebyshev basis with |p| <= 1 on [-1, 1] and
// |p(x) - 3 delta / (4x)| <= eps_prime on [delta, 1].
struct OddPolynomial {
  std::vector<double> coeffs;  // length degree + 1, even entries exactly zero
  int degree = 0;
  double delta = 0.0;
  double eps_prime = 0.0;
  // cutoff kernel parameters and certification results
  int kernel_order = 0;
  double kernel_width = 0.0;
  double certified_error = 0.0;
  double certified_max_abs = 0.0;

  double operator()(double x) const;
};

inline constexpr long kCertificationGrid = 100000;

OddPolynomial inverse_poly(double delta, double eps_prime);

// Measured sup errors on a Chebyshev-distributed grid of the given size.
struct PolyCheck {
  double max_err_on_band = 0.0;  // max |p - 3 delta/(4x)| on [delta, 1]
  double max_abs = 0.0;          // max |p| on [-1, 1]
};
PolyCheck check_inverse_poly(const OddPolynomial& p, long grid = kCertificationGrid);

// Degree cap 10 (1/delta) log(1/eps').
int inverse_poly_degree_cap(double delta, double eps_prime);

// direct: f(A/alpha) = W f(S) V^+; adjoint: its Hermitian conjugate V f(S) W^+.
enum class SvtForm { direct, adjoint };

BlockEncoding svt_apply(const ScalarFn& f, const BlockEncoding& be, SvtForm form = SvtForm::direct);
LogicalOperator svt_apply(const ScalarFn& f, const LogicalOperator& op, SvtForm form = SvtForm::direct);
Operand svt_apply(const ScalarFn& f, const Operand& op, SvtForm form = SvtForm::direct);

struct SolveResult {
  CVector state;
  CostReport cost;
  double xi = 0.0;
  double kappa = 0.0;
};

SolveResult qsvt_solve(const LogicalOperator& a, const CVector& b, double eps);

// log with floor 1, used in all leading-order cost formulas.
double log_term(double x);

}  // namespace qprecon
