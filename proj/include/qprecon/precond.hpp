#pragma once

#include <optional>
#include <vector>

#include "qprecon/cost.hpp"
#include "qprecon/kernels.hpp"
#include "qprecon/numlin.hpp"
#include "qprecon/qsvt.hpp"

namespace qprecon {

// Solve (A + B) x = b given an encoding of A^{-1} and one of B.
struct PrecondProblem {
  Operand a_inverse;
  Operand b_op;
  std::optional<double> sigma_hint;  // lower bound on sigma_min(I + A^{-1} B)
  std::optional<CVector> rhs;
};

struct SigmaBounds {
  double lower = 0.0;  // 1 / C_AB
  double upper = 0.0;  // C'_AB
};

// C_AB = 1 + ||(A+B)^{-1}|| ||B||, C'_AB = 1 + ||A^{-1}|| ||B||.
SigmaBounds sigma_bounds(const CMatrix& a, const CMatrix& b);
SigmaBounds sigma_bounds(const LogicalOperator& a, const LogicalOperator& b);

// Only dense-verify the sigma hint up to this dimension.
inline constexpr long kSigmaVerifyDim = 1024;

struct PrecondInverse {
  Operand encoding;  // (A+B)^{-1}, alpha = 4 alpha'_A / (3 sigma)
  CostReport cost;
  double sigma = 0.0;  // sigma lower bound actually used
  double delta = 0.0;  // inverse-polynomial gap
  double eps_prime = 0.0;
};

// Inverse polynomial parameters the construction will ask for.
struct PolyParams {
  double delta = 0.0;
  double eps_prime = 0.0;
};
PolyParams precond_poly_params(double alpha_a_inv, double alpha_b, double sigma, double delta_prime);

// `poly` may be shared across calls; it must satisfy delta <= required delta and
// eps_prime <= required eps_prime.
PrecondInverse precond_inverse(const PrecondProblem& p, double delta_prime, const OddPolynomial* poly = nullptr);

SolveResult precond_solve(const PrecondProblem& p, double eps);

struct SigmaScanRow {
  double gamma = 0.0;
  double sigma_min = 0.0;
  double c_ab_bound = 0.0;  // 1 / C_AB, zero when A + B is singular
};

inline constexpr int kDefaultScanGrid = 256;

// A = -Lap_h + I on a periodic grid over [0, 2 pi], B = gamma diag(3 + cos 5x) - I.
CMatrix periodic_laplacian_operator(int grid_n);
CMatrix scan_potential(int grid_n, double gamma);
std::vector<SigmaScanRow> sigma_min_scan(const std::vector<double>& gammas, int grid_n = kDefaultScanGrid,
                                         Exec exec = Exec::parallel);

}  // namespace qprecon
