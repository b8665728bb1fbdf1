#pragma once

#include <string>
#include <vector>

#include "qprecon/cost.hpp"
#include "qprecon/numlin.hpp"

namespace qprecon {

// O_D|i>|0> = |i>|D_ii>, with the eigenvalue register treated as exact.
struct DiagonalOracle {
  int n = 0;
  std::vector<cplx> values;
  double alpha_prime = 0.0;

  // alpha_prime <= 0 selects the default 1 / min |D_ii|.
  static DiagonalOracle make(std::vector<cplx> values, double alpha_prime = 0.0);
  double min_abs() const;
};

// (alpha'_D, 1, 0)-encoding of D^{-1}: one amplitude rotation per index.
BlockEncoding fast_invert_diagonal(const DiagonalOracle& oracle);
// (||D^{-1} b|| / alpha'_D)^2
double success_probability(const DiagonalOracle& oracle, const CVector& b);

// Eigen-decomposition of a fast-invertible part: A = V diag(d) V^+.
struct Diagonalization {
  CMatrix v;
  RVector d;
};

struct NormalInverse {
  BlockEncoding encoding;
  CostReport cost;
};

// (V (x) I) U'_D (V^+ (x) I) for A = V D V^+.
NormalInverse fast_invert_normal(const CMatrix& v, const DiagonalOracle& oracle);
// Same operator without forming the unitary; for Fock-space sizes.
LogicalOperator normal_inverse_logical(const CMatrix& v, const DiagonalOracle& oracle);

// A_{x, f(x)} is the only nonzero in row x.
struct OneSparseMatrix {
  int n = 0;
  std::vector<int> col_of_row;
  std::vector<cplx> entry_of_row;

  static OneSparseMatrix from_dense(const CMatrix& a, double tol = 0.0);
  CMatrix dense() const;
};

// A = Pi D, A^{-1} = D^{-1} Pi^T, subnormalization 1 / min |A_{x,f(x)}|.
BlockEncoding fast_invert_one_sparse(const OneSparseMatrix& a);

enum class RhsKind { constant, exp_decay, explicit_coeffs };

struct EllipticProblem {
  int d = 1;
  int log2_inv_h = 2;
  RhsKind rhs = RhsKind::constant;
  std::vector<cplx> rhs_coeffs;  // used with explicit_coeffs, in V-column order

  double h() const { return 1.0 / static_cast<double>(1L << log2_inv_h); }
};

struct EllipticSystem {
  CMatrix v;
  DiagonalOracle oracle;
  double norm_a = 0.0;
  double norm_a_inv = 0.0;
  double kappa = 0.0;
  double xi = 0.0;
  CVector rhs_hat;    // planewave coefficients, normalized
  CVector rhs_state;  // V rhs_hat in the grid basis
  std::vector<std::vector<int>> modes;  // integer frequency vector per column

  CMatrix matrix() const;
};

EllipticSystem build_elliptic(const EllipticProblem& p);

RhsKind parse_rhs_kind(const std::string& s);

}  // namespace qprecon
