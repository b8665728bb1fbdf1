#include "qprecon/fastinv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qprecon {

DiagonalOracle DiagonalOracle::make(std::vector<cplx> values, double alpha_prime) {
  if (!is_power_of_two(static_cast<long>(values.size())))
    throw Error(ErrorKind::DimensionMismatch, "diagonal length must be a power of two");
  DiagonalOracle o;
  o.n = log2_exact(static_cast<long>(values.size()));
  o.values = std::move(values);
  const double mn = o.min_abs();
  if (mn == 0.0) throw Error(ErrorKind::ZeroDiagonal, "diagonal has a zero entry");
  o.alpha_prime = alpha_prime > 0.0 ? alpha_prime : 1.0 / mn;
  if (o.alpha_prime * mn < 1.0 - 1e-12)
    throw Error(ErrorKind::InvalidArgument, "alpha_prime must be at least 1 / min |D_ii|");
  return o;
}

double DiagonalOracle::min_abs() const {
  double mn = std::numeric_limits<double>::infinity();
  for (const cplx& v : values) mn = std::min(mn, std::abs(v));
  return values.empty() ? 0.0 : mn;
}

namespace {

void check_oracle(const DiagonalOracle& o) {
  if (static_cast<long>(o.values.size()) != (1L << o.n))
    throw Error(ErrorKind::DimensionMismatch, "oracle size does not match n");
  for (const cplx& v : o.values)
    if (v == cplx(0.0)) throw Error(ErrorKind::ZeroDiagonal, "diagonal has a zero entry");
  if (o.alpha_prime * o.min_abs() < 1.0 - 1e-12)
    throw Error(ErrorKind::InvalidArgument, "alpha_prime must be at least 1 / min |D_ii|");
}

}  // namespace

BlockEncoding fast_invert_diagonal(const DiagonalOracle& oracle) {
  check_oracle(oracle);
  if (oracle.n + 1 > kMaxExplicitQubits)
    throw Error(ErrorKind::DimensionTooLarge, "explicit encoding exceeds qubit cap");
  const long N = 1L << oracle.n;
  BlockEncoding be;
  be.n = oracle.n;
  be.m = 1;
  be.alpha = oracle.alpha_prime;
  be.eps = 0.0;
  be.unitary = CMatrix::Zero(2 * N, 2 * N);
  for (long i = 0; i < N; ++i) {
    cplx a = 1.0 / (oracle.alpha_prime * oracle.values[static_cast<size_t>(i)]);
    // guard the rounding at |a| = 1
    const double r = std::abs(a);
    if (r > 1.0) a /= r;
    const double s = std::sqrt(std::max(0.0, 1.0 - std::norm(a)));
    be.unitary(i, i) = a;
    be.unitary(i, N + i) = s;
    be.unitary(N + i, i) = s;
    be.unitary(N + i, N + i) = -std::conj(a);
  }
  return be;
}

double success_probability(const DiagonalOracle& oracle, const CVector& b) {
  check_oracle(oracle);
  if (b.size() != (1L << oracle.n)) throw Error(ErrorKind::DimensionMismatch, "state size");
  double s = 0.0;
  for (long i = 0; i < b.size(); ++i) s += std::norm(b(i) / oracle.values[static_cast<size_t>(i)]);
  return s / (oracle.alpha_prime * oracle.alpha_prime);
}

namespace {

void check_v(const CMatrix& v, const DiagonalOracle& o) {
  if (v.rows() != v.cols() || v.rows() != (1L << o.n))
    throw Error(ErrorKind::DimensionMismatch, "V must be square and match the oracle");
  // the Frobenius norm bounds the spectral residual; the SVD only runs when it is inconclusive
  const CMatrix r = v.adjoint() * v - CMatrix::Identity(v.rows(), v.cols());
  if (r.norm() > 1e-10 && unitarity_residual(v) > 1e-10) throw Error(ErrorKind::NotUnitary, "V is not unitary");
}

CVector inverse_diag(const DiagonalOracle& o) {
  CVector d(static_cast<long>(o.values.size()));
  for (long i = 0; i < d.size(); ++i) d(i) = 1.0 / o.values[static_cast<size_t>(i)];
  return d;
}

}  // namespace

NormalInverse fast_invert_normal(const CMatrix& v, const DiagonalOracle& oracle) {
  check_oracle(oracle);
  check_v(v, oracle);
  BlockEncoding d = fast_invert_diagonal(oracle);
  const long N = v.rows();
  CMatrix big_v = CMatrix::Zero(2 * N, 2 * N);
  big_v.topLeftCorner(N, N) = v;
  big_v.bottomRightCorner(N, N) = v;
  NormalInverse out;
  out.encoding = d;
  out.encoding.unitary = big_v * d.unitary * big_v.adjoint();
  out.cost.queries_V = 1;
  out.cost.queries_V_inv = 1;
  out.cost.queries_OD = 1;
  out.cost.queries_OD_inv = 1;
  out.cost.qubits = oracle.n + 1;
  return out;
}

LogicalOperator normal_inverse_logical(const CMatrix& v, const DiagonalOracle& oracle) {
  check_oracle(oracle);
  check_v(v, oracle);
  CMatrix m = v * inverse_diag(oracle).asDiagonal() * v.adjoint();
  return LogicalOperator{std::move(m), oracle.alpha_prime, 0.0};
}

OneSparseMatrix OneSparseMatrix::from_dense(const CMatrix& a, double tol) {
  if (a.rows() != a.cols() || !is_power_of_two(a.rows()))
    throw Error(ErrorKind::DimensionMismatch, "1-sparse matrix must be square with power-of-two size");
  const long N = a.rows();
  OneSparseMatrix s;
  s.n = log2_exact(N);
  std::vector<char> used(static_cast<size_t>(N), 0);
  for (long x = 0; x < N; ++x) {
    long col = -1;
    for (long y = 0; y < N; ++y) {
      if (std::abs(a(x, y)) <= tol) continue;
      if (col >= 0) throw Error(ErrorKind::InvalidArgument, "row has more than one nonzero");
      col = y;
    }
    if (col < 0) throw Error(ErrorKind::SingularOneSparse, "row " + std::to_string(x) + " is zero");
    if (used[static_cast<size_t>(col)]) throw Error(ErrorKind::SingularOneSparse, "column pattern is not a bijection");
    used[static_cast<size_t>(col)] = 1;
    s.col_of_row.push_back(static_cast<int>(col));
    s.entry_of_row.push_back(a(x, col));
  }
  return s;
}

CMatrix OneSparseMatrix::dense() const {
  const long N = 1L << n;
  CMatrix a = CMatrix::Zero(N, N);
  for (long x = 0; x < N; ++x) a(x, col_of_row[static_cast<size_t>(x)]) = entry_of_row[static_cast<size_t>(x)];
  return a;
}

BlockEncoding fast_invert_one_sparse(const OneSparseMatrix& a) {
  const long N = 1L << a.n;
  if (static_cast<long>(a.col_of_row.size()) != N || static_cast<long>(a.entry_of_row.size()) != N)
    throw Error(ErrorKind::DimensionMismatch, "1-sparse data size");
  std::vector<char> used(static_cast<size_t>(N), 0);
  std::vector<cplx> dvals(static_cast<size_t>(N));
  CMatrix pi_t = CMatrix::Zero(N, N);
  for (long x = 0; x < N; ++x) {
    const int f = a.col_of_row[static_cast<size_t>(x)];
    if (f < 0 || f >= N || used[static_cast<size_t>(f)])
      throw Error(ErrorKind::SingularOneSparse, "column pattern is not a bijection");
    used[static_cast<size_t>(f)] = 1;
    const cplx e = a.entry_of_row[static_cast<size_t>(x)];
    if (e == cplx(0.0)) throw Error(ErrorKind::SingularOneSparse, "zero entry in row " + std::to_string(x));
    dvals[static_cast<size_t>(f)] = e;
    // Pi |f(x)> = |x>, so Pi^T |x> = |f(x)>
    pi_t(f, x) = 1.0;
  }
  BlockEncoding dinv = fast_invert_diagonal(DiagonalOracle::make(dvals));
  return be_product(dinv, unitary_encoding(pi_t, 1));
}

CMatrix EllipticSystem::matrix() const {
  CVector d(static_cast<long>(oracle.values.size()));
  for (long i = 0; i < d.size(); ++i) d(i) = oracle.values[static_cast<size_t>(i)];
  return v * d.asDiagonal() * v.adjoint();
}

EllipticSystem build_elliptic(const EllipticProblem& p) {
  if (p.d < 1 || p.log2_inv_h < 1) throw Error(ErrorKind::InvalidArgument, "d and log2(1/h) must be positive");
  if (p.d * p.log2_inv_h > 12) throw Error(ErrorKind::DimensionTooLarge, "d * log2(1/h) exceeds 12");
  const long n1 = 1L << p.log2_inv_h;
  const long N = 1L << (p.d * p.log2_inv_h);
  const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

  EllipticSystem s;
  CMatrix f = qft_matrix(p.log2_inv_h);
  s.v = f;
  for (int k = 1; k < p.d; ++k) s.v = kron(s.v, f);

  std::vector<cplx> vals(static_cast<size_t>(N));
  s.modes.resize(static_cast<size_t>(N));
  for (long c = 0; c < N; ++c) {
    std::vector<int> g(static_cast<size_t>(p.d));
    long rest = c;
    for (int k = p.d - 1; k >= 0; --k) {
      const long kk = rest % n1;
      rest /= n1;
      g[static_cast<size_t>(k)] = static_cast<int>(kk < n1 / 2 ? kk : kk - n1);
    }
    double g2 = 0.0;
    for (int gi : g) g2 += static_cast<double>(gi) * gi;
    vals[static_cast<size_t>(c)] = four_pi_sq * g2 + 1.0;
    s.modes[static_cast<size_t>(c)] = std::move(g);
  }
  s.oracle = DiagonalOracle::make(vals);
  double dmax = 0.0;
  for (const cplx& v : vals) dmax = std::max(dmax, v.real());
  s.norm_a = dmax;
  s.norm_a_inv = 1.0;
  s.kappa = s.norm_a * s.norm_a_inv;

  s.rhs_hat = CVector::Zero(N);
  switch (p.rhs) {
    case RhsKind::constant: s.rhs_hat(0) = 1.0; break;
    case RhsKind::exp_decay:
      for (long c = 0; c < N; ++c) {
        double g2 = 0.0;
        for (int gi : s.modes[static_cast<size_t>(c)]) g2 += static_cast<double>(gi) * gi;
        s.rhs_hat(c) = std::exp(-2.0 * std::numbers::pi * std::sqrt(g2));
      }
      break;
    case RhsKind::explicit_coeffs:
      if (static_cast<long>(p.rhs_coeffs.size()) != N)
        throw Error(ErrorKind::DimensionMismatch, "explicit rhs needs one coefficient per planewave");
      for (long c = 0; c < N; ++c) s.rhs_hat(c) = p.rhs_coeffs[static_cast<size_t>(c)];
      break;
  }
  const double nb = s.rhs_hat.norm();
  if (nb == 0.0) throw Error(ErrorKind::InvalidArgument, "rhs is zero");
  s.rhs_hat /= nb;
  s.rhs_state = s.v * s.rhs_hat;
  double xi2 = 0.0;
  for (long c = 0; c < N; ++c) xi2 += std::norm(s.rhs_hat(c) / vals[static_cast<size_t>(c)]);
  s.xi = std::sqrt(xi2);
  return s;
}

RhsKind parse_rhs_kind(const std::string& s) {
  if (s == "constant") return RhsKind::constant;
  if (s == "exp_decay") return RhsKind::exp_decay;
  if (s == "explicit") return RhsKind::explicit_coeffs;
  throw Error(ErrorKind::InvalidArgument, "unknown rhs kind '" + s + "'");
}

}  // namespace qprecon
