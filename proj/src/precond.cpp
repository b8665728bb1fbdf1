#include "qprecon/precond.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qprecon {

SigmaBounds sigma_bounds(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols())
    throw Error(ErrorKind::DimensionMismatch, "A and B must be square of equal size");
  const double smin_a = sigma_min(a);
  const double smin_ab = sigma_min(a + b);
  if (smin_a < 1e-14 || smin_ab < 1e-14) throw Error(ErrorKind::Singular, "A and A + B must be invertible");
  const double nb = spectral_norm(b);
  return {1.0 / (1.0 + nb / smin_ab), 1.0 + nb / smin_a};
}

SigmaBounds sigma_bounds(const LogicalOperator& a, const LogicalOperator& b) {
  return sigma_bounds(a.matrix, b.matrix);
}

PolyParams precond_poly_params(double alpha_a_inv, double alpha_b, double sigma, double delta_prime) {
  const double alpha_w = alpha_a_inv * alpha_b + 1.0;
  return {sigma / alpha_w, 3.0 * delta_prime * sigma / (4.0 * alpha_a_inv)};
}

namespace {

int system_qubits(const Operand& op) { return log2_exact(operand_dim(op)); }

}  // namespace

PrecondInverse precond_inverse(const PrecondProblem& p, double delta_prime, const OddPolynomial* poly) {
  if (!(delta_prime > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta' must be positive");
  const long N = operand_dim(p.a_inverse);
  if (operand_dim(p.b_op) != N) throw Error(ErrorKind::DimensionMismatch, "A^{-1} and B differ in size");
  const double alpha_a = operand_alpha(p.a_inverse);
  const double alpha_b = operand_alpha(p.b_op);
  if (!(alpha_a > 0.0) || !(alpha_b > 0.0)) throw Error(ErrorKind::InvalidArgument, "subnormalizations must be positive");

  double sigma = 0.0;
  const bool dense_ok = N <= kSigmaVerifyDim;
  if (!p.sigma_hint || dense_ok) {
    const CMatrix ainv = operand_matrix(p.a_inverse);
    const CMatrix w = CMatrix::Identity(N, N) + ainv * operand_matrix(p.b_op);
    const double true_smin = sigma_min(w);
    if (true_smin < 1e-14) throw Error(ErrorKind::Singular, "I + A^{-1} B is singular");
    if (p.sigma_hint) {
      sigma = *p.sigma_hint;
      if (sigma > true_smin + 1e-8)
        throw Error(ErrorKind::BadSigmaHint, "sigma hint " + std::to_string(sigma) + " exceeds sigma_min(W) = " +
                                                 std::to_string(true_smin));
    } else {
      // 1/C_AB with (A+B)^{-1} = W^{-1} A^{-1}
      const CMatrix abinv = w.fullPivLu().solve(ainv);
      sigma = 1.0 / (1.0 + spectral_norm(abinv) * spectral_norm(operand_matrix(p.b_op)));
    }
  } else {
    sigma = *p.sigma_hint;
  }
  if (!(sigma > 0.0)) throw Error(ErrorKind::BadSigmaHint, "sigma hint must be positive");

  const double alpha_w = alpha_a * alpha_b + 1.0;
  PolyParams need = precond_poly_params(alpha_a, alpha_b, sigma, delta_prime);
  if (need.delta >= 1.0) need.delta = 0.99;

  OddPolynomial own;
  if (poly) {
    if (poly->delta > need.delta * (1.0 + 1e-12))
      throw Error(ErrorKind::InvalidArgument, "shared polynomial gap is too large");
  } else {
    own = inverse_poly(need.delta, std::min(need.eps_prime, 0.5));
    poly = &own;
  }
  // a smaller shared gap lowers the sigma actually realized
  const double sigma_used = poly->delta * alpha_w;
  const double eps_needed = 3.0 * delta_prime * sigma_used / (4.0 * alpha_a);
  if (poly->eps_prime > eps_needed * (1.0 + 1e-12))
    throw Error(ErrorKind::InvalidArgument, "shared polynomial is not accurate enough");

  const int n = system_qubits(p.a_inverse);
  Operand ident = identity_encoding(n, 1);
  if (!is_explicit(p.a_inverse) || !is_explicit(p.b_op)) ident = to_logical(ident);
  const Operand ab = be_product(p.a_inverse, p.b_op);
  const Operand w = be_lcu({cplx(1.0), cplx(1.0)}, std::vector<Operand>{ident, ab});

  const OddPolynomial& pp = *poly;
  Operand winv = svt_apply([&pp](double x) { return pp(x); }, w, SvtForm::adjoint);
  winv = reinterpret(winv, 4.0 / (3.0 * sigma_used), 4.0 * pp.eps_prime / (3.0 * sigma_used));
  Operand out = be_product(winv, p.a_inverse);
  if (auto* be = std::get_if<BlockEncoding>(&out)) {
    const int target = 2 * operand_ancillas(p.a_inverse) + operand_ancillas(p.b_op) + 3;
    if (be->m < target && be->n + target <= kMaxExplicitQubits) *be = pad_ancillas(*be, target - be->m);
  }

  PrecondInverse r;
  r.encoding = std::move(out);
  r.sigma = sigma_used;
  r.delta = pp.delta;
  r.eps_prime = pp.eps_prime;
  r.cost.poly_degree = pp.degree;
  r.cost.queries_UA_prime = pp.degree + 1;
  r.cost.queries_UB = pp.degree;
  r.cost.degree_bound = alpha_a * alpha_b / sigma_used * log_term(alpha_a / (delta_prime * sigma_used));
  r.cost.achieved_error_budget = operand_eps(r.encoding);
  r.cost.qubits = n + operand_ancillas(r.encoding);
  r.cost.primitive_gate_proxy = (r.cost.queries_UA_prime + r.cost.queries_UB) * r.cost.qubits;
  return r;
}

SolveResult precond_solve(const PrecondProblem& p, double eps) {
  if (!p.rhs) throw Error(ErrorKind::InvalidArgument, "precond_solve needs a right-hand side");
  if (!(eps > 0.0) || eps >= 1.0) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
  const CVector& b = *p.rhs;
  const long N = operand_dim(p.a_inverse);
  if (b.size() != N) throw Error(ErrorKind::DimensionMismatch, "rhs size");
  if (std::abs(b.norm() - 1.0) > 1e-10) throw Error(ErrorKind::InvalidArgument, "rhs must be normalized");

  const CMatrix ainv = operand_matrix(p.a_inverse);
  const CMatrix w = CMatrix::Identity(N, N) + ainv * operand_matrix(p.b_op);
  Eigen::FullPivLU<CMatrix> lu(w);
  if (sigma_min(w) < 1e-12) throw Error(ErrorKind::Singular, "A + B is singular");
  const double xi = lu.solve(ainv * b).norm();

  const double delta_prime = xi * eps / 2.0;
  PrecondInverse inv = precond_inverse(p, delta_prime);
  const CMatrix m = operand_matrix(inv.encoding);
  CVector x = m * b;
  const double nx = x.norm();
  if (nx == 0.0) throw Error(ErrorKind::Singular, "solution vanished");

  const double a = operand_alpha(p.a_inverse), ab = operand_alpha(p.b_op), s = inv.sigma;
  SolveResult r;
  r.state = x / nx;
  r.xi = xi;
  const CMatrix apb = lu.solve(ainv).inverse();
  r.kappa = spectral_norm(apb) / sigma_min(apb);
  r.cost = inv.cost;
  const double q = a * a * ab / (xi * s * s) * log_term(a / (s * xi * eps));
  r.cost.queries_UA_prime = q;
  r.cost.queries_UB = q;
  r.cost.queries_Ub = a / (s * xi);
  r.cost.achieved_error_budget = 2.0 * inv.cost.achieved_error_budget / xi;
  r.cost.primitive_gate_proxy = 2.0 * q * r.cost.qubits;
  return r;
}

CMatrix periodic_laplacian_operator(int grid_n) {
  if (grid_n < 4 || !is_power_of_two(grid_n) || grid_n > 1024)
    throw Error(ErrorKind::InvalidArgument, "grid_n must be a power of two in [4, 1024]");
  const double h = 2.0 * std::numbers::pi / grid_n;
  const double c = 1.0 / (h * h);
  CMatrix a = CMatrix::Zero(grid_n, grid_n);
  for (int i = 0; i < grid_n; ++i) {
    a(i, i) = 2.0 * c + 1.0;
    a(i, (i + 1) % grid_n) -= c;
    a(i, (i + grid_n - 1) % grid_n) -= c;
  }
  return a;
}

CMatrix scan_potential(int grid_n, double gamma) {
  const double h = 2.0 * std::numbers::pi / grid_n;
  CMatrix b = CMatrix::Zero(grid_n, grid_n);
  for (int i = 0; i < grid_n; ++i) b(i, i) = gamma * (3.0 + std::cos(5.0 * i * h)) - 1.0;
  return b;
}

std::vector<SigmaScanRow> sigma_min_scan(const std::vector<double>& gammas, int grid_n, Exec exec) {
  const CMatrix a = periodic_laplacian_operator(grid_n);
  const Eigen::MatrixXd ar = a.real();
  const Eigen::MatrixXd ainv = ar.inverse();
  std::vector<SigmaScanRow> rows(gammas.size());
  for_each_index(static_cast<long>(gammas.size()), exec, [&](long k) {
    const double g = gammas[static_cast<size_t>(k)];
    const Eigen::MatrixXd b = scan_potential(grid_n, g).real();
    const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(grid_n, grid_n) + ainv * b;
    Eigen::BDCSVD<Eigen::MatrixXd> sw(w);
    const double smin_w = sw.singularValues()(grid_n - 1);
    Eigen::BDCSVD<Eigen::MatrixXd> sab(ar + b);
    const double smin_ab = sab.singularValues()(grid_n - 1);
    const double nb = b.cwiseAbs().diagonal().maxCoeff();
    SigmaScanRow r;
    r.gamma = g;
    r.sigma_min = smin_w;
    r.c_ab_bound = smin_ab < 1e-12 ? 0.0 : 1.0 / (1.0 + nb / smin_ab);
    rows[static_cast<size_t>(k)] = r;
  });
  return rows;
}

}  // namespace qprecon
