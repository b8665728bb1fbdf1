#include "qprecon/qsvt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qprecon/kernels.hpp"

namespace qprecon {

double log_term(double x) { return std::log(std::max(x, std::numbers::e)); }

double OddPolynomial::operator()(double x) const { return cheb_eval(coeffs, x); }

int inverse_poly_degree_cap(double delta, double eps_prime) {
  return static_cast<int>(std::floor(10.0 / delta * std::log(1.0 / eps_prime)));
}

namespace {

// max_u (1 - exp(-u^{2k})) / u
double cutoff_peak(int k) {
  auto h = [k](double u) { return (1.0 - std::exp(-std::pow(u, 2 * k))) / u; };
  double best_u = 1.0, best = h(1.0);
  for (int i = 1; i <= 4000; ++i) {
    const double u = i * 1e-3;
    if (h(u) > best) best = h(u), best_u = u;
  }
  double lo = std::max(1e-6, best_u - 1e-3), hi = best_u + 1e-3;
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (h(m1) < h(m2)) lo = m1;
    else hi = m2;
  }
  return h(0.5 * (lo + hi));
}

}  // namespace

PolyCheck check_inverse_poly(const OddPolynomial& p, long grid) {
  RVector xs = chebyshev_gauss_points(grid);
  RVector vals = cheb_eval_grid(p.coeffs, xs);
  PolyCheck c;
  for (long i = 0; i < xs.size(); ++i) {
    c.max_abs = std::max(c.max_abs, std::abs(vals(i)));
    if (xs(i) >= p.delta) c.max_err_on_band = std::max(c.max_err_on_band, std::abs(vals(i) - 0.75 * p.delta / xs(i)));
  }
  for (double x : {p.delta, 1.0}) {
    c.max_err_on_band = std::max(c.max_err_on_band, std::abs(p(x) - 0.75 * p.delta / x));
    c.max_abs = std::max(c.max_abs, std::abs(p(x)));
  }
  return c;
}

OddPolynomial inverse_poly(double delta, double eps_prime) {
  if (!(delta > 0 && delta < 1)) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
  if (!(eps_prime > 0 && eps_prime < 1)) throw Error(ErrorKind::InvalidArgument, "eps_prime must lie in (0, 1)");

  // Super-Gaussian cutoff: peak of |f| is 0.97 and the kernel error on
  // [delta, 1] is at most eps'/2.
  const double target = std::log(1.5 / eps_prime);
  int k = 0;
  double w = 0.0;
  for (int kk = 1; kk <= 16; ++kk) {
    const double wk = 0.75 * delta * cutoff_peak(kk) / 0.97;
    if (std::pow(delta / wk, 2 * kk) >= target) {
      k = kk;
      w = wk;
      break;
    }
  }
  if (k == 0) throw Error(ErrorKind::ConvergenceFailure, "no cutoff order reaches the requested accuracy");

  const int cap = std::max(1, inverse_poly_degree_cap(delta, eps_prime));
  long M = 4096;
  while (M < 4L * cap) M *= 2;

  auto kernel = [&](double x) {
    if (std::abs(x) < 1e-300) return 0.0;
    const double u = x / w;
    return 0.75 * delta * (-std::expm1(-std::pow(u * u, k))) / x;
  };
  RVector xs = chebyshev_gauss_points(M);
  std::vector<double> vals(static_cast<size_t>(M));
  for (long j = 0; j < M; ++j) vals[static_cast<size_t>(j)] = kernel(xs(j));
  std::vector<double> c = cheb_coeffs_from_gauss(vals);
  for (size_t i = 0; i < c.size(); i += 2) c[i] = 0.0;

  // tail[i] = sum_{j >= i} |c_j|
  std::vector<double> tail(c.size() + 1, 0.0);
  for (long i = static_cast<long>(c.size()) - 1; i >= 0; --i)
    tail[static_cast<size_t>(i)] = tail[static_cast<size_t>(i) + 1] + std::abs(c[static_cast<size_t>(i)]);

  int D = 1;
  while (D <= cap && tail[static_cast<size_t>(D) + 1] > 0.45 * eps_prime) D += 2;
  if (D > cap)
    throw Error(ErrorKind::ConvergenceFailure, "inverse polynomial exceeds degree cap " + std::to_string(cap));

  for (;;) {
    OddPolynomial p;
    p.coeffs.assign(c.begin(), c.begin() + D + 1);
    p.degree = D;
    p.delta = delta;
    p.eps_prime = eps_prime;
    p.kernel_order = k;
    p.kernel_width = w;
    const PolyCheck chk = check_inverse_poly(p);
    p.certified_error = chk.max_err_on_band;
    p.certified_max_abs = chk.max_abs;
    if (chk.max_err_on_band <= eps_prime && chk.max_abs <= 1.0 + 1e-8) return p;
    D += 2 * std::max(1, D / 20);
    if (D > cap)
      throw Error(ErrorKind::ConvergenceFailure, "certification failed below degree cap " + std::to_string(cap));
  }
}

namespace {

template <class Svd>
CMatrix apply_svd(const ScalarFn& f, const Svd& svd, SvtForm form) {
  const RVector& s = svd.singularValues();
  RVector fs(s.size());
  for (long i = 0; i < s.size(); ++i) fs(i) = f(std::clamp(s(i), 0.0, 1.0));
  const CMatrix& W = svd.matrixU();
  const CMatrix& V = svd.matrixV();
  if (form == SvtForm::direct) return W * fs.asDiagonal() * V.adjoint();
  return V * fs.asDiagonal() * W.adjoint();
}

// BDCSVD is fast but its complex singular vectors occasionally lose accuracy;
// Jacobi is the fallback when the factorization does not reproduce g.
CMatrix transform_block(const ScalarFn& f, const CMatrix& g, SvtForm form) {
  constexpr auto opts = Eigen::ComputeFullU | Eigen::ComputeFullV;
  Eigen::BDCSVD<CMatrix> fast(g, opts);
  const CMatrix rec = fast.matrixU() * fast.singularValues().cast<cplx>().asDiagonal() * fast.matrixV().adjoint();
  if ((rec - g).norm() <= 1e-12 * std::max(1.0, g.norm())) return apply_svd(f, fast, form);
  return apply_svd(f, Eigen::JacobiSVD<CMatrix>(g, opts), form);
}

}  // namespace

BlockEncoding svt_apply(const ScalarFn& f, const BlockEncoding& be, SvtForm form) {
  return unitary_completion(transform_block(f, be.block(), form), be.m + 1, 1.0);
}

LogicalOperator svt_apply(const ScalarFn& f, const LogicalOperator& op, SvtForm form) {
  LogicalOperator out;
  out.matrix = transform_block(f, op.block(), form);
  out.alpha = 1.0;
  out.eps = 0.0;
  return out;
}

Operand svt_apply(const ScalarFn& f, const Operand& op, SvtForm form) {
  if (auto* be = std::get_if<BlockEncoding>(&op)) {
    if (be->n + be->m + 1 <= kAutoExplicitQubits) return svt_apply(f, *be, form);
    return svt_apply(f, to_logical(*be), form);
  }
  return svt_apply(f, std::get<LogicalOperator>(op), form);
}

SolveResult qsvt_solve(const LogicalOperator& a, const CVector& b, double eps) {
  if (a.matrix.rows() != a.matrix.cols() || a.matrix.rows() != b.size())
    throw Error(ErrorKind::DimensionMismatch, "operator and right-hand side sizes differ");
  if (std::abs(b.norm() - 1.0) > 1e-10) throw Error(ErrorKind::InvalidArgument, "right-hand side must be normalized");
  if (!(eps > 0 && eps < 1)) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");

  Eigen::BDCSVD<CMatrix> svd(a.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector s = svd.singularValues();
  const double smax = s(0), smin = s(s.size() - 1);
  if (smin < 1e-12) throw Error(ErrorKind::Singular, "smallest singular value below 1e-12");

  const CVector exact = svd.solve(b);
  const double xi = exact.norm();
  const double kappa = smax / smin;

  const double delta = std::min(smin / a.alpha, 0.9);
  const double eps_prime = std::min(0.5, 3.0 * delta * a.alpha * xi * eps / 8.0);
  const OddPolynomial p = inverse_poly(delta, eps_prime);
  const LogicalOperator inv = svt_apply([&p](double x) { return p(x); }, a, SvtForm::adjoint);
  CVector x = inv.matrix * b;
  x /= x.norm();

  SolveResult r;
  r.state = x;
  r.xi = xi;
  r.kappa = kappa;
  const double na = smax;
  r.cost.queries_UA_prime = a.alpha * kappa * kappa / (na * na * xi) * log_term(kappa / (na * xi * eps));
  r.cost.queries_Ub = kappa / (na * xi);
  r.cost.primitive_gate_proxy = r.cost.queries_UA_prime;
  r.cost.achieved_error_budget = eps;
  r.cost.poly_degree = p.degree;
  return r;
}

}  // namespace qprecon
