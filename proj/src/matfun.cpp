#include "qprecon/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qprecon/precond.hpp"

namespace qprecon {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

void check_beta_eps(double beta, double eps) {
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
}

double hermitian_tol(const CMatrix& h) { return 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff()); }

// Hermitian H or InvalidArgument; returns the smallest eigenvalue.
double min_eigenvalue(const CMatrix& h) {
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol(h))
    throw Error(ErrorKind::InvalidArgument, "H must be Hermitian");
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CMatrix assemble(const Diagonalization& a, const LogicalOperator& b) {
  const long N = a.d.size();
  if (a.v.rows() != N || a.v.cols() != N || b.matrix.rows() != N || b.matrix.cols() != N)
    throw Error(ErrorKind::DimensionMismatch, "V, d and B sizes differ");
  return a.v * a.d.cast<cplx>().asDiagonal() * a.v.adjoint() + b.matrix;
}

struct Padded {
  Diagonalization a;
  LogicalOperator b;
};

// Next power of two (at least 2); new levels sit at max(d) with no coupling.
Padded pad_system(const Diagonalization& a, const LogicalOperator& b) {
  const long N = a.d.size();
  long P = 2;
  while (P < N) P *= 2;
  if (P == N) return {a, b};
  Padded p;
  p.a.v = CMatrix::Identity(P, P);
  p.a.v.topLeftCorner(N, N) = a.v;
  p.a.d = RVector::Constant(P, a.d.maxCoeff());
  p.a.d.head(N) = a.d;
  p.b = b;
  p.b.matrix = CMatrix::Zero(P, P);
  p.b.matrix.topLeftCorner(N, N) = b.matrix;
  return p;
}

int ceil_log2(long x) {
  int k = 0;
  while ((1L << k) < x) ++k;
  return k;
}

}  // namespace

GaussLegendre gauss_legendre(int J) {
  if (J < 1) throw Error(ErrorKind::InvalidArgument, "need at least one Gauss-Legendre node");
  GaussLegendre g;
  g.nodes.resize(static_cast<size_t>(J));
  g.weights.resize(static_cast<size_t>(J));
  for (int i = 0; i < (J + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (J + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= J; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = J * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-14) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= J; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = J * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[static_cast<size_t>(i)] = -x;
    g.nodes[static_cast<size_t>(J - 1 - i)] = x;
    g.weights[static_cast<size_t>(i)] = w;
    g.weights[static_cast<size_t>(J - 1 - i)] = w;
  }
  if (J % 2 == 1) g.nodes[static_cast<size_t>(J / 2)] = 0.0;
  return g;
}

cplx QuadratureRule::operator()(double x) const {
  cplx s = 0.0;
  for (size_t j = 0; j < nodes.size(); ++j) s += weights[j] / (nodes[j] - x);
  return s;
}

QuadratureRule contour_nodes(double beta, double T, int J) {
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta must be positive");
  if (!(T >= 1.0)) throw Error(ErrorKind::InvalidArgument, "T must be at least 1");
  if (J < 2) throw Error(ErrorKind::InvalidArgument, "J must be at least 2");
  QuadratureRule r;
  r.beta = beta;
  r.T = T;
  r.J = J;
  r.b = std::min(1.0 / (2.0 * beta), 1.0 / 6.0);
  r.zeta = 2.0 * r.b * (1.0 - r.b);
  const GaussLegendre gl = gauss_legendre(J);
  r.s = gl.nodes;
  r.w = gl.weights;
  for (int j = 0; j < J; ++j) {
    const double t = T * r.s[static_cast<size_t>(j)];
    const cplx z(t * t - r.zeta, t);
    // increasing t runs clockwise around [0, inf), hence the sign
    const cplx rho = -(T / (2.0 * kPi * kI)) * r.w[static_cast<size_t>(j)] * std::exp(-beta * z) * cplx(2.0 * t, 1.0);
    r.t.push_back(t);
    r.nodes.push_back(z);
    r.weights.push_back(rho);
    r.sum_abs_rho += std::abs(rho);
  }
  return r;
}

double quadrature_error_bound(double beta, double T, int J, QuadBoundForm form) {
  if (!(T >= 1.0)) throw Error(ErrorKind::InvalidArgument, "T must be at least 1");
  const bool min_form = form == QuadBoundForm::min_beta;
  const double bt = min_form ? std::min(beta, 3.0) : std::max(beta, 3.0);
  const double c = min_form ? std::exp(1.5) : std::exp(0.25);
  const double trunc = std::sqrt(2.0 / (beta * kPi)) * std::exp(1.0 - beta * T * T);
  const double geo = 64.0 * T * T * bt * c / -std::expm1(-1.0 / (8.0 * T * bt)) * std::exp(-J / (4.0 * T * bt));
  return trunc + geo;
}

double quadrature_empirical_error(const QuadratureRule& rule, double x_max, long points, Exec exec) {
  if (points < 2) throw Error(ErrorKind::InvalidArgument, "need at least two sample points");
  const RVector xs = RVector::LinSpaced(points, 0.0, x_max);
  const CVector vals = rational_eval_grid(rule.nodes, rule.weights, xs, exec);
  double worst = 0.0;
  for (long k = 0; k < points; ++k) worst = std::max(worst, std::abs(std::exp(-rule.beta * xs(k)) - vals(k)));
  return worst;
}

TJChoice choose_T_J(double beta, double eps, QuadBoundForm form) {
  check_beta_eps(beta, eps);
  const double target = eps / 2.0;
  const bool min_form = form == QuadBoundForm::min_beta;
  const double bt = min_form ? std::min(beta, 3.0) : std::max(beta, 3.0);
  TJChoice best;
  for (double T = 1.0; T <= kMaxContourT + 1e-12; T += 0.25) {
    const double trunc = std::sqrt(2.0 / (beta * kPi)) * std::exp(1.0 - beta * T * T);
    if (trunc >= target) continue;
    const double pref = quadrature_error_bound(beta, T, 0, form) - trunc;
    const double jr = 4.0 * T * bt * std::log(pref / (target - trunc));
    if (jr > kMaxContourJ) continue;
    int J = std::max(2, static_cast<int>(std::ceil(jr)));
    while (J > 2 && quadrature_error_bound(beta, T, J - 1, form) <= target) --J;
    while (J <= kMaxContourJ && quadrature_error_bound(beta, T, J, form) > target) ++J;
    if (J > kMaxContourJ) continue;
    if (best.J == 0 || J < best.J) best = {T, J, quadrature_error_bound(beta, T, J, form)};
  }
  if (best.J == 0) throw Error(ErrorKind::NoFeasiblePoint, "no (T, J) on the search lattice reaches eps/2");
  return best;
}

CMatrix SelectOracle::dense() const {
  if (blocks.empty()) return CMatrix();
  const long N = blocks[0].matrix.rows();
  const long J = static_cast<long>(blocks.size());
  CMatrix out = CMatrix::Zero(J * N, J * N);
  for (long j = 0; j < J; ++j) out.block(j * N, j * N, N, N) = blocks[static_cast<size_t>(j)].matrix;
  return out;
}

cplx contour_shift(cplx z) { return z.imag() > 0.0 ? kI : -kI; }

double default_contour_sigma(double beta, double alpha_b) {
  return 1.0 / (1.0 + 2.0 * std::max(beta, 3.0) * (alpha_b + 1.0));
}

SelectOracle select_oracle(const Diagonalization& a, const LogicalOperator& b, const QuadratureRule& rule,
                           double delta_prime, std::optional<double> sigma_hint, Exec exec) {
  const long N = a.d.size();
  if (a.v.rows() != N || a.v.cols() != N || b.matrix.rows() != N || b.matrix.cols() != N)
    throw Error(ErrorKind::DimensionMismatch, "V, d and B sizes differ");
  if (!is_power_of_two(N) || N < 2) throw Error(ErrorKind::DimensionMismatch, "system size must be a power of two");
  if (!(delta_prime > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta' must be positive");
  const double alpha_b = std::max(b.alpha, 0.0);
  const double sigma = sigma_hint.value_or(default_contour_sigma(rule.beta, alpha_b));

  PolyParams pp = precond_poly_params(1.0, alpha_b + 1.0, sigma, delta_prime);
  const OddPolynomial poly = inverse_poly(std::min(pp.delta, 0.99), std::min(pp.eps_prime, 0.5));
  const LogicalOperator ident{CMatrix::Identity(N, N), 1.0, 0.0};
  const LogicalOperator b_hat{b.matrix, alpha_b, b.eps};

  SelectOracle s;
  s.blocks.resize(rule.nodes.size());
  std::vector<double> sig(rule.nodes.size());
  for_each_index(static_cast<long>(rule.nodes.size()), exec, [&](long j) {
    const cplx z = rule.nodes[static_cast<size_t>(j)];
    const cplx xi = contour_shift(z);
    std::vector<cplx> vals(static_cast<size_t>(N));
    for (long k = 0; k < N; ++k) vals[static_cast<size_t>(k)] = z + xi - a.d(k);
    // |Im(z + xi)| >= 1, so alpha' = 1
    const LogicalOperator a_inv = normal_inverse_logical(a.v, DiagonalOracle::make(vals, 1.0));
    const LogicalOperator b_part = be_lcu({cplx(-1.0), -xi}, std::vector<LogicalOperator>{b_hat, ident});
    PrecondInverse inv = precond_inverse(PrecondProblem{a_inv, b_part, sigma, {}}, delta_prime, &poly);
    s.blocks[static_cast<size_t>(j)] = to_logical(inv.encoding);
    sig[static_cast<size_t>(j)] = inv.sigma;
  });
  s.alpha = s.blocks.empty() ? 0.0 : s.blocks[0].alpha;
  s.sigma = sig.empty() ? sigma : sig[0];

  const int d = poly.degree;
  CostReport& c = s.cost;
  c.poly_degree = d;
  c.queries_UA_prime = d + 1;
  c.queries_V = c.queries_V_inv = c.queries_OD = c.queries_OD_inv = d + 1;
  c.queries_UB = d;
  c.degree_bound = (alpha_b + 1.0) / s.sigma * log_term(1.0 / (s.sigma * delta_prime));
  c.achieved_error_budget = delta_prime;
  // select register plus 2 m'_A + m_B + 3 with single-ancilla inputs
  c.qubits = log2_exact(N) + ceil_log2(static_cast<long>(rule.nodes.size())) + 6;
  c.primitive_gate_proxy = (c.queries_UA_prime + c.queries_UB) * c.qubits;
  return s;
}

MatfunResult exp_contour(const Diagonalization& a, const LogicalOperator& b, double beta, double eps,
                         std::optional<double> sigma_hint, Exec exec) {
  check_beta_eps(beta, eps);
  const CMatrix h = assemble(a, b);
  const long N = h.rows();
  if (min_eigenvalue(h) < -hermitian_tol(h)) throw Error(ErrorKind::NotPSD, "H = A + B is not positive semidefinite");

  const Padded p = pad_system(a, b);
  const TJChoice tj = choose_T_J(beta, eps);
  QuadratureRule rule = contour_nodes(beta, tj.T, tj.J);
  const double delta_prime = eps / (2.0 * rule.sum_abs_rho);
  const SelectOracle s = select_oracle(p.a, p.b, rule, delta_prime, sigma_hint, exec);

  const long P = p.a.d.size();
  CMatrix m = CMatrix::Zero(P, P);
  for (size_t j = 0; j < s.blocks.size(); ++j) m += rule.weights[j] * s.blocks[j].matrix;

  MatfunResult r;
  r.op = LogicalOperator{m.topLeftCorner(N, N), s.alpha * rule.sum_abs_rho, eps};
  r.sigma = s.sigma;
  r.cost = s.cost;
  r.cost.achieved_error_budget = tj.bound + delta_prime * rule.sum_abs_rho;
  r.rule = std::move(rule);
  return r;
}

ScalarFn half_sign_exp(double zeta) {
  return [zeta](double y) {
    if (y == 0.0) return 0.0;
    const double v = 0.5 * std::exp(-zeta / std::abs(y));
    return y > 0.0 ? v : -v;
  };
}

ChebSeries odd_truncation(const ScalarFn& g, double tol, int max_degree) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  long M = 1L << 16;
  while (M < 4L * (max_degree + 1)) M *= 2;
  const RVector xs = chebyshev_gauss_points(M);
  std::vector<double> vals(static_cast<size_t>(M));
  for (long j = 0; j < M; ++j) vals[static_cast<size_t>(j)] = g(xs(j));
  std::vector<double> c = cheb_coeffs_from_gauss(vals);
  for (size_t k = 0; k < c.size(); k += 2) c[k] = 0.0;

  std::vector<double> tail(c.size() + 1, 0.0);
  for (size_t k = c.size(); k-- > 0;) tail[k] = tail[k + 1] + std::abs(c[k]);
  int d = 1;
  while (d < max_degree && tail[static_cast<size_t>(d) + 1] > tol) d += 2;

  const RVector grid = chebyshev_gauss_points(20000);
  const RVector uni = RVector::LinSpaced(20001, -1.0, 1.0);
  for (;;) {
    std::vector<double> cd(c.begin(), c.begin() + d + 1);
    double err = 0.0;
    for (const RVector* pts : {&grid, &uni})
      for (long i = 0; i < pts->size(); ++i) err = std::max(err, std::abs(cheb_eval(cd, (*pts)(i)) - g((*pts)(i))));
    if (err <= tol) {
      ChebSeries s;
      s.coeffs = std::move(cd);
      s.degree = d;
      s.odd = true;
      return s;
    }
    if (d + 2 > max_degree) throw Error(ErrorKind::ConvergenceFailure, "odd truncation exceeds the degree cap");
    d += 2;
  }
}

MatfunResult exp_inverse_transform(const Operand& a_inv, const Operand& b_in, double beta, double eps,
                                   std::optional<double> sigma_hint) {
  check_beta_eps(beta, eps);
  Operand b_op = b_in;
  // a vanishing B may come with alpha 0; any positive alpha encodes it
  if (auto* lo = std::get_if<LogicalOperator>(&b_op); lo && !(lo->alpha > 0.0) && lo->matrix.isZero(0.0))
    lo->alpha = 1.0;
  const long N = operand_dim(a_inv);
  if (operand_dim(b_op) != N) throw Error(ErrorKind::DimensionMismatch, "A^{-1} and B differ in size");
  const CMatrix ainv = operand_matrix(a_inv);
  const CMatrix bm = operand_matrix(b_op);
  Eigen::FullPivLU<CMatrix> lu_a(ainv);
  if (!lu_a.isInvertible()) throw Error(ErrorKind::Singular, "A^{-1} is singular");
  const CMatrix h = lu_a.inverse() + bm;
  if (min_eigenvalue(h) <= hermitian_tol(h))
    throw Error(ErrorKind::NotPositiveDefinite, "H = A + B is not positive definite");

  const double alpha_a = operand_alpha(a_inv);
  const double alpha_w = alpha_a * operand_alpha(b_op) + 1.0;
  double sigma = sigma_hint ? *sigma_hint : sigma_bounds(lu_a.inverse(), bm).lower;
  // the gap the inverse polynomial will use, and the resulting subnormalization
  const double sigma_used = std::min(sigma / alpha_w, 0.99) * alpha_w;
  double alpha_inv = 4.0 * alpha_a / (3.0 * sigma_used);

  // logical operands of other sizes are padded with decoupled levels at max(A)
  Operand a_use = a_inv, b_use = b_op;
  long P = 2;
  while (P < N) P *= 2;
  if (P != N) {
    if (is_explicit(a_inv) || is_explicit(b_op))
      throw Error(ErrorKind::DimensionMismatch, "explicit encodings must act on whole qubit registers");
    LogicalOperator ap{CMatrix::Zero(P, P), alpha_a, operand_eps(a_inv)};
    ap.matrix.topLeftCorner(N, N) = ainv;
    ap.matrix.bottomRightCorner(P - N, P - N).diagonal().setConstant(sigma_min(ainv));
    LogicalOperator bp{CMatrix::Zero(P, P), operand_alpha(b_op), operand_eps(b_op)};
    bp.matrix.topLeftCorner(N, N) = bm;
    a_use = ap;
    b_use = bp;
  }

  MatfunResult r;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double zeta = beta / alpha_inv;
    const ScalarFn g = half_sign_exp(zeta);
    ChebSeries series = odd_truncation(g, eps / 2.0);
    series.target = "half_sign_exp";
    series.beta = beta;
    series.alpha_prime = alpha_inv;
    const int d = series.degree;
    const double delta_prime = eps / (4.0 * d);
    PrecondInverse inv = precond_inverse(PrecondProblem{a_use, b_use, sigma_hint, {}}, delta_prime);
    const double got = operand_alpha(inv.encoding);
    if (std::abs(got - alpha_inv) > 1e-12 * alpha_inv && attempt == 0) {
      alpha_inv = got;
      continue;
    }
    const ChebSeries& sr = series;
    const Operand out = svt_apply([&sr](double x) { return sr(x); }, inv.encoding, SvtForm::direct);
    r.op = to_logical(out);
    r.op.matrix = r.op.matrix.topLeftCorner(N, N).eval();
    r.op.alpha = 1.0;
    r.op.eps = eps;
    r.sigma = inv.sigma;
    r.gevrey_bound_degree = gevrey_degree(0.5, 16.0 * std::numbers::e * alpha_inv / beta, 3.0, eps / 2.0);

    const int ma = operand_ancillas(a_inv), mb = operand_ancillas(b_op);
    CostReport& c = r.cost;
    c.poly_degree = d;
    c.degree_bound = r.gevrey_bound_degree;
    c.queries_UA_prime = static_cast<double>(d) * inv.cost.queries_UA_prime;
    c.queries_UB = static_cast<double>(d) * inv.cost.queries_UB;
    c.qubits = log2_exact(P) + 2 * ma + mb + 4;
    c.primitive_gate_proxy = (2.0 * ma + mb + 4.0) * d + (c.queries_UA_prime + c.queries_UB) * c.qubits;
    c.achieved_error_budget = eps;
    r.series = std::move(series);
    return r;
  }
  throw Error(ErrorKind::ConvergenceFailure, "inverse subnormalization did not settle");
}

double gevrey_certificate_ratio(double zeta, int k_max, int samples) {
  if (!(zeta > 0.0)) throw Error(ErrorKind::InvalidArgument, "zeta must be positive");
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  const ScalarFn g = [zeta](double y) {
    if (y == 0.0) return 0.0;
    const double v = std::exp(-zeta / std::abs(y));
    return y > 0.0 ? v : -v;
  };
  const double R = 16.0 * std::numbers::e / zeta;
  const int half = samples / 2;
  std::vector<double> ys;
  for (int i = 0; i < half; ++i) {
    const double y = 0.05 + 0.95 * i / std::max(1, half - 1);
    ys.push_back(y);
    ys.push_back(-y);
  }
  double worst = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double h = 1e-2 * (1.0 + 0.25 * (k - 1));
    const double bound = std::pow(R, k) * std::pow(std::tgamma(k + 1.0), 3);
    for (double y : ys) worst = std::max(worst, std::abs(fd_derivative(g, y, k, h, 8)) / bound);
  }
  return worst;
}

GibbsRoute parse_gibbs_route(const std::string& s) {
  if (s == "contour") return GibbsRoute::contour;
  if (s == "inverse") return GibbsRoute::inverse;
  throw Error(ErrorKind::ConfigInvalid, "unknown Gibbs route '" + s + "'");
}

const char* to_string(GibbsRoute r) { return r == GibbsRoute::contour ? "contour" : "inverse"; }

CMatrix dense_expm_hermitian(const CMatrix& h, double beta) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  const RVector e = (-beta * es.eigenvalues().array()).exp();
  return es.eigenvectors() * e.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

GibbsResult purified_gibbs(const Diagonalization& a, const LogicalOperator& b, double beta, GibbsRoute route,
                           double eps, Exec exec) {
  check_beta_eps(beta, eps);
  const CMatrix h = assemble(a, b);
  const long N = h.rows();
  if (min_eigenvalue(h) < -hermitian_tol(h)) throw Error(ErrorKind::NotPSD, "H = A + B is not positive semidefinite");

  const CMatrix exact_half = dense_expm_hermitian(h, beta / 2.0);
  const double z = exact_half.squaredNorm();
  const double xi_exact = std::sqrt(z / static_cast<double>(N));
  // operator error e on e^{-beta H/2} moves the reduced state by about 2e(2+e)/xi^2 in trace norm
  const double inner = std::min(0.5, eps * xi_exact * xi_exact / 6.0);

  GibbsResult g;
  g.route = route;
  CMatrix m;
  if (route == GibbsRoute::contour) {
    MatfunResult r = exp_contour(a, b, beta / 2.0, inner, std::nullopt, exec);
    m = r.op.matrix;
    g.cost = r.cost;
  } else {
    const Padded p = pad_system(a, b);
    std::vector<cplx> vals(static_cast<size_t>(p.a.d.size()));
    for (long k = 0; k < p.a.d.size(); ++k) vals[static_cast<size_t>(k)] = p.a.d(k);
    const LogicalOperator a_inv = normal_inverse_logical(p.a.v, DiagonalOracle::make(vals));
    MatfunResult r = exp_inverse_transform(a_inv, p.b, beta / 2.0, inner / 2.0);
    m = 2.0 * r.op.matrix.topLeftCorner(N, N);
    g.cost = r.cost;
  }

  g.state = CVector::Zero(N * N);
  for (long x = 0; x < N; ++x) g.state.segment(x * N, N) = m.col(x);
  const double norm = g.state.norm();
  g.xi = norm / std::sqrt(static_cast<double>(N));
  g.xi_exact = xi_exact;
  g.state /= norm;
  g.reduced = m * m.adjoint() / (norm * norm);

  const CMatrix rho = dense_expm_hermitian(h, beta) / z;
  const CMatrix diff = 0.5 * ((g.reduced - rho) + (g.reduced - rho).adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  g.trace_dist_to_exact = 0.5 * es.eigenvalues().cwiseAbs().sum();
  g.cost.achieved_error_budget = eps;
  return g;
}

}  // namespace qprecon
