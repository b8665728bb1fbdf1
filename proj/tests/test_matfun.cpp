#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "qprecon/fastinv.hpp"
#include "qprecon/matfun.hpp"
#include "test_util.hpp"

using namespace qprecon;
using namespace testutil;

namespace {

Diagonalization diag_parts(std::initializer_list<double> d) {
  Diagonalization a;
  a.d = RVector::Zero(static_cast<long>(d.size()));
  long k = 0;
  for (double x : d) a.d(k++) = x;
  a.v = CMatrix::Identity(a.d.size(), a.d.size());
  return a;
}

LogicalOperator zero_op(long n) { return LogicalOperator{CMatrix::Zero(n, n), 0.0, 0.0}; }

CMatrix expm(const CMatrix& h, double beta) {
  CMatrix m = -beta * h;
  return m.exp();
}

double op_norm(const CMatrix& m) { return spectral_norm(m); }

ScalarFn sign_exp(double zeta) {
  return [zeta](double y) {
    if (y == 0.0) return 0.0;
    const double v = std::exp(-zeta / std::abs(y));
    return y > 0.0 ? v : -v;
  };
}

}  // namespace

TEST_SUITE("matfun") {

TEST_CASE("Gauss-Legendre nodes and exactness") {
  GaussLegendre g = gauss_legendre(5);
  CHECK(g.nodes[2] == 0.0);
  CHECK(g.nodes[4] == doctest::Approx(0.9061798459386640).epsilon(1e-14));
  CHECK(g.weights[4] == doctest::Approx(0.2369268850561891).epsilon(1e-14));
  CHECK(g.weights[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-14));
  for (int J : {2, 7, 40}) {
    GaussLegendre q = gauss_legendre(J);
    for (int p = 0; p <= 2 * J - 1; ++p) {
      double s = 0.0;
      for (int j = 0; j < J; ++j) s += q.weights[static_cast<size_t>(j)] * std::pow(q.nodes[static_cast<size_t>(j)], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("contour parameters") {
  QuadratureRule r3 = contour_nodes(3.0, 2.0, 16);
  CHECK(r3.b == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(r3.zeta == doctest::Approx(5.0 / 18.0).epsilon(1e-15));
  QuadratureRule r6 = contour_nodes(6.0, 2.0, 16);
  CHECK(r6.b == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(r6.zeta == doctest::Approx(11.0 / 72.0).epsilon(1e-15));
  for (double beta : {0.1, 0.5, 1.0, 3.0, 6.0, 50.0}) CHECK(beta * contour_nodes(beta, 1.0, 4).zeta <= 1.0);

  // nodes lie on the parabola
  for (size_t j = 0; j < r3.nodes.size(); ++j) {
    const double t = r3.t[j];
    CHECK(std::abs(r3.nodes[j] - cplx(t * t - r3.zeta, t)) < 1e-15);
  }
  CHECK_THROWS_AS(contour_nodes(1.0, 0.5, 10), Error);
  CHECK_THROWS_AS(contour_nodes(1.0, 2.0, 1), Error);
}

TEST_CASE("central node weight") {
  // odd J puts a node at t = 0; the orientation sign is folded into rho
  const double beta = 2.0, T = 3.0;
  QuadratureRule r = contour_nodes(beta, T, 21);
  const size_t mid = 10;
  CHECK(r.t[mid] == 0.0);
  CHECK(std::abs(r.nodes[mid] - cplx(-r.zeta, 0.0)) < 1e-15);
  const double expected = -T * r.w[mid] * std::exp(beta * r.zeta) / (2.0 * std::numbers::pi);
  CHECK(std::abs(r.weights[mid] - cplx(expected, 0.0)) < 1e-14);
}

TEST_CASE("quadrature bound values and monotonicity") {
  CHECK(quadrature_error_bound(1.0, 3.0, 200) == doctest::Approx(0.003922349813760698).epsilon(1e-12));
  CHECK(quadrature_error_bound(1.0, 3.0, 200, QuadBoundForm::max_beta) ==
        doctest::Approx(621.89256337501502).epsilon(1e-12));
  for (QuadBoundForm f : {QuadBoundForm::min_beta, QuadBoundForm::max_beta}) {
    const double first = quadrature_error_bound(2.0, 2.5, 10, f);
    double prev = first;
    for (int J = 20; J <= 2000; J += 10) {
      const double b = quadrature_error_bound(2.0, 2.5, J, f);
      CHECK(b <= prev);
      prev = b;
    }
    CHECK(prev < first);
  }
}

TEST_CASE("quadrature bound holds empirically") {
  for (double beta : {0.5, 1.0, 3.0, 10.0}) {
    for (double eps : {1e-3, 1e-6}) {
      TJChoice tj = choose_T_J(beta, eps);
      QuadratureRule r = contour_nodes(beta, tj.T, tj.J);
      const double emp = quadrature_empirical_error(r);
      INFO("beta " << beta << " eps " << eps << " T " << tj.T << " J " << tj.J);
      CHECK(emp <= quadrature_error_bound(beta, tj.T, tj.J, QuadBoundForm::max_beta));
      CHECK(emp <= quadrature_error_bound(beta, tj.T, tj.J, QuadBoundForm::min_beta));
      CHECK(emp <= eps / 2.0);
    }
  }
}

TEST_CASE("choose T and J") {
  TJChoice a = choose_T_J(1.0, 1e-6);
  CHECK(a.T == 4.0);
  CHECK(a.J == 1346);
  CHECK(a.bound <= 5e-7);
  CHECK(quadrature_error_bound(1.0, a.T, a.J - 1, QuadBoundForm::max_beta) > 5e-7);

  TJChoice hot = choose_T_J(10.0, 1e-6);
  CHECK(hot.T == 1.25);
  CHECK(hot.J == 1327);
  CHECK(hot.T < a.T);

  int prev = 0;
  for (double eps = 1e-2; eps > 1e-12; eps /= 2) {
    TJChoice c = choose_T_J(2.0, eps);
    CHECK(c.J >= prev);
    prev = c.J;
  }
  CHECK_THROWS_AS(choose_T_J(0.01, 1e-3), Error);
  try {
    choose_T_J(0.01, 1e-3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoFeasiblePoint);
  }
}

TEST_CASE("sum of |rho| decays like beta^{-1/2}") {
  auto sum_rho = [](double beta) {
    TJChoice tj = choose_T_J(beta, 1e-6);
    return contour_nodes(beta, tj.T, tj.J).sum_abs_rho;
  };
  const double s1 = sum_rho(1.0), s4 = sum_rho(4.0), s16 = sum_rho(16.0), s64 = sum_rho(64.0);
  CHECK(s1 == doctest::Approx(0.59754990343005354).epsilon(1e-9));
  CHECK(s4 == doctest::Approx(0.40614350097908936).epsilon(1e-9));
  // e^{beta zeta} still varies at small beta; the ratio settles to 1/2 later
  CHECK(s4 / s1 > 0.5);
  CHECK(s4 / s1 < 0.75);
  CHECK(s64 / s16 == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("Chebyshev coefficients of simple targets") {
  ChebSeries lin = chebyshev_coeffs([](double y) { return y; }, 10);
  CHECK(lin.coeffs[1] == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k <= 10; ++k)
    if (k != 1) CHECK(std::abs(lin.coeffs[static_cast<size_t>(k)]) <= 1e-14);
  ChebSeries t3 = chebyshev_coeffs([](double y) { return 4 * y * y * y - 3 * y; }, 10);
  CHECK(t3.coeffs[3] == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k <= 10; ++k)
    if (k != 3) CHECK(std::abs(t3.coeffs[static_cast<size_t>(k)]) <= 1e-14);
}

TEST_CASE("odd target has vanishing even coefficients") {
  ChebSeries s = chebyshev_coeffs(half_sign_exp(0.7), 151);
  for (size_t k = 0; k < s.coeffs.size(); k += 2) CHECK(std::abs(s.coeffs[k]) <= 1e-12);
}

TEST_CASE("truncation error stays below the derivative bound") {
  const ScalarFn g = sign_exp(1.0);
  const int d = 200;
  ChebSeries s = chebyshev_coeffs(g, d);
  const RVector ys = RVector::LinSpaced(10000, -1.0, 1.0);
  double err = 0.0;
  for (long i = 0; i < ys.size(); ++i) err = std::max(err, std::abs(s(ys(i)) - g(ys(i))));
  for (int r = 1; r <= 8; ++r) {
    // sup of |g^{(r+1)}| by dense sampling; g is odd
    double sup = 0.0;
    for (int i = 1; i <= 2000; ++i) {
      const double y = i / 2000.0;
      sup = std::max(sup, std::abs(fd_derivative(g, y, r + 1, 2e-3 * (r + 1), 8)));
    }
    INFO("r = " << r);
    CHECK(err <= chebyshev_truncation_bound(r, sup, d));
  }
}

TEST_CASE("Gevrey degree formula") {
  const double R = 16.0 * std::numbers::e;
  CHECK(gevrey_degree(1.0, R, 3.0, 1e-3) == 64278736.0);
  CHECK(gevrey_degree(1.0, 2 * R, 3.0, 1e-3) > 2 * gevrey_degree(1.0, R, 3.0, 1e-3));
  // the bound is an upper bound only
  ChebSeries s = odd_truncation(sign_exp(1.0), 1e-3);
  CHECK(s.degree < 200);
  CHECK(s.degree < 1e-4 * gevrey_degree(1.0, R, 3.0, 1e-3));
}

TEST_CASE("Gevrey certificate by finite differences") {
  for (double zeta : {0.3, 1.0, 2.0}) CHECK(gevrey_certificate_ratio(zeta) <= 1.0);
}

TEST_CASE("odd truncation meets its tolerance") {
  for (double zeta : {0.2, 1.0}) {
    const ScalarFn g = half_sign_exp(zeta);
    ChebSeries s = odd_truncation(g, 1e-6);
    CHECK(s.degree % 2 == 1);
    double err = 0.0;
    for (int i = 0; i <= 30000; ++i) {
      const double y = -1.0 + i / 15000.0;
      err = std::max(err, std::abs(s(y) - g(y)));
    }
    CHECK(err <= 1e-6);
  }
}

TEST_CASE("contour shift sign") {
  CHECK(contour_shift(cplx(1.0, 0.5)) == cplx(0.0, 1.0));
  CHECK(contour_shift(cplx(1.0, -0.5)) == cplx(0.0, -1.0));
  CHECK(contour_shift(cplx(-0.2, 0.0)) == cplx(0.0, -1.0));
  QuadratureRule r = contour_nodes(1.0, 2.0, 8);
  for (const cplx& z : r.nodes) CHECK((contour_shift(z).imag() > 0) == (z.imag() > 0));
}

TEST_CASE("select oracle blocks on a diagonal Hamiltonian") {
  Diagonalization a = diag_parts({0.3, 1.0, 2.0, 5.0});
  QuadratureRule r = contour_nodes(1.0, 3.0, 12);
  const double dp = 1e-6;
  SelectOracle s = select_oracle(a, zero_op(4), r, dp);
  REQUIRE(s.blocks.size() == 12);
  for (size_t j = 0; j < s.blocks.size(); ++j) {
    CMatrix exact = CMatrix::Zero(4, 4);
    for (long k = 0; k < 4; ++k) exact(k, k) = 1.0 / (r.nodes[j] - a.d(k));
    CHECK(op_norm(s.blocks[j].matrix - exact) <= dp);
    CHECK(s.blocks[j].alpha == doctest::Approx(s.alpha));
  }
  CHECK(s.alpha == doctest::Approx(4.0 / (3.0 * s.sigma)));
  CMatrix big = s.dense();
  CHECK(big.rows() == 48);
  CHECK(op_norm(big.block(4, 4, 4, 4) - s.blocks[1].matrix) == 0.0);
}

TEST_CASE("select oracle blocks on a coupled 2x2 Hamiltonian") {
  std::mt19937_64 rng(7);
  Diagonalization a = diag_parts({0.5, 2.0});
  CMatrix bm = random_hermitian(rng, 2);
  bm *= 0.3 / spectral_norm(bm);
  const CMatrix h = CMatrix(a.d.cast<cplx>().asDiagonal()) + bm;
  REQUIRE(Eigen::SelfAdjointEigenSolver<CMatrix>(h).eigenvalues()(0) > 0.0);
  QuadratureRule r = contour_nodes(1.0, 3.0, 8);
  const double dp = 1e-7;
  SelectOracle s = select_oracle(a, LogicalOperator{bm, 0.3, 0.0}, r, dp);
  for (size_t j = 0; j < 8; ++j) {
    const CMatrix exact = (r.nodes[j] * CMatrix::Identity(2, 2) - h).inverse();
    CHECK(op_norm(s.blocks[j].matrix - exact) <= dp);
  }
  CHECK(s.sigma == doctest::Approx(default_contour_sigma(1.0, 0.3)).epsilon(1e-12));
}

TEST_CASE("contour exponential of diag(0.2, 1, 4)") {
  Diagonalization a = diag_parts({0.2, 1.0, 4.0});
  MatfunResult r = exp_contour(a, zero_op(3), 1.0, 1e-6);
  const CMatrix exact = expm(CMatrix(a.d.cast<cplx>().asDiagonal()), 1.0);
  REQUIRE(r.op.matrix.rows() == 3);
  CHECK(op_norm(r.op.matrix - exact) <= 1e-6);
  REQUIRE(r.rule.has_value());
  CHECK(r.op.alpha == doctest::Approx(r.rule->sum_abs_rho * 4.0 / (3.0 * r.sigma)));
  CHECK(r.cost.achieved_error_budget <= 1e-6);
  CHECK(r.cost.poly_degree > 0);
}

TEST_CASE("contour exponential with a zero eigenvalue and coupling") {
  std::mt19937_64 rng(11);
  Diagonalization a;
  a.v = random_unitary(rng, 4);
  a.d = RVector(4);
  a.d << 0.0, 0.5, 1.5, 3.0;
  const CMatrix h = a.v * a.d.cast<cplx>().asDiagonal() * a.v.adjoint();
  MatfunResult r = exp_contour(a, zero_op(4), 2.0, 1e-4);
  CHECK(op_norm(r.op.matrix - expm(h, 2.0)) <= 1e-4);
  const CVector ground = a.v.col(0);
  CHECK(std::abs(ground.dot(r.op.matrix * ground) - 1.0) <= 1e-4);

  CMatrix bm = random_hermitian(rng, 4);
  bm *= 0.2 / spectral_norm(bm);
  Diagonalization shifted = a;
  shifted.d.array() += 0.2;
  const CMatrix h2 = a.v * shifted.d.cast<cplx>().asDiagonal() * a.v.adjoint() + bm;
  MatfunResult r2 = exp_contour(shifted, LogicalOperator{bm, 0.2, 0.0}, 1.0, 1e-5);
  CHECK(op_norm(r2.op.matrix - expm(h2, 1.0)) <= 1e-5);
}

TEST_CASE("contour exponential rejects indefinite H") {
  Diagonalization a = diag_parts({-1.0, 1.0});
  CHECK_THROWS_AS(exp_contour(a, zero_op(2), 1.0, 1e-3), Error);
  try {
    exp_contour(a, zero_op(2), 1.0, 1e-3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPSD);
  }
}

TEST_CASE("inverse-transform exponential") {
  CMatrix am = CMatrix::Zero(2, 2);
  am(0, 0) = 2.0;
  am(1, 1) = 3.0;
  const CMatrix bm = 0.1 * pauli_x();
  const LogicalOperator a_inv{am.inverse(), 0.5, 0.0};
  const LogicalOperator b_op{bm, 0.1, 0.0};
  MatfunResult r = exp_inverse_transform(a_inv, b_op, 1.0, 1e-4);
  CHECK(op_norm(r.op.matrix - 0.5 * expm(am + bm, 1.0)) <= 1e-4);
  REQUIRE(r.series.has_value());
  for (size_t k = 0; k < r.series->coeffs.size(); k += 2) CHECK(r.series->coeffs[k] == 0.0);
  CHECK(r.cost.degree_bound >= r.cost.poly_degree);
  CHECK(r.cost.poly_degree == r.series->degree);

  // agreement with the contour route after the factor 1/2
  Diagonalization parts = diag_parts({2.0, 3.0});
  MatfunResult c = exp_contour(parts, b_op, 1.0, 1e-4);
  CHECK(op_norm(2.0 * r.op.matrix - c.op.matrix) <= 2e-4 + 1e-4);
}

TEST_CASE("inverse transform on a three-level system") {
  std::mt19937_64 rng(12);
  const CMatrix v = random_unitary(rng, 3);
  const CMatrix am = v * RVector(RVector::Map(std::vector<double>{0.6, 1.0, 2.5}.data(), 3)).cast<cplx>().asDiagonal() *
                     v.adjoint();
  CMatrix bm = random_hermitian(rng, 3);
  bm *= 0.2 / spectral_norm(bm);
  const CMatrix ainv = am.inverse();
  MatfunResult r = exp_inverse_transform(LogicalOperator{ainv, spectral_norm(ainv), 0.0}, LogicalOperator{bm, 0.2, 0.0},
                                         1.0, 1e-4);
  REQUIRE(r.op.matrix.rows() == 3);
  CHECK(op_norm(r.op.matrix - 0.5 * expm(am + bm, 1.0)) <= 1e-4);
  CHECK(r.cost.qubits == 2 + 4);
}

TEST_CASE("inverse transform on an explicit encoding") {
  std::mt19937_64 rng(3);
  const CMatrix v = random_unitary(rng, 2);
  NormalInverse ni = fast_invert_normal(v, DiagonalOracle::make({cplx(1.5), cplx(4.0)}));
  const CMatrix am = v * RVector(RVector::Map(std::vector<double>{1.5, 4.0}.data(), 2)).cast<cplx>().asDiagonal() *
                     v.adjoint();
  const BlockEncoding b = unitary_completion(pauli_z(), 1, 0.25);
  MatfunResult r = exp_inverse_transform(ni.encoding, b, 0.5, 1e-3);
  CHECK(op_norm(r.op.matrix - 0.5 * expm(am + 0.25 * pauli_z(), 0.5)) <= 1e-3);
}

TEST_CASE("inverse transform rejects H that is not positive definite") {
  const LogicalOperator a_inv{CMatrix::Identity(2, 2), 1.0, 0.0};
  CMatrix bm = CMatrix::Zero(2, 2);
  bm(0, 0) = -2.0;
  try {
    exp_inverse_transform(a_inv, LogicalOperator{bm, 2.0, 0.0}, 1.0, 1e-3);
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
  }
}

TEST_CASE("purified Gibbs state of H = 0") {
  Diagonalization a = diag_parts({0.0, 0.0});
  GibbsResult g = purified_gibbs(a, zero_op(2), 1.0, GibbsRoute::contour, 1e-6);
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK((g.state - bell).norm() <= 1e-6);
  CHECK(g.xi == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(g.xi_exact == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("purified Gibbs reduced state of diag(0, E)") {
  const double E = 1.3, eps = 1e-5;
  Diagonalization a = diag_parts({0.0, E});
  GibbsResult g = purified_gibbs(a, zero_op(2), 1.0, GibbsRoute::contour, eps);
  const double z = 1.0 + std::exp(-E);
  CHECK(std::abs(g.reduced(0, 0) - 1.0 / z) <= eps);
  CHECK(std::abs(g.reduced(1, 1) - std::exp(-E) / z) <= eps);
  CHECK(std::abs(g.reduced(0, 1)) <= eps);
  CHECK(2.0 * g.trace_dist_to_exact <= eps);
  CHECK(std::abs(g.xi - std::sqrt(z / 2.0)) <= eps);

  Diagonalization pd = diag_parts({0.4, 0.4 + E});
  GibbsResult gi = purified_gibbs(pd, zero_op(2), 1.0, GibbsRoute::inverse, 1e-4);
  CHECK(2.0 * gi.trace_dist_to_exact <= 1e-4);
  CHECK(std::abs(gi.xi - gi.xi_exact) <= 1e-4);
  CHECK(std::abs(gi.reduced(1, 1) - std::exp(-E) / z) <= 1e-4);
}

TEST_CASE("xi identity") {
  std::mt19937_64 rng(5);
  for (long n : {2, 4, 8}) {
    CMatrix h = random_hermitian(rng, n);
    const CMatrix m = expm(h, 0.5);
    CVector maxent = CVector::Zero(n * n);
    for (long x = 0; x < n; ++x) maxent(x * n + x) = 1.0 / std::sqrt(static_cast<double>(n));
    CVector out = CVector::Zero(n * n);
    for (long x = 0; x < n; ++x) out.segment(x * n, n) = m * maxent.segment(x * n, n);
    const double zb = expm(h, 1.0).trace().real();
    CHECK(std::abs(out.norm() - std::sqrt(zb / n)) <= 1e-10);
  }
}

TEST_CASE("purified Gibbs of a random Hamiltonian on three qubits") {
  std::mt19937_64 rng(8);
  Diagonalization a;
  a.v = random_unitary(rng, 8);
  a.d = RVector(8);
  a.d << 0.0, 0.3, 0.7, 1.0, 1.6, 2.2, 2.9, 3.5;
  CMatrix bm = random_hermitian(rng, 8);
  bm *= 0.1 / spectral_norm(bm);
  const CMatrix h = a.v * a.d.cast<cplx>().asDiagonal() * a.v.adjoint() + bm;
  a.d.array() += 0.2;
  const CMatrix hs = h + 0.2 * CMatrix::Identity(8, 8);
  GibbsResult g = purified_gibbs(a, LogicalOperator{bm, 0.1, 0.0}, 2.0, GibbsRoute::contour, 1e-4);
  const CMatrix rho = expm(hs, 2.0) / expm(hs, 2.0).trace();
  CHECK(op_norm(g.reduced - rho) <= 1e-4);
  CHECK(std::abs(g.xi - std::sqrt(expm(hs, 2.0).trace().real() / 8.0)) <= 1e-4);
}

TEST_CASE("Gibbs route names") {
  CHECK(parse_gibbs_route("contour") == GibbsRoute::contour);
  CHECK(parse_gibbs_route("inverse") == GibbsRoute::inverse);
  CHECK(std::string(to_string(GibbsRoute::inverse)) == "inverse");
  CHECK_THROWS_AS(parse_gibbs_route("other"), Error);
}

}  // TEST_SUITE
