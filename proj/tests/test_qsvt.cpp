#include <cmath>

#include "doctest.h"
#include "qprecon/qsvt.hpp"
#include "test_util.hpp"

using namespace qprecon;
using namespace testutil;

namespace {

// Independent evaluation through T_k(x) = cos(k arccos x).
double eval_trig(const std::vector<double>& c, double x) {
  const double th = std::acos(x);
  double s = 0.0;
  for (size_t k = 0; k < c.size(); ++k) s += c[k] * std::cos(static_cast<double>(k) * th);
  return s;
}

CMatrix pauli_sum_diag(int n) {
  const long N = 1L << n;
  CMatrix d = CMatrix::Zero(N, N);
  for (long i = 0; i < N; ++i) {
    double v = n + 1;
    for (int j = 0; j < n; ++j) v += ((i >> j) & 1) ? -1.0 : 1.0;
    d(i, i) = v;
  }
  return d;
}

}  // namespace

TEST_SUITE("qsvt") {

TEST_CASE("inverse polynomial at delta = 0.1, eps' = 1e-3") {
  OddPolynomial p = inverse_poly(0.1, 1e-3);
  PolyCheck c = check_inverse_poly(p, 100000);
  CHECK(c.max_err_on_band <= 1e-3);
  CHECK(c.max_abs <= 1.0 + 1e-8);
  CHECK(std::abs(p(0.1) - 0.75) <= 1e-3);
  CHECK(p.degree <= inverse_poly_degree_cap(0.1, 1e-3));
  for (size_t k = 0; k < p.coeffs.size(); k += 2) CHECK(p.coeffs[k] == 0.0);
  CHECK(p(-0.37) == -p(0.37));
  // independent evaluation path
  for (double x : {0.1, 0.25, 0.5, 0.77, 1.0}) CHECK(std::abs(eval_trig(p.coeffs, x) - p(x)) < 1e-12);
}

TEST_CASE("inverse polynomial over a parameter sweep stays under the cap") {
  for (auto [d, e] : std::vector<std::pair<double, double>>{{0.4, 1e-6}, {0.05, 1e-8}, {0.2, 1e-10}, {0.3, 1e-12}}) {
    OddPolynomial p = inverse_poly(d, e);
    CHECK(p.certified_error <= e);
    CHECK(p.certified_max_abs <= 1.0 + 1e-8);
    const double C = p.degree / ((1.0 / d) * std::log(1.0 / e));
    CHECK(C < 10.0);
    CHECK(C > 1.0);
  }
}

TEST_CASE("inverse polynomial input validation") {
  CHECK_THROWS_AS(inverse_poly(0.0, 1e-3), Error);
  CHECK_THROWS_AS(inverse_poly(1.0, 1e-3), Error);
  CHECK_THROWS_AS(inverse_poly(0.5, 0.0), Error);
}

TEST_CASE("identity transform leaves the block unchanged") {
  std::mt19937_64 rng(2);
  CMatrix g = random_with_norm(rng, 4, 0.8);
  BlockEncoding be = unitary_completion(g, 1);
  BlockEncoding t = svt_apply([](double x) { return x; }, be);
  CHECK(max_abs(t.block() - g) < 1e-12);
  CHECK(t.m == 2);
  CHECK(unitarity_residual(t.unitary) < 1e-10);
}

TEST_CASE("diagonal inverse through the polynomial") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 0.5;
  a(1, 1) = 1.0;
  OddPolynomial p = inverse_poly(0.4, 1e-6);
  LogicalOperator t = svt_apply([&](double x) { return p(x); }, LogicalOperator{a, 1.0, 0.0}, SvtForm::adjoint);
  CMatrix expect = CMatrix::Zero(2, 2);
  expect(0, 0) = 0.6;
  expect(1, 1) = 0.3;
  CHECK(max_abs(t.matrix - expect) < 1e-5);
}

TEST_CASE("adjoint transform inverts A up to 3 delta / 4") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    CMatrix a = random_matrix(rng, 4, 4);
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RVector s = svd.singularValues();
    const double alpha = s(0) * 1.05;
    const double delta = s(3) / alpha * 0.99;
    if (delta < 0.02) continue;
    const double ep = 1e-7;
    OddPolynomial p = inverse_poly(delta, ep);
    LogicalOperator t = svt_apply([&](double x) { return p(x); }, LogicalOperator{a, alpha, 0.0}, SvtForm::adjoint);
    CMatrix lhs = (4.0 / (3.0 * delta)) * t.matrix;
    CMatrix rhs = (a / alpha).inverse();
    CHECK(spectral_norm(lhs - rhs) <= 4.0 * ep / (3.0 * delta));
    CHECK(spectral_norm(t.matrix * (a / alpha) - 0.75 * delta * CMatrix::Identity(4, 4)) <= 2.0 * ep);
  }
}

TEST_CASE("solve with identity") {
  std::mt19937_64 rng(6);
  CVector b = random_state(rng, 4);
  SolveResult r = qsvt_solve({CMatrix::Identity(4, 4), 1.0, 0.0}, b, 1e-6);
  CHECK((r.state - b).norm() < 1e-6);
  CHECK(r.xi == doctest::Approx(1.0));
  CHECK(r.cost.queries_Ub == doctest::Approx(1.0));
}

TEST_CASE("solve with the Pauli-sum diagonal") {
  CMatrix d = pauli_sum_diag(2);
  CHECK(std::abs(d(0, 0) - 5.0) < 1e-15);
  CHECK(std::abs(d(3, 3) - 1.0) < 1e-15);
  CVector b11 = CVector::Zero(4);
  b11(3) = 1.0;
  SolveResult r = qsvt_solve({d, 5.0, 0.0}, b11, 1e-6);
  CHECK(r.xi == doctest::Approx(1.0));
  CHECK((r.state - b11).norm() < 1e-6);
  CHECK(r.cost.queries_Ub == doctest::Approx(1.0));

  CVector b00 = CVector::Zero(4);
  b00(0) = 1.0;
  SolveResult r0 = qsvt_solve({d, 5.0, 0.0}, b00, 1e-6);
  CHECK(r0.xi == doctest::Approx(0.2));
  CHECK(r0.kappa == doctest::Approx(5.0));
  CHECK(r0.cost.queries_Ub == doctest::Approx(5.0));
}

TEST_CASE("solve matches dense oracle on random well-conditioned instances") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 50; ++rep) {
    CMatrix a = random_matrix(rng, 4, 4) + 3.0 * random_unitary(rng, 4);
    if (sigma_min(a) < 0.3) continue;
    CVector b = random_state(rng, 4);
    const double eps = 1e-5;
    SolveResult r = qsvt_solve({a, spectral_norm(a) * 1.1, 0.0}, b, eps);
    CVector x = a.fullPivLu().solve(b);
    x /= x.norm();
    CHECK((r.state - x).norm() <= eps);
  }
}

TEST_CASE("cost model monotonicity") {
  // kappa grows with fixed xi and norm
  double prev = 0.0;
  for (double smin : {0.5, 0.2, 0.1, 0.05}) {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = smin;
    CVector b = CVector::Zero(2);
    b(0) = 1.0;  // xi = 1
    SolveResult r = qsvt_solve({a, 1.0, 0.0}, b, 1e-4);
    CHECK(r.cost.queries_UA_prime >= prev);
    prev = r.cost.queries_UA_prime;
  }
  // xi grows at fixed kappa
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 0.1;
  double prev_ua = 1e300, prev_ub = 1e300;
  for (double w : {0.0, 0.3, 0.6, 0.9, 1.0}) {
    CVector b(2);
    b << std::sqrt(1 - w * w), w;
    SolveResult r = qsvt_solve({a, 1.0, 0.0}, b, 1e-4);
    CHECK(r.cost.queries_UA_prime <= prev_ua);
    CHECK(r.cost.queries_Ub <= prev_ub);
    prev_ua = r.cost.queries_UA_prime;
    prev_ub = r.cost.queries_Ub;
  }
}

TEST_CASE("singular operator is rejected") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  CVector b = CVector::Zero(2);
  b(0) = 1.0;
  try {
    qsvt_solve({a, 1.0, 0.0}, b, 1e-3);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Singular);
  }
}

}  // TEST_SUITE
