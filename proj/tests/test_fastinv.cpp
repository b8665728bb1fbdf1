#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qprecon/fastinv.hpp"
#include "test_util.hpp"

using namespace qprecon;
using namespace testutil;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> pauli_sum_values(int n) {
  std::vector<cplx> v;
  for (long i = 0; i < (1L << n); ++i) {
    double d = n + 1;
    for (int j = 0; j < n; ++j) d += ((i >> j) & 1) ? -1.0 : 1.0;
    v.push_back(d);
  }
  return v;
}

CMatrix hadamard() {
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

}  // namespace

TEST_SUITE("fastinv") {

TEST_CASE("diagonal inverse of the Pauli-sum diagonal") {
  DiagonalOracle o = DiagonalOracle::make(pauli_sum_values(2), 1.0);
  BlockEncoding be = fast_invert_diagonal(o);
  CHECK(be.m == 1);
  CHECK(be.alpha == 1.0);
  CHECK(unitarity_residual(be.unitary) < 1e-12);
  CMatrix expect = CMatrix::Zero(4, 4);
  expect.diagonal() << 0.2, 1.0 / 3.0, 1.0 / 3.0, 1.0;
  CHECK(max_abs(be.block() - expect) < 1e-10);

  CVector b = CVector::Zero(4);
  b(0) = 1.0;
  CHECK(success_probability(o, b) == doctest::Approx(1.0 / 25.0).epsilon(1e-14));
}

TEST_CASE("diagonal oracle validation") {
  CHECK_THROWS_AS(DiagonalOracle::make({1.0, 0.0}), Error);
  try {
    DiagonalOracle::make({1.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDiagonal);
  }
  CHECK_THROWS_AS(DiagonalOracle::make({1.0, 0.5}, 1.0), Error);
  DiagonalOracle o = DiagonalOracle::make({2.0, cplx(0, -4.0)});
  CHECK(o.alpha_prime == doctest::Approx(0.5));
}

TEST_CASE("Grover-style diagonal") {
  const long N = 16;
  const long w = 5;
  std::vector<cplx> vals(N, std::sqrt(static_cast<double>(N)));
  vals[w] = 1.0;
  DiagonalOracle o = DiagonalOracle::make(vals);
  CVector b = CVector::Constant(N, 1.0 / std::sqrt(static_cast<double>(N)));
  const double xi = std::sqrt(success_probability(o, b)) * o.alpha_prime;
  CHECK(xi == doctest::Approx(std::sqrt(31.0) / 16.0).epsilon(1e-13));
  CHECK(xi == doctest::Approx(0.3480).epsilon(1e-3));
}

TEST_CASE("success probability equals (xi / alpha')^2 on random draws") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.1, 3.0), ph(0.0, 2 * kPi);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<cplx> vals;
    for (int i = 0; i < 8; ++i) vals.push_back(std::polar(u(rng), ph(rng)));
    DiagonalOracle o = DiagonalOracle::make(vals, 1.5 / DiagonalOracle::make(vals).min_abs());
    CVector b = random_state(rng, 8);
    BlockEncoding be = fast_invert_diagonal(o);
    CVector full = CVector::Zero(16);
    full.head(8) = b;
    const double measured = (be.unitary * full).head(8).squaredNorm();
    CMatrix dinv = CMatrix::Zero(8, 8);
    for (int i = 0; i < 8; ++i) dinv(i, i) = 1.0 / vals[i];
    const double xi = (dinv * b).norm();
    CHECK(success_probability(o, b) == doctest::Approx(xi * xi / (o.alpha_prime * o.alpha_prime)).epsilon(1e-12));
    CHECK(measured == doctest::Approx(xi * xi / (o.alpha_prime * o.alpha_prime)).epsilon(1e-12));
  }
}

TEST_CASE("normal inverse with Hadamard gives X") {
  DiagonalOracle o = DiagonalOracle::make({1.0, -1.0});
  NormalInverse r = fast_invert_normal(hadamard(), o);
  CHECK(max_abs(r.encoding.block() - pauli_x()) < 1e-12);
  CHECK(r.cost.queries_V == 1);
  CHECK(r.cost.queries_V_inv == 1);
  CHECK(r.cost.queries_OD == 1);
  CHECK(r.cost.queries_OD_inv == 1);
  CMatrix bad = CMatrix::Identity(2, 2) * 1.1;
  try {
    fast_invert_normal(bad, o);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotUnitary);
  }
}

TEST_CASE("normal inverse is the diagonal inverse conjugated by V") {
  std::mt19937_64 rng(3);
  CMatrix v = random_unitary(rng, 8);
  std::vector<cplx> vals;
  for (int i = 0; i < 8; ++i) vals.push_back(cplx(1.0 + i, 0.3 * i));
  DiagonalOracle o = DiagonalOracle::make(vals);
  NormalInverse r = fast_invert_normal(v, o);
  CMatrix diag_block = fast_invert_diagonal(o).block();
  CHECK(max_abs(r.encoding.block() - v * diag_block * v.adjoint()) < 1e-10);
  LogicalOperator lo = normal_inverse_logical(v, o);
  CHECK(max_abs(lo.block() - r.encoding.block()) < 1e-12);
}

TEST_CASE("elliptic d = 1, h = 1/4") {
  EllipticSystem s = build_elliptic({1, 2, RhsKind::constant, {}});
  const double a = 4 * kPi * kPi + 1, b = 16 * kPi * kPi + 1;
  CHECK(s.oracle.values[0].real() == doctest::Approx(1.0));
  CHECK(s.oracle.values[1].real() == doctest::Approx(a));
  CHECK(s.oracle.values[2].real() == doctest::Approx(b));
  CHECK(s.oracle.values[3].real() == doctest::Approx(a));
  CHECK(s.modes[2][0] == -2);
  CHECK(s.modes[3][0] == -1);
  CHECK(s.norm_a == doctest::Approx(b));
  CHECK(s.norm_a == doctest::Approx(kPi * kPi / (0.25 * 0.25) + 1));
  CHECK(s.norm_a_inv == 1.0);
  CHECK(s.kappa == doctest::Approx(b));
  CHECK(s.xi == doctest::Approx(1.0));

  CMatrix A = s.matrix();
  CHECK(spectral_norm(A) == doctest::Approx(b));
  NormalInverse r = fast_invert_normal(s.v, s.oracle);
  CHECK(max_abs(r.encoding.block() * r.encoding.alpha - A.inverse()) < 1e-9);
}

TEST_CASE("shifted elliptic operator") {
  EllipticSystem s = build_elliptic({1, 3, RhsKind::constant, {}});
  const cplx z(0.5, 0.5);
  std::vector<cplx> shifted;
  for (const cplx& v : s.oracle.values) shifted.push_back(v - z);
  DiagonalOracle o = DiagonalOracle::make(shifted);
  NormalInverse r = fast_invert_normal(s.v, o);
  CMatrix A = s.matrix() - z * CMatrix::Identity(8, 8);
  CHECK(max_abs(r.encoding.block() * r.encoding.alpha - A.inverse()) < 1e-9);
}

TEST_CASE("elliptic xi for a smooth rhs is stable in h") {
  std::vector<double> xis;
  for (int k : {2, 3, 4}) xis.push_back(build_elliptic({1, k, RhsKind::exp_decay, {}}).xi);
  for (double x : xis) CHECK(std::abs(x - xis.back()) / xis.back() < 0.05);
  EllipticSystem s2 = build_elliptic({2, 3, RhsKind::exp_decay, {}});
  CHECK(s2.xi > 0.5);
  CHECK(s2.norm_a == doctest::Approx(2 * kPi * kPi * 64 + 1));
}

TEST_CASE("elliptic kappa grows as h^-2 with constant oracle uses") {
  double prev_kappa = 0.0;
  for (int k : {2, 3, 4, 5}) {
    EllipticSystem s = build_elliptic({1, k, RhsKind::constant, {}});
    const double h = 1.0 / (1 << k);
    CHECK(s.kappa * h * h == doctest::Approx(kPi * kPi + h * h));
    CHECK(s.kappa > prev_kappa);
    prev_kappa = s.kappa;
    NormalInverse r = fast_invert_normal(s.v, s.oracle);
    CHECK(r.cost.queries_V + r.cost.queries_V_inv + r.cost.queries_OD + r.cost.queries_OD_inv == 4);
  }
  CHECK_THROWS_AS(build_elliptic({3, 5, RhsKind::constant, {}}), Error);
}

TEST_CASE("1-sparse inverse examples") {
  CMatrix a(2, 2);
  a << 0, 2, 3, 0;
  OneSparseMatrix s = OneSparseMatrix::from_dense(a);
  BlockEncoding be = fast_invert_one_sparse(s);
  CHECK(be.alpha == doctest::Approx(0.5));
  CMatrix inv(2, 2);
  inv << 0, 1.0 / 3.0, 0.5, 0;
  CHECK(max_abs(extract(be) - inv) < 1e-12);
  CHECK(max_abs(be.block() - inv * 2.0) < 1e-12);

  const cplx c(0.6, -1.3);
  CMatrix h(2, 2);
  h << 0, c, std::conj(c), 0;
  BlockEncoding bh = fast_invert_one_sparse(OneSparseMatrix::from_dense(h));
  CMatrix hinv = extract(bh);
  CHECK(std::abs(hinv(0, 1) - std::conj(1.0 / c)) < 1e-12);
  CHECK(std::abs(hinv(1, 0) - 1.0 / c) < 1e-12);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-std::abs(c)));
  CHECK(es.eigenvalues()(1) == doctest::Approx(std::abs(c)));
}

TEST_CASE("random 8x8 permutation times diagonal") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<int> perm{0, 1, 2, 3, 4, 5, 6, 7};
    std::shuffle(perm.begin(), perm.end(), rng);
    CMatrix a = CMatrix::Zero(8, 8);
    double mn = 1e300;
    for (int x = 0; x < 8; ++x) {
      a(x, perm[x]) = cplx(u(rng), u(rng) - 1.1);
      mn = std::min(mn, std::abs(a(x, perm[x])));
    }
    BlockEncoding be = fast_invert_one_sparse(OneSparseMatrix::from_dense(a));
    CHECK(be.alpha == doctest::Approx(1.0 / mn));
    CHECK(max_abs(be.block() - a.inverse() * mn) < 1e-9);
    CHECK(unitarity_residual(be.unitary) < 1e-10);
  }
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 1) = 1.0;
  try {
    OneSparseMatrix::from_dense(z);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularOneSparse);
  }
  OneSparseMatrix bad;
  bad.n = 1;
  bad.col_of_row = {1, 0};
  bad.entry_of_row = {1.0, 0.0};
  CHECK_THROWS_AS(fast_invert_one_sparse(bad), Error);
}

}  // TEST_SUITE
