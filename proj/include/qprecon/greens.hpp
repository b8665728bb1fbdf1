#pragma once

#include <optional>
#include <vector>

#include "qprecon/cost.hpp"
#include "qprecon/kernels.hpp"
#include "qprecon/manybody.hpp"
#include "qprecon/qsvt.hpp"

namespace qprecon {

// plus:  G+_ij(z) = <Psi| a_i (z - [H - E0])^{-1} a_j^+ |Psi>
// minus: G-_ij(z) = <Psi| a_j^+ (z + [H - E0])^{-1} a_i |Psi>
enum class Branch { plus, minus, both };

struct GreensQuery {
  cplx z;
  int i = 1;
  int j = 1;
  double eta = 0.5;
  Branch branch = Branch::both;
};

struct GreensValue {
  cplx plus = 0.0;
  cplx minus = 0.0;
  cplx total = 0.0;  // sum over the requested branches
};

// Dense solves with the exact ground state and energy.
GreensValue greens_exact(const FockHamiltonian& h, const GroundStateOracle& gs, const GreensQuery& q);

struct GreensOptions {
  std::optional<double> sigma_hint;
  double fail_probability = 0.01;
  const OddPolynomial* poly = nullptr;  // shared across a sweep
};

struct GreensEstimate {
  GreensValue value;
  CostReport cost;
  double sigma = 0.0;
  double budget = 0.0;  // branches * (8 varsigma / (3 sigma) + varsigma' / eta^2) + eps
};

double greens_default_sigma(double eta, double alpha_b);

// Polynomial a preconditioned Green's function evaluation will request.
OddPolynomial greens_polynomial(const FockHamiltonian& h, const GreensQuery& q, double eps,
                                std::optional<double> sigma_hint = std::nullopt);

GreensEstimate greens_preconditioned(const FockHamiltonian& h, const GroundStateOracle& gs, const GreensQuery& q,
                                     double eps, const GreensOptions& opt = {});

// Anti-Hermitian part (G - G^+)/2i from success probabilities:
// Gamma_ij = -Im z <R^+ phi_i, R^+ phi_j>, off-diagonals by polarization.
cplx gamma_imag(const FockHamiltonian& h, const GroundStateOracle& gs, const GreensQuery& q);

struct GreensRow {
  cplx z;
  int i = 1;
  int j = 1;
  cplx g;
  std::string method;
  double err_vs_exact = 0.0;
};

// One exact and one preconditioned row per z point.
std::vector<GreensRow> greens_sweep(const FockHamiltonian& h, const GroundStateOracle& gs, const std::vector<cplx>& zs,
                                    int i, int j, double eta, double eps, Exec exec = Exec::parallel);

}  // namespace qprecon
