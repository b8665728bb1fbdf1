#pragma once

#include <string>
#include <vector>

#include "qprecon/cost.hpp"
#include "qprecon/fastinv.hpp"
#include "qprecon/numlin.hpp"

namespace qprecon {

// Spin-orbital cap (Fock dimension 4096).
inline constexpr int kMaxOrbitals = 12;

enum class JwKind { create, annihilate, number };

// Orbital i (1-based) is the i-th most significant qubit; |1> is occupied.
CMatrix jw_operator(int i, int n_orbitals, JwKind kind);

// Total particle number of each Fock basis state.
std::vector<int> occupation_counts(int n_orbitals);

// Which part of the Hamiltonian plays the fast-invertible role.
enum class Split { kinetic_as_a, interaction_as_a };

struct FockHamiltonian {
  int n_orbitals = 0;
  int n_sites = 0;
  CMatrix h0;  // hopping
  CMatrix h1;  // on-site interaction, diagonal
  Split split = Split::interaction_as_a;
  double t = 0.0;
  double u = 0.0;
  double alpha_t = 0.0;  // ||h0||
  double alpha_u = 0.0;  // ||h1||
  double alpha_t_bound = 0.0;  // N |t|
  double alpha_u_bound = 0.0;  // N |U|

  CMatrix h() const { return h0 + h1; }
  const CMatrix& part_a() const { return split == Split::kinetic_as_a ? h0 : h1; }
  const CMatrix& part_b() const { return split == Split::kinetic_as_a ? h1 : h0; }
  double alpha_b() const { return split == Split::kinetic_as_a ? alpha_u : alpha_t; }
};

// Periodic lx x ly lattice, spin-major orbitals (all up, then all down), each
// nearest-neighbour bond counted once.
FockHamiltonian hubbard_hamiltonian(int lx, int ly, double t, double u, Split split = Split::interaction_as_a);

// Single orbital, H = eps n.
FockHamiltonian single_orbital_hamiltonian(double eps);

Diagonalization diagonalize_part_a(const FockHamiltonian& h);

struct GroundStateOracle {
  double energy = 0.0;  // reported, includes the varsigma' offset
  CVector state;        // prepared, trace distance varsigma from the exact state
  int n_electrons = 0;
  double varsigma = 0.0;
  double p = 1.0;
  double varsigma_prime = 0.0;
  double exact_energy = 0.0;
  CVector exact_state;
};

struct GroundStateNoise {
  double varsigma = 0.0;
  double varsigma_prime = 0.0;
  double p = 1.0;
};

// Exact sector ground state; a degenerate ground space resolves to the
// projection of the lowest-index sector basis state.
GroundStateOracle ground_state(const FockHamiltonian& h, int n_e, const GroundStateNoise& noise = {});

struct RestrictedAlpha {
  CMatrix projector;
  double alpha_restricted = 0.0;  // max |eigenvalue| of the fast-invertible part on the sector
  double alpha_kinetic = 0.0;     // same for the hopping part
};
RestrictedAlpha number_restricted_alpha(const FockHamiltonian& h, int n_e);

enum class HadamardPart { real, imag };

// 1/2 (1 + Re<phi|A|phi>/alpha), or the imaginary-part variant.
double hadamard_probability(const Operand& a, const CVector& phi, HadamardPart part);

// Amplitude-estimation cost of <phi|A|phi> to precision eps.
CostReport estimate_expectation(double alpha, double eps, double delta, double p, double varsigma);
// Estimator bias bound 2 alpha varsigma + eps.
double expectation_bias_bound(double alpha, double eps, double varsigma);

// log(1/varsigma) repetition factor; 1 for an exact preparation.
double varsigma_log(double varsigma);

struct CostTableParams {
  std::string model = "generic";  // generic | hubbard | planewave_dual | schwinger
  double z_abs = 1.0;
  double eta = 0.5;
  double eps = 0.01;
  double p = 1.0;
  double varsigma = 0.0;
  // generic
  double alpha_h = 1.0;
  double alpha_b = 1.0;
  double sigma = 0.0;  // <= 0 selects eta / (1 + eta + alpha_B)
  // hubbard / planewave_dual / schwinger
  double n = 4.0;
  double t = 1.0;
  double u = 1.0;
  double omega = 1.0;
  double x = 1.0;
  double mu = 0.0;
  double gauge_cutoff = 1.0;
};

struct CostTableRow {
  std::string model;
  std::string algorithm;  // HHL | LCU/QSVT | preconditioned
  double alpha_h = 0.0;
  double alpha_b = 0.0;
  double sigma = 0.0;
  double queries_upsi = 0.0;
  double queries_blocks = 0.0;
  double error = 0.0;
};

std::vector<CostTableRow> query_cost_table(const CostTableParams& p);

}  // namespace qprecon
