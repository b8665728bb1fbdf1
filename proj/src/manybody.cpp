#include "qprecon/manybody.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "qprecon/qsvt.hpp"

namespace qprecon {

namespace {

void check_orbitals(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "need at least one orbital");
  if (n > kMaxOrbitals) throw Error(ErrorKind::TooLarge, "more than " + std::to_string(kMaxOrbitals) + " orbitals");
}

// orbital i (1-based) lives on bit n - i
inline unsigned long bit_of(int i, int n) { return 1UL << (n - i); }

// (-1)^(occupied orbitals before i)
inline double jw_sign(unsigned long s, int i, int n) {
  const unsigned long above = s >> (n - i + 1);
  return (std::popcount(above) & 1) ? -1.0 : 1.0;
}

double max_abs_eigenvalue(const CMatrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
}

std::vector<long> sector_indices(int n_orbitals, int n_e) {
  std::vector<long> idx;
  const long dim = 1L << n_orbitals;
  for (long s = 0; s < dim; ++s)
    if (std::popcount(static_cast<unsigned long>(s)) == n_e) idx.push_back(s);
  return idx;
}

CMatrix restrict_to(const CMatrix& h, const std::vector<long>& idx) {
  const long k = static_cast<long>(idx.size());
  CMatrix sub(k, k);
  for (long a = 0; a < k; ++a)
    for (long b = 0; b < k; ++b) sub(a, b) = h(idx[a], idx[b]);
  return sub;
}

}  // namespace

CMatrix jw_operator(int i, int n_orbitals, JwKind kind) {
  check_orbitals(n_orbitals);
  if (i < 1 || i > n_orbitals) throw Error(ErrorKind::IndexOutOfRange, "orbital index " + std::to_string(i));
  const long dim = 1L << n_orbitals;
  const unsigned long b = bit_of(i, n_orbitals);
  CMatrix m = CMatrix::Zero(dim, dim);
  for (long s = 0; s < dim; ++s) {
    const unsigned long us = static_cast<unsigned long>(s);
    const bool occ = us & b;
    switch (kind) {
      case JwKind::number:
        if (occ) m(s, s) = 1.0;
        break;
      case JwKind::annihilate:
        if (occ) m(static_cast<long>(us ^ b), s) = jw_sign(us, i, n_orbitals);
        break;
      case JwKind::create:
        if (!occ) m(static_cast<long>(us | b), s) = jw_sign(us, i, n_orbitals);
        break;
    }
  }
  return m;
}

std::vector<int> occupation_counts(int n_orbitals) {
  std::vector<int> c(static_cast<size_t>(1L << n_orbitals));
  for (size_t s = 0; s < c.size(); ++s) c[s] = std::popcount(static_cast<unsigned long>(s));
  return c;
}

FockHamiltonian hubbard_hamiltonian(int lx, int ly, double t, double u, Split split) {
  if (lx < 1 || ly < 1) throw Error(ErrorKind::InvalidArgument, "lattice sides must be positive");
  const int ns = lx * ly;
  const int n = 2 * ns;
  if (n > kMaxOrbitals) throw Error(ErrorKind::TooLarge, "2 lx ly exceeds " + std::to_string(kMaxOrbitals));
  const long dim = 1L << n;

  std::set<std::pair<int, int>> bonds;
  for (int y = 0; y < ly; ++y)
    for (int x = 0; x < lx; ++x) {
      const int s = y * lx + x;
      const int right = y * lx + (x + 1) % lx;
      const int up = ((y + 1) % ly) * lx + x;
      if (right != s) bonds.insert({std::min(s, right), std::max(s, right)});
      if (up != s) bonds.insert({std::min(s, up), std::max(s, up)});
    }

  FockHamiltonian h;
  h.n_orbitals = n;
  h.n_sites = ns;
  h.split = split;
  h.t = t;
  h.u = u;
  h.h0 = CMatrix::Zero(dim, dim);
  h.h1 = CMatrix::Zero(dim, dim);

  auto hop = [&](int p, int q) {  // -t a_p^+ a_q, 1-based orbitals
    const unsigned long bp = bit_of(p, n), bq = bit_of(q, n);
    for (long s = 0; s < dim; ++s) {
      const unsigned long us = static_cast<unsigned long>(s);
      if (!(us & bq)) continue;
      const double s1 = jw_sign(us, q, n);
      const unsigned long mid = us ^ bq;
      if (mid & bp) continue;
      const double s2 = jw_sign(mid, p, n);
      h.h0(static_cast<long>(mid | bp), s) += -t * s1 * s2;
    }
  };
  for (int spin = 0; spin < 2; ++spin)
    for (const auto& [a, b] : bonds) {
      const int p = spin * ns + a + 1, q = spin * ns + b + 1;
      hop(p, q);
      hop(q, p);
    }
  for (long s = 0; s < dim; ++s) {
    const unsigned long us = static_cast<unsigned long>(s);
    int doubles = 0;
    for (int site = 0; site < ns; ++site)
      if ((us & bit_of(site + 1, n)) && (us & bit_of(ns + site + 1, n))) ++doubles;
    h.h1(s, s) = u * doubles;
  }
  h.alpha_t = max_abs_eigenvalue(h.h0);
  h.alpha_u = std::abs(u) * ns;
  h.alpha_t_bound = ns * std::abs(t);
  h.alpha_u_bound = ns * std::abs(u);
  return h;
}

FockHamiltonian single_orbital_hamiltonian(double eps) {
  FockHamiltonian h;
  h.n_orbitals = 1;
  h.n_sites = 1;
  h.h0 = CMatrix::Zero(2, 2);
  h.h1 = CMatrix::Zero(2, 2);
  h.h1(1, 1) = eps;
  h.split = Split::interaction_as_a;
  h.u = eps;
  h.alpha_u = std::abs(eps);
  h.alpha_u_bound = std::abs(eps);
  return h;
}

Diagonalization diagonalize_part_a(const FockHamiltonian& h) {
  Diagonalization d;
  const CMatrix& a = h.part_a();
  if (h.split == Split::interaction_as_a) {
    d.v = CMatrix::Identity(a.rows(), a.cols());
    d.d = a.diagonal().real();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    d.v = es.eigenvectors();
    d.d = es.eigenvalues();
  }
  return d;
}

GroundStateOracle ground_state(const FockHamiltonian& h, int n_e, const GroundStateNoise& noise) {
  if (n_e < 0 || n_e > h.n_orbitals) throw Error(ErrorKind::EmptySector, "no states with " + std::to_string(n_e) + " electrons");
  if (noise.varsigma < 0.0 || noise.varsigma > 1.0) throw Error(ErrorKind::InvalidArgument, "varsigma must lie in [0, 1]");
  if (!(noise.p > 0.0) || noise.p > 1.0) throw Error(ErrorKind::InvalidArgument, "p must lie in (0, 1]");
  const std::vector<long> idx = sector_indices(h.n_orbitals, n_e);
  if (idx.empty()) throw Error(ErrorKind::EmptySector, "empty sector");
  const long k = static_cast<long>(idx.size());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(restrict_to(h.h(), idx));
  const RVector& ev = es.eigenvalues();
  const double e0 = ev(0);
  long deg = 1;
  while (deg < k && ev(deg) - e0 <= 1e-10 * std::max(1.0, std::abs(e0))) ++deg;
  const CMatrix q = es.eigenvectors().leftCols(deg);

  CVector local;
  for (long j = 0; j < k; ++j) {
    CVector v = q * q.row(j).adjoint();
    if (v.norm() > 1e-8) {
      local = v / v.norm();
      local *= std::conj(local(j)) / std::abs(local(j));
      break;
    }
  }

  const long dim = 1L << h.n_orbitals;
  GroundStateOracle g;
  g.n_electrons = n_e;
  g.exact_energy = e0;
  g.exact_state = CVector::Zero(dim);
  for (long j = 0; j < k; ++j) g.exact_state(idx[j]) = local(j);

  g.varsigma = noise.varsigma;
  g.varsigma_prime = noise.varsigma_prime;
  g.p = noise.p;
  g.energy = e0 + noise.varsigma_prime;
  g.state = g.exact_state;
  if (noise.varsigma > 0.0) {
    CVector orth;
    for (long j = 0; j < k; ++j) {
      CVector e = CVector::Zero(k);
      e(j) = 1.0;
      e -= local * local.dot(e);
      if (e.norm() > 0.1) {
        orth = e / e.norm();
        break;
      }
    }
    if (orth.size() == 0) throw Error(ErrorKind::InvalidArgument, "sector too small to inject a state error");
    const double s = noise.varsigma;
    CVector noisy = std::sqrt(1.0 - s * s) * local + s * orth;
    g.state = CVector::Zero(dim);
    for (long j = 0; j < k; ++j) g.state(idx[j]) = noisy(j);
  }
  return g;
}

RestrictedAlpha number_restricted_alpha(const FockHamiltonian& h, int n_e) {
  const std::vector<long> idx = sector_indices(h.n_orbitals, n_e);
  if (idx.empty()) throw Error(ErrorKind::EmptySector, "empty sector");
  const long dim = 1L << h.n_orbitals;
  RestrictedAlpha r;
  r.projector = CMatrix::Zero(dim, dim);
  for (long s : idx) r.projector(s, s) = 1.0;
  r.alpha_restricted = max_abs_eigenvalue(restrict_to(h.part_a(), idx));
  r.alpha_kinetic = max_abs_eigenvalue(restrict_to(h.h0, idx));
  return r;
}

double hadamard_probability(const Operand& a, const CVector& phi, HadamardPart part) {
  const CMatrix m = operand_matrix(a);
  if (m.cols() != phi.size() || m.rows() != phi.size()) throw Error(ErrorKind::DimensionMismatch, "state size");
  const cplx v = phi.dot(m * phi);
  const double x = part == HadamardPart::real ? v.real() : v.imag();
  return 0.5 * (1.0 + x / operand_alpha(a));
}

double varsigma_log(double varsigma) { return varsigma > 0.0 ? log_term(1.0 / varsigma) : 1.0; }

CostReport estimate_expectation(double alpha, double eps, double delta, double p, double varsigma) {
  if (!(alpha > 0.0) || !(eps > 0.0) || eps >= 1.0 || !(delta > 0.0) || !(p > 0.0) || varsigma < 0.0)
    throw Error(ErrorKind::InvalidArgument, "estimate_expectation parameters out of range");
  CostReport c;
  c.queries_UA_prime = alpha / eps * log_term(1.0 / delta);
  c.queries_UPsi = alpha / (std::sqrt(p) * eps) * varsigma_log(varsigma) * log_term(1.0 / delta);
  c.primitive_gate_proxy = c.queries_UA_prime + c.queries_UPsi;
  c.achieved_error_budget = expectation_bias_bound(alpha, eps, varsigma);
  return c;
}

double expectation_bias_bound(double alpha, double eps, double varsigma) { return 2.0 * alpha * varsigma + eps; }

std::vector<CostTableRow> query_cost_table(const CostTableParams& p) {
  if (!(p.eta > 0.0) || !(p.eps > 0.0) || !(p.p > 0.0))
    throw Error(ErrorKind::InvalidArgument, "eta, eps and p must be positive");
  double alpha_h = 0.0, alpha_b = 0.0, precond_blocks = -1.0;
  const double ee = p.eta * p.eta * p.eps;
  if (p.model == "generic") {
    alpha_h = p.alpha_h;
    alpha_b = p.alpha_b;
  } else if (p.model == "hubbard") {
    const double mn = std::min(std::abs(p.t), std::abs(p.u));
    alpha_h = p.n * (std::abs(p.t) + std::abs(p.u));
    alpha_b = p.n * mn;
    precond_blocks = std::pow(p.n, 3) * std::pow(mn, 3) / ee;
  } else if (p.model == "planewave_dual") {
    const double a = std::pow(p.n, 7.0 / 3.0) / std::pow(p.omega, 2.0 / 3.0);
    alpha_b = std::pow(p.n, 5.0 / 3.0) / std::pow(p.omega, 2.0 / 3.0);
    alpha_h = a + alpha_b;
    precond_blocks = std::pow(p.n, 5) / (p.omega * p.omega * ee);
  } else if (p.model == "schwinger") {
    const double a = (p.n - 1.0) * p.gauge_cutoff * p.gauge_cutoff;
    alpha_b = (p.x + p.mu) * p.n;
    alpha_h = a + alpha_b;
    precond_blocks = std::pow(p.x + p.mu, 3) * std::pow(p.n, 3) / ee;
  } else {
    throw Error(ErrorKind::UnknownModel, "unknown model '" + p.model + "'");
  }
  const double sigma = p.sigma > 0.0 ? p.sigma : p.eta / (1.0 + p.eta + alpha_b);
  if (precond_blocks < 0.0) precond_blocks = alpha_b / (sigma * sigma * p.eps);
  const double lg = varsigma_log(p.varsigma);
  const double sp = std::sqrt(p.p);
  const double zh = p.z_abs + alpha_h;

  std::vector<CostTableRow> rows;
  rows.push_back({p.model, "HHL", alpha_h, alpha_b, sigma, lg / (p.eta * sp * p.eps),
                  zh / (std::pow(p.eta, 3) * p.eps * p.eps), p.eps + p.varsigma / p.eta});
  rows.push_back({p.model, "LCU/QSVT", alpha_h, alpha_b, sigma, lg / (p.eta * sp * p.eps), zh / ee,
                  p.eps + p.varsigma / p.eta});
  rows.push_back({p.model, "preconditioned", alpha_h, alpha_b, sigma, lg / (sigma * sp * p.eps), precond_blocks,
                  p.eps + p.varsigma / sigma});
  return rows;
}

}  // namespace qprecon
