#include "qprecon/greens.hpp"

#include <cmath>

#include "qprecon/fastinv.hpp"
#include "qprecon/precond.hpp"

namespace qprecon {

namespace {

int branch_count(Branch b) { return b == Branch::both ? 2 : 1; }

bool wants(Branch b, Branch which) { return b == Branch::both || b == which; }

void check_query(const FockHamiltonian& h, const GreensQuery& q) {
  if (q.i < 1 || q.i > h.n_orbitals || q.j < 1 || q.j > h.n_orbitals)
    throw Error(ErrorKind::IndexOutOfRange, "orbital index out of range");
  if (!(q.eta > 0.0)) throw Error(ErrorKind::InvalidArgument, "eta must be positive");
}

CMatrix shifted_h(const FockHamiltonian& h, double e0) {
  return h.h() - e0 * CMatrix::Identity(h.h0.rows(), h.h0.cols());
}

// sign s = -1 gives z - H' (plus branch), s = +1 gives z + H' (minus branch)
CMatrix resolvent_arg(const CMatrix& hp, cplx z, double s) {
  return z * CMatrix::Identity(hp.rows(), hp.cols()) + s * hp;
}

double delta_prime_for(const GreensQuery& q, double eps) { return eps / (2.0 * branch_count(q.branch)); }

}  // namespace

GreensValue greens_exact(const FockHamiltonian& h, const GroundStateOracle& gs, const GreensQuery& q) {
  check_query(h, q);
  const CMatrix hp = shifted_h(h, gs.exact_energy);
  const CMatrix ai = jw_operator(q.i, h.n_orbitals, JwKind::annihilate);
  const CMatrix aj = jw_operator(q.j, h.n_orbitals, JwKind::annihilate);
  const CVector& psi = gs.exact_state;
  GreensValue g;
  if (wants(q.branch, Branch::plus)) {
    const CVector phi_j = aj.adjoint() * psi;
    const CVector phi_i = ai.adjoint() * psi;
    g.plus = phi_i.dot(resolvent_arg(hp, q.z, -1.0).fullPivLu().solve(phi_j));
  }
  if (wants(q.branch, Branch::minus)) {
    const CVector chi_i = ai * psi;
    const CVector chi_j = aj * psi;
    g.minus = chi_j.dot(resolvent_arg(hp, q.z, 1.0).fullPivLu().solve(chi_i));
  }
  g.total = g.plus + g.minus;
  return g;
}

double greens_default_sigma(double eta, double alpha_b) { return eta / (1.0 + alpha_b + eta); }

OddPolynomial greens_polynomial(const FockHamiltonian& h, const GreensQuery& q, double eps,
                                std::optional<double> sigma_hint) {
  const double ab = h.alpha_b();
  const double sigma = sigma_hint.value_or(greens_default_sigma(q.eta, ab));
  PolyParams pp = precond_poly_params(1.0, ab + 1.0, sigma, delta_prime_for(q, eps));
  return inverse_poly(std::min(pp.delta, 0.99), std::min(pp.eps_prime, 0.5));
}

GreensEstimate greens_preconditioned(const FockHamiltonian& h, const GroundStateOracle& gs, const GreensQuery& q,
                                     double eps, const GreensOptions& opt) {
  check_query(h, q);
  if (std::abs(q.z.imag()) < q.eta) throw Error(ErrorKind::BadBroadening, "|Im z| is below the broadening eta");
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");

  const double ab = h.alpha_b();
  const double sigma = opt.sigma_hint.value_or(greens_default_sigma(q.eta, ab));
  const double dp = delta_prime_for(q, eps);
  OddPolynomial own;
  const OddPolynomial* poly = opt.poly;
  if (!poly) {
    own = greens_polynomial(h, q, eps, opt.sigma_hint);
    poly = &own;
  }

  const Diagonalization dz = diagonalize_part_a(h);
  const long dim = h.h0.rows();
  const cplx shift(0.0, q.z.imag() > 0 ? 1.0 : -1.0);
  const double e0 = gs.energy;
  const CMatrix ai = jw_operator(q.i, h.n_orbitals, JwKind::annihilate);
  const CMatrix aj = jw_operator(q.j, h.n_orbitals, JwKind::annihilate);
  const LogicalOperator b_hat{h.part_b(), ab, 0.0};
  const LogicalOperator ident{CMatrix::Identity(dim, dim), 1.0, 0.0};

  GreensEstimate est;
  est.sigma = sigma;
  int degree = 0;
  auto branch = [&](double s) -> cplx {
    std::vector<cplx> vals(static_cast<size_t>(dim));
    for (long k = 0; k < dim; ++k) vals[static_cast<size_t>(k)] = q.z + shift + s * (dz.d(k) - e0);
    // |Im| >= 1 + eta, so alpha' = 1 is admissible
    const LogicalOperator a_inv = normal_inverse_logical(dz.v, DiagonalOracle::make(vals, 1.0));
    const LogicalOperator b_part = be_lcu({cplx(s), -shift}, std::vector<LogicalOperator>{b_hat, ident});
    PrecondProblem p{a_inv, b_part, sigma, {}};
    PrecondInverse inv = precond_inverse(p, dp, poly);
    degree = inv.cost.poly_degree;
    const LogicalOperator m = to_logical(inv.encoding);
    const LogicalOperator left{s < 0 ? ai : aj.adjoint(), 1.0, 0.0};
    const LogicalOperator right{s < 0 ? aj.adjoint() : ai, 1.0, 0.0};
    const Operand o = be_product(be_product(left, m), right);
    const double alpha = operand_alpha(o);
    const double pr = hadamard_probability(o, gs.state, HadamardPart::real);
    const double pi = hadamard_probability(o, gs.state, HadamardPart::imag);
    return cplx(alpha * (2.0 * pr - 1.0), alpha * (2.0 * pi - 1.0));
  };
  if (wants(q.branch, Branch::plus)) est.value.plus = branch(-1.0);
  if (wants(q.branch, Branch::minus)) est.value.minus = branch(1.0);
  est.value.total = est.value.plus + est.value.minus;

  const int nb = branch_count(q.branch);
  est.budget = nb * (8.0 / (3.0 * sigma) * gs.varsigma + gs.varsigma_prime / (q.eta * q.eta)) + eps;
  const double lf = log_term(1.0 / opt.fail_probability);
  CostReport& c = est.cost;
  c.queries_UA_prime = nb * ab / (sigma * sigma * eps) * log_term(1.0 / (eps * sigma)) * lf;
  c.queries_UB = c.queries_UA_prime;
  c.queries_UPsi = nb / (sigma * std::sqrt(gs.p) * eps) * varsigma_log(gs.varsigma) * lf;
  c.primitive_gate_proxy = c.queries_UA_prime + c.queries_UB + c.queries_UPsi;
  c.achieved_error_budget = est.budget;
  c.poly_degree = degree;
  c.qubits = h.n_orbitals;
  return est;
}

cplx gamma_imag(const FockHamiltonian& h, const GroundStateOracle& gs, const GreensQuery& q) {
  check_query(h, q);
  const CMatrix hp = shifted_h(h, gs.energy);
  const CMatrix ai = jw_operator(q.i, h.n_orbitals, JwKind::annihilate);
  const CMatrix aj = jw_operator(q.j, h.n_orbitals, JwKind::annihilate);
  const double w = -q.z.imag();

  // squared norm of R^+ x, i.e. one solve and one success probability
  auto sq = [&](const Eigen::FullPivLU<CMatrix>& lu, const CVector& x) { return lu.solve(x).squaredNorm(); };
  auto entry = [&](const Eigen::FullPivLU<CMatrix>& lu, const CVector& u, const CVector& v) -> cplx {
    const double nu = sq(lu, u);
    if (q.i == q.j) return w * nu;
    const double nv = sq(lu, v);
    const double re = 0.5 * (sq(lu, u + v) - nu - nv);
    const double im = 0.5 * (nu + nv - sq(lu, u + cplx(0.0, 1.0) * v));
    return w * cplx(re, im);
  };

  cplx out = 0.0;
  if (wants(q.branch, Branch::plus)) {
    Eigen::FullPivLU<CMatrix> lu(resolvent_arg(hp, std::conj(q.z), -1.0));
    out += entry(lu, ai.adjoint() * gs.state, aj.adjoint() * gs.state);
  }
  if (wants(q.branch, Branch::minus)) {
    Eigen::FullPivLU<CMatrix> lu(resolvent_arg(hp, std::conj(q.z), 1.0));
    out += entry(lu, aj * gs.state, ai * gs.state);
  }
  return out;
}

std::vector<GreensRow> greens_sweep(const FockHamiltonian& h, const GroundStateOracle& gs, const std::vector<cplx>& zs,
                                    int i, int j, double eta, double eps, Exec exec) {
  if (zs.empty()) return {};
  GreensQuery q0{zs[0], i, j, eta, Branch::both};
  const OddPolynomial poly = greens_polynomial(h, q0, eps);
  std::vector<GreensRow> rows(2 * zs.size());
  for_each_index(static_cast<long>(zs.size()), exec, [&](long k) {
    GreensQuery q{zs[static_cast<size_t>(k)], i, j, eta, Branch::both};
    const cplx ex = greens_exact(h, gs, q).total;
    GreensOptions opt;
    opt.poly = &poly;
    const cplx pc = greens_preconditioned(h, gs, q, eps, opt).value.total;
    rows[static_cast<size_t>(2 * k)] = {q.z, i, j, ex, "exact", 0.0};
    rows[static_cast<size_t>(2 * k + 1)] = {q.z, i, j, pc, "preconditioned", std::abs(pc - ex)};
  });
  return rows;
}

}  // namespace qprecon
