#include "qprecon/numlin.hpp"

#include <cmath>
#include <numbers>

namespace qprecon {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NormTooLarge: return "NormTooLarge";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::EmptyCombination: return "EmptyCombination";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::ZeroDiagonal: return "ZeroDiagonal";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::SingularOneSparse: return "SingularOneSparse";
    case ErrorKind::BadSigmaHint: return "BadSigmaHint";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::EmptySector: return "EmptySector";
    case ErrorKind::BadBroadening: return "BadBroadening";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::NoFeasiblePoint: return "NoFeasiblePoint";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

CMatrix BlockEncoding::block() const {
  const long N = sys_dim();
  return unitary.topLeftCorner(N, N);
}

RVector singular_values(const CMatrix& a) {
  if (a.size() == 0) return RVector();
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues();
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

double sigma_min(const CMatrix& a) {
  RVector s = singular_values(a);
  return s.size() ? s(s.size() - 1) : 0.0;
}

double unitarity_residual(const CMatrix& u) {
  CMatrix r = u.adjoint() * u;
  r -= CMatrix::Identity(u.cols(), u.cols());
  return spectral_norm(r);
}

bool is_power_of_two(long x) { return x > 0 && (x & (x - 1)) == 0; }

int log2_exact(long x) {
  int k = 0;
  while ((1L << k) < x) ++k;
  return k;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

namespace {

int check_system_dim(const CMatrix& a) {
  if (a.rows() != a.cols() || !is_power_of_two(a.rows()))
    throw Error(ErrorKind::DimensionMismatch, "block must be square with power-of-two dimension");
  return log2_exact(a.rows());
}

void check_qubits(int total) {
  if (total > kMaxExplicitQubits)
    throw Error(ErrorKind::DimensionTooLarge,
                "explicit unitary needs " + std::to_string(total) + " qubits; cap is " +
                    std::to_string(kMaxExplicitQubits));
}

}  // namespace

BlockEncoding unitary_completion(const CMatrix& block, int m, double alpha) {
  const int n = check_system_dim(block);
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "completion needs at least one ancilla");
  if (!(alpha > 0)) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
  check_qubits(n + m);

  const long N = block.rows();
  Eigen::BDCSVD<CMatrix> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RVector s = svd.singularValues();
  if (s.size() && s(0) > 1.0 + 1e-12)
    throw Error(ErrorKind::NormTooLarge, "block norm " + std::to_string(s(0)) + " exceeds 1");

  RVector root(s.size());
  for (long i = 0; i < s.size(); ++i) {
    const double c = std::min(s(i), 1.0);
    root(i) = std::sqrt(std::max(0.0, 1.0 - c * c));
  }
  const CMatrix& W = svd.matrixU();
  const CMatrix& V = svd.matrixV();

  const long D = 1L << (n + m);
  CMatrix u = CMatrix::Identity(D, D);
  u.topLeftCorner(N, N) = block;
  u.block(0, N, N, N) = W * root.asDiagonal() * W.adjoint();
  u.block(N, 0, N, N) = V * root.asDiagonal() * V.adjoint();
  u.block(N, N, N, N) = -block.adjoint();

  BlockEncoding be;
  be.unitary = std::move(u);
  be.n = n;
  be.m = m;
  be.alpha = alpha;
  be.eps = 0.0;
  return be;
}

CMatrix extract(const BlockEncoding& be) { return be.alpha * be.block(); }

BlockEncoding identity_encoding(int n, int m) {
  check_qubits(n + m);
  BlockEncoding be;
  be.unitary = CMatrix::Identity(1L << (n + m), 1L << (n + m));
  be.n = n;
  be.m = m;
  return be;
}

BlockEncoding unitary_encoding(const CMatrix& u, int m) {
  const int n = check_system_dim(u);
  if (unitarity_residual(u) > 1e-10) throw Error(ErrorKind::NotUnitary, "operand is not unitary");
  check_qubits(n + m);
  BlockEncoding be;
  be.unitary = kron(CMatrix::Identity(1L << m, 1L << m), u);
  be.n = n;
  be.m = m;
  return be;
}

BlockEncoding pad_ancillas(const BlockEncoding& be, int extra) {
  if (extra <= 0) return be;
  check_qubits(be.n + be.m + extra);
  BlockEncoding out = be;
  out.unitary = kron(CMatrix::Identity(1L << extra, 1L << extra), be.unitary);
  out.m = be.m + extra;
  return out;
}

BlockEncoding reinterpret(const BlockEncoding& be, double alpha, double eps) {
  BlockEncoding out = be;
  out.alpha = alpha;
  out.eps = eps;
  return out;
}

LogicalOperator reinterpret(const LogicalOperator& op, double alpha, double eps) {
  LogicalOperator out;
  out.matrix = op.matrix * (alpha / op.alpha);
  out.alpha = alpha;
  out.eps = eps;
  return out;
}

Operand reinterpret(const Operand& op, double alpha, double eps) {
  if (auto* be = std::get_if<BlockEncoding>(&op)) return reinterpret(*be, alpha, eps);
  return reinterpret(std::get<LogicalOperator>(op), alpha, eps);
}

BlockEncoding be_product(const BlockEncoding& a, const BlockEncoding& b) {
  if (a.n != b.n) throw Error(ErrorKind::DimensionMismatch, "product operands differ in system size");
  const int n = a.n;
  check_qubits(n + a.m + b.m);
  const long N = 1L << n, DA = 1L << a.m, DB = 1L << b.m;
  const long D = DA * DB * N;

  // index (ia, ib, s) -> (ia * DB + ib) * N + s
  CMatrix ua = CMatrix::Zero(D, D);
  for (long ib = 0; ib < DB; ++ib)
    for (long ia = 0; ia < DA; ++ia)
      for (long ja = 0; ja < DA; ++ja)
        ua.block((ia * DB + ib) * N, (ja * DB + ib) * N, N, N) = a.unitary.block(ia * N, ja * N, N, N);
  CMatrix ub = CMatrix::Zero(D, D);
  for (long ia = 0; ia < DA; ++ia)
    ub.block(ia * DB * N, ia * DB * N, DB * N, DB * N) = b.unitary;

  BlockEncoding out;
  out.unitary = ua * ub;
  out.n = n;
  out.m = a.m + b.m;
  out.alpha = a.alpha * b.alpha;
  out.eps = a.alpha * b.eps + b.alpha * a.eps;
  return out;
}

LogicalOperator be_product(const LogicalOperator& a, const LogicalOperator& b) {
  if (a.matrix.cols() != b.matrix.rows())
    throw Error(ErrorKind::DimensionMismatch, "product operands differ in system size");
  LogicalOperator out;
  out.matrix = a.matrix * b.matrix;
  out.alpha = a.alpha * b.alpha;
  out.eps = a.alpha * b.eps + b.alpha * a.eps;
  return out;
}

Operand be_product(const Operand& a, const Operand& b) {
  auto* ea = std::get_if<BlockEncoding>(&a);
  auto* eb = std::get_if<BlockEncoding>(&b);
  if (ea && eb && ea->n + ea->m + eb->m <= kAutoExplicitQubits) return be_product(*ea, *eb);
  return be_product(to_logical(a), to_logical(b));
}

namespace {

// Reflection taking e_0 to the real unit vector a (a_0 >= 0 not required).
CMatrix prep_unitary(const RVector& a) {
  const long K = a.size();
  CMatrix p = CMatrix::Identity(K, K);
  RVector v = -a;
  v(0) += 1.0;
  const double nv = v.squaredNorm();
  if (nv < 1e-30) return p;
  for (long i = 0; i < K; ++i)
    for (long j = 0; j < K; ++j) p(i, j) -= 2.0 * v(i) * v(j) / nv;
  return p;
}

}  // namespace

BlockEncoding be_lcu(const std::vector<cplx>& coeffs, const std::vector<BlockEncoding>& encs) {
  if (coeffs.empty() || coeffs.size() != encs.size())
    throw Error(ErrorKind::EmptyCombination, "need matching nonempty coefficient and operand lists");
  const int n = encs[0].n;
  int mc = 0;
  double s = 0.0, eps = 0.0;
  for (size_t k = 0; k < encs.size(); ++k) {
    if (encs[k].n != n) throw Error(ErrorKind::DimensionMismatch, "combination operands differ in system size");
    mc = std::max(mc, encs[k].m);
    s += std::abs(coeffs[k]) * encs[k].alpha;
    eps += std::abs(coeffs[k]) * encs[k].eps;
  }
  if (!(s > 0)) throw Error(ErrorKind::EmptyCombination, "all coefficients vanish");

  const long K = static_cast<long>(encs.size());
  const int q = log2_exact(K);
  check_qubits(n + mc + q);
  const long KP = 1L << q;
  const long B = 1L << (n + mc);

  RVector amp = RVector::Zero(KP);
  for (long k = 0; k < K; ++k) amp(k) = std::sqrt(std::abs(coeffs[k]) * encs[k].alpha / s);
  const CMatrix prep = prep_unitary(amp);

  // SELECT * (PREP (x) I), block row k carries e^{i theta_k} U_k
  CMatrix sel_prep(KP * B, KP * B);
  for (long k = 0; k < KP; ++k) {
    CMatrix uk;
    if (k < K) {
      const cplx phase = std::abs(coeffs[k]) > 0 ? coeffs[k] / std::abs(coeffs[k]) : cplx(1.0);
      uk = phase * pad_ancillas(encs[k], mc - encs[k].m).unitary;
    } else {
      uk = CMatrix::Identity(B, B);
    }
    for (long l = 0; l < KP; ++l) sel_prep.block(k * B, l * B, B, B) = prep(k, l) * uk;
  }
  CMatrix out(KP * B, KP * B);
  for (long r = 0; r < KP; ++r) {
    out.block(r * B, 0, B, KP * B).setZero();
    for (long k = 0; k < KP; ++k) {
      const cplx w = std::conj(prep(k, r));
      if (w != cplx(0.0)) out.block(r * B, 0, B, KP * B) += w * sel_prep.block(k * B, 0, B, KP * B);
    }
  }

  BlockEncoding be;
  be.unitary = std::move(out);
  be.n = n;
  be.m = mc + q;
  be.alpha = s;
  be.eps = eps;
  return be;
}

LogicalOperator be_lcu(const std::vector<cplx>& coeffs, const std::vector<LogicalOperator>& ops) {
  if (coeffs.empty() || coeffs.size() != ops.size())
    throw Error(ErrorKind::EmptyCombination, "need matching nonempty coefficient and operand lists");
  LogicalOperator out;
  out.matrix = CMatrix::Zero(ops[0].matrix.rows(), ops[0].matrix.cols());
  out.alpha = 0.0;
  out.eps = 0.0;
  for (size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].matrix.rows() != out.matrix.rows() || ops[k].matrix.cols() != out.matrix.cols())
      throw Error(ErrorKind::DimensionMismatch, "combination operands differ in system size");
    out.matrix += coeffs[k] * ops[k].matrix;
    out.alpha += std::abs(coeffs[k]) * ops[k].alpha;
    out.eps += std::abs(coeffs[k]) * ops[k].eps;
  }
  if (!(out.alpha > 0)) throw Error(ErrorKind::EmptyCombination, "all coefficients vanish");
  return out;
}

Operand be_lcu(const std::vector<cplx>& coeffs, const std::vector<Operand>& ops) {
  bool all_explicit = !ops.empty();
  int n = 0, mc = 0;
  for (const auto& op : ops) {
    auto* be = std::get_if<BlockEncoding>(&op);
    if (!be) {
      all_explicit = false;
      break;
    }
    n = be->n;
    mc = std::max(mc, be->m);
  }
  if (all_explicit && n + mc + log2_exact(static_cast<long>(ops.size())) <= kAutoExplicitQubits) {
    std::vector<BlockEncoding> encs;
    for (const auto& op : ops) encs.push_back(std::get<BlockEncoding>(op));
    return be_lcu(coeffs, encs);
  }
  std::vector<LogicalOperator> los;
  for (const auto& op : ops) los.push_back(to_logical(op));
  return be_lcu(coeffs, los);
}

LogicalOperator dilate_hermitian(const LogicalOperator& a) {
  const long r = a.matrix.rows(), c = a.matrix.cols();
  LogicalOperator out;
  out.matrix = CMatrix::Zero(r + c, r + c);
  out.matrix.topRightCorner(r, c) = a.matrix;
  out.matrix.bottomLeftCorner(c, r) = a.matrix.adjoint();
  out.alpha = a.alpha;
  out.eps = a.eps;
  return out;
}

CMatrix qft_matrix(int n) {
  if (n < 1 || n > 12) throw Error(ErrorKind::DimensionTooLarge, "qft_matrix supports 1..12 qubits");
  const long N = 1L << n;
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  CMatrix f(N, N);
  for (long j = 0; j < N; ++j)
    for (long k = 0; k < N; ++k) {
      const long e = (j * k) % N;
      const double th = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(N);
      f(j, k) = scale * cplx(std::cos(th), std::sin(th));
    }
  return f;
}

LogicalOperator to_logical(const BlockEncoding& be) {
  LogicalOperator op;
  op.matrix = extract(be);
  op.alpha = be.alpha;
  op.eps = be.eps;
  return op;
}

LogicalOperator to_logical(const Operand& op) {
  if (auto* be = std::get_if<BlockEncoding>(&op)) return to_logical(*be);
  return std::get<LogicalOperator>(op);
}

BlockEncoding to_block_encoding(const LogicalOperator& op, int m) {
  BlockEncoding be = unitary_completion(op.block(), m, op.alpha);
  be.eps = op.eps;
  return be;
}

CMatrix operand_matrix(const Operand& op) {
  if (auto* be = std::get_if<BlockEncoding>(&op)) return extract(*be);
  return std::get<LogicalOperator>(op).matrix;
}

double operand_alpha(const Operand& op) {
  return std::visit([](const auto& x) { return x.alpha; }, op);
}

double operand_eps(const Operand& op) {
  return std::visit([](const auto& x) { return x.eps; }, op);
}

long operand_dim(const Operand& op) {
  if (auto* be = std::get_if<BlockEncoding>(&op)) return be->sys_dim();
  return std::get<LogicalOperator>(op).matrix.rows();
}

int operand_ancillas(const Operand& op) {
  if (auto* be = std::get_if<BlockEncoding>(&op)) return be->m;
  return 0;
}

bool is_explicit(const Operand& op) { return std::holds_alternative<BlockEncoding>(op); }

}  // namespace qprecon
