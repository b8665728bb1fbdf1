#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace qprecon {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

enum class ErrorKind {
  NormTooLarge,
  DimensionMismatch,
  DimensionTooLarge,
  EmptyCombination,
  ConvergenceFailure,
  Singular,
  ZeroDiagonal,
  NotUnitary,
  SingularOneSparse,
  BadSigmaHint,
  IndexOutOfRange,
  TooLarge,
  EmptySector,
  BadBroadening,
  UnknownModel,
  NoFeasiblePoint,
  NotPSD,
  NotPositiveDefinite,
  InvalidArgument,
  ConfigInvalid,
  IoError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Hard cap on explicit unitaries (system + ancilla qubits).
inline constexpr int kMaxExplicitQubits = 14;
// Above this the operand-level dispatch switches to LogicalOperator.
inline constexpr int kAutoExplicitQubits = 10;

// Explicit (alpha, m, eps) block-encoding. Ancillas are the most significant
// tensor factor: row index = anc * 2^n + sys.
struct BlockEncoding {
  CMatrix unitary;
  int n = 0;
  int m = 0;
  double alpha = 1.0;
  double eps = 0.0;

  long sys_dim() const { return 1L << n; }
  // Top-left 2^n x 2^n corner, without the alpha rescale.
  CMatrix block() const;
};

// Dense operator A with subnormalization alpha and error budget eps; the
// completing unitary is never formed.
struct LogicalOperator {
  CMatrix matrix;
  double alpha = 1.0;
  double eps = 0.0;

  CMatrix block() const { return matrix / alpha; }
};

using Operand = std::variant<BlockEncoding, LogicalOperator>;

// dense helpers
double spectral_norm(const CMatrix& a);
double sigma_min(const CMatrix& a);
RVector singular_values(const CMatrix& a);
double unitarity_residual(const CMatrix& u);
bool is_power_of_two(long x);
int log2_exact(long x);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

// block-encoding calculus
BlockEncoding unitary_completion(const CMatrix& block, int m, double alpha = 1.0);
CMatrix extract(const BlockEncoding& be);
BlockEncoding identity_encoding(int n, int m = 1);
BlockEncoding unitary_encoding(const CMatrix& u, int m = 1);

BlockEncoding be_product(const BlockEncoding& a, const BlockEncoding& b);
LogicalOperator be_product(const LogicalOperator& a, const LogicalOperator& b);
Operand be_product(const Operand& a, const Operand& b);

BlockEncoding be_lcu(const std::vector<cplx>& coeffs, const std::vector<BlockEncoding>& encs);
LogicalOperator be_lcu(const std::vector<cplx>& coeffs, const std::vector<LogicalOperator>& ops);
Operand be_lcu(const std::vector<cplx>& coeffs, const std::vector<Operand>& ops);

// Adds idle ancillas (U -> I (x) U on the new most-significant qubits).
BlockEncoding pad_ancillas(const BlockEncoding& be, int extra);
// Same unitary, different declared (alpha, eps).
BlockEncoding reinterpret(const BlockEncoding& be, double alpha, double eps);
LogicalOperator reinterpret(const LogicalOperator& op, double alpha, double eps);
Operand reinterpret(const Operand& op, double alpha, double eps);

LogicalOperator dilate_hermitian(const LogicalOperator& a);
CMatrix qft_matrix(int n);

LogicalOperator to_logical(const BlockEncoding& be);
LogicalOperator to_logical(const Operand& op);
BlockEncoding to_block_encoding(const LogicalOperator& op, int m = 1);

CMatrix operand_matrix(const Operand& op);
double operand_alpha(const Operand& op);
double operand_eps(const Operand& op);
long operand_dim(const Operand& op);
int operand_ancillas(const Operand& op);
bool is_explicit(const Operand& op);

}  // namespace qprecon
