#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qprecon/chebyshev.hpp"
#include "qprecon/cost.hpp"
#include "qprecon/fastinv.hpp"
#include "qprecon/kernels.hpp"
#include "qprecon/numlin.hpp"
#include "qprecon/qsvt.hpp"

namespace qprecon {

// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int J);

// Parabola z(t) = t^2 - zeta + i t truncated to |t| <= T.
struct QuadratureRule {
  double beta = 0.0;
  double T = 0.0;
  int J = 0;
  double b = 0.0;     // min(1/(2 beta), 1/6)
  double zeta = 0.0;  // 2 b (1 - b)
  std::vector<double> s, w, t;
  std::vector<cplx> nodes;    // z_j
  std::vector<cplx> weights;  // rho_j, e^{-beta x} ~ sum rho_j / (z_j - x)
  double sum_abs_rho = 0.0;

  cplx operator()(double x) const;
};

QuadratureRule contour_nodes(double beta, double T, int J);

// min_beta: beta~ = min(beta, 3), constant e^{3/2}
// max_beta: beta~ = max(beta, 3), constant e^{1/4}
enum class QuadBoundForm { min_beta, max_beta };

double quadrature_error_bound(double beta, double T, int J, QuadBoundForm form = QuadBoundForm::min_beta);

// max |e^{-beta x} - sum rho_j / (z_j - x)| over `points` equispaced x in [0, x_max].
double quadrature_empirical_error(const QuadratureRule& rule, double x_max = 50.0, long points = 10000,
                                  Exec exec = Exec::parallel);

struct TJChoice {
  double T = 0.0;
  int J = 0;
  double bound = 0.0;
};

inline constexpr double kMaxContourT = 20.0;
inline constexpr int kMaxContourJ = 100000;

// Smallest J over T in {1, 1.25, ..., 20} with bound <= eps / 2; ties keep the smaller T.
TJChoice choose_T_J(double beta, double eps, QuadBoundForm form = QuadBoundForm::max_beta);

// Block-diagonal select operator sum_j |j><j| (x) (z_j - H)^{-1}, stored per block.
struct SelectOracle {
  std::vector<LogicalOperator> blocks;  // each with alpha = alpha_S
  double alpha = 0.0;
  double sigma = 0.0;  // sigma~'_min actually used
  CostReport cost;

  CMatrix dense() const;
};

// i if Im z > 0, else -i
cplx contour_shift(cplx z);

// 1 / (1 + 2 max(beta, 3) (alpha_B + 1))
double default_contour_sigma(double beta, double alpha_b);

// H = V diag(d) V^+ + B. Blocks are preconditioned inverses of
// (z_j + xi_j - A) + (-B - xi_j) with xi_j = contour_shift(z_j).
SelectOracle select_oracle(const Diagonalization& a, const LogicalOperator& b, const QuadratureRule& rule,
                           double delta_prime, std::optional<double> sigma_hint = std::nullopt,
                           Exec exec = Exec::parallel);

struct MatfunResult {
  LogicalOperator op;  // encodes the target; op.matrix is the approximation itself
  CostReport cost;
  double sigma = 0.0;
  // contour route
  std::optional<QuadratureRule> rule;
  // inverse route
  std::optional<ChebSeries> series;
  double gevrey_bound_degree = 0.0;
};

// e^{-beta H}, quadrature eps/2 plus block error eps/2. Dimensions need not be
// powers of two; the system is padded internally.
MatfunResult exp_contour(const Diagonalization& a, const LogicalOperator& b, double beta, double eps,
                         std::optional<double> sigma_hint = std::nullopt, Exec exec = Exec::parallel);

// g(y) = 1/2 sign(y) exp(-zeta / |y|)
ScalarFn half_sign_exp(double zeta);

// Smallest odd truncation of g's Chebyshev series with coefficient tail <= tol,
// confirmed on a dense grid.
ChebSeries odd_truncation(const ScalarFn& g, double tol, int max_degree = 20000);

// 1/2 e^{-beta H} through g((A+B)^{-1} / alpha') on a preconditioned inverse.
MatfunResult exp_inverse_transform(const Operand& a_inv, const Operand& b_op, double beta, double eps,
                                   std::optional<double> sigma_hint = std::nullopt);

// Worst ratio |g^{(k)}(y)| / (C R^k (k!)^3) for g = sign(y) e^{-zeta/|y|},
// C = 1, R = 16 e / zeta, over k = 1..k_max and `samples` points with |y| >= 0.05.
double gevrey_certificate_ratio(double zeta, int k_max = 6, int samples = 20);

enum class GibbsRoute { contour, inverse };
GibbsRoute parse_gibbs_route(const std::string& s);
const char* to_string(GibbsRoute r);

struct GibbsResult {
  CVector state;    // sum_x |x> (x) M |x>, normalized; first register most significant
  CMatrix reduced;  // partial trace over the first register
  double xi = 0.0;  // ||(I (x) M) maxent||
  double xi_exact = 0.0;
  double trace_dist_to_exact = 0.0;  // 1/2 ||reduced - e^{-beta H}/Z||_1
  GibbsRoute route = GibbsRoute::contour;
  CostReport cost;
};

GibbsResult purified_gibbs(const Diagonalization& a, const LogicalOperator& b, double beta, GibbsRoute route,
                           double eps, Exec exec = Exec::parallel);

// e^{-beta H} by Hermitian eigendecomposition.
CMatrix dense_expm_hermitian(const CMatrix& h, double beta);

}  // namespace qprecon
