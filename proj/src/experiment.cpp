#include "qprecon/experiment.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "qprecon/chebyshev.hpp"
#include "qprecon/fastinv.hpp"
#include "qprecon/greens.hpp"
#include "qprecon/manybody.hpp"
#include "qprecon/matfun.hpp"
#include "qprecon/precond.hpp"
#include "qprecon/qsvt.hpp"

namespace qprecon {

using nlohmann::json;

namespace {

constexpr const char* kExperimentNames[] = {"solve",   "sigma_scan",          "greens",          "gibbs",
                                            "contour_convergence", "cheb_convergence", "cost_table"};

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

// Typed access to `params` that rejects unknown keys on finish().
class ParamReader {
 public:
  explicit ParamReader(const json& j) : j_(j) {
    if (!j_.is_object()) bad("params must be an object");
  }

  bool has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k);
  }

  double num(const std::string& k, std::optional<double> def = std::nullopt) {
    if (!has(k)) return required(k, def);
    const json& v = j_.at(k);
    if (!v.is_number()) bad("params." + k + ": expected a number");
    return v.get<double>();
  }

  double positive(const std::string& k, std::optional<double> def = std::nullopt) {
    const double v = num(k, def);
    if (!(v > 0.0)) bad("params." + k + ": must be positive");
    return v;
  }

  long integer(const std::string& k, std::optional<long> def = std::nullopt) {
    if (!has(k)) {
      if (!def) bad("params." + k + ": required");
      return *def;
    }
    const json& v = j_.at(k);
    if (!v.is_number_integer()) bad("params." + k + ": expected an integer");
    return v.get<long>();
  }

  std::string str(const std::string& k, std::optional<std::string> def = std::nullopt) {
    if (!has(k)) {
      if (!def) bad("params." + k + ": required");
      return *def;
    }
    const json& v = j_.at(k);
    if (!v.is_string()) bad("params." + k + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> nums(const std::string& k, std::optional<std::vector<double>> def = std::nullopt) {
    if (!has(k)) {
      if (!def) bad("params." + k + ": required");
      return *def;
    }
    const json& v = j_.at(k);
    if (!v.is_array() || v.empty()) bad("params." + k + ": expected a nonempty array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) bad("params." + k + ": expected a nonempty array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<long> ints(const std::string& k) {
    if (!has(k)) bad("params." + k + ": required");
    const json& v = j_.at(k);
    if (!v.is_array() || v.empty()) bad("params." + k + ": expected a nonempty array of integers");
    std::vector<long> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) bad("params." + k + ": expected a nonempty array of integers");
      out.push_back(x.get<long>());
    }
    return out;
  }

  const json& raw(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) bad("params." + k + ": unknown key");
  }

 private:
  double required(const std::string& k, std::optional<double> def) {
    if (!def) bad("params." + k + ": required");
    return *def;
  }

  const json& j_;
  std::set<std::string> seen_;
};

template <class T>
T guarded(const char* what, T v, bool ok) {
  if (!ok) bad(what);
  return v;
}

// ---------------------------------------------------------------- solve

struct SolveParams {
  int d = 1;
  int log2_inv_h = 4;
  RhsKind rhs = RhsKind::constant;
  double gamma = 1.0;
  double eps = 1e-3;
};

SolveParams read_solve(ParamReader& p) {
  SolveParams s;
  s.d = static_cast<int>(p.integer("d", 1));
  s.log2_inv_h = static_cast<int>(p.integer("log2_inv_h", 4));
  const std::string rhs = p.str("rhs", "constant");
  try {
    s.rhs = parse_rhs_kind(rhs);
  } catch (const Error&) {
    bad("params.rhs: expected constant or exp_decay");
  }
  if (s.rhs == RhsKind::explicit_coeffs) bad("params.rhs: explicit coefficients are not supported in configs");
  s.gamma = p.num("gamma", 1.0);
  s.eps = p.positive("eps", 1e-3);
  p.finish();
  if (s.d < 1 || s.log2_inv_h < 1 || s.d * s.log2_inv_h > 10) bad("params: need d >= 1, log2_inv_h >= 1, d*log2_inv_h <= 10");
  if (s.eps >= 1.0) bad("params.eps: must lie in (0, 1)");
  if (s.gamma < 0.5) bad("params.gamma: must be at least 0.5 so that A + B stays invertible");
  return s;
}

double state_distance(const CVector& x, const CVector& y) {
  const cplx ov = y.dot(x);
  const cplx ph = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0);
  return (x - ph * y).norm();
}

Table run_solve(const SolveParams& s) {
  EllipticSystem es = build_elliptic({s.d, s.log2_inv_h, s.rhs, {}});
  const long N = es.v.rows();
  const long n1 = 1L << s.log2_inv_h;
  const long stride = N / n1;
  CMatrix b = CMatrix::Zero(N, N);
  for (long k = 0; k < N; ++k) {
    const double x1 = static_cast<double>(k / stride) / static_cast<double>(n1);
    b(k, k) = s.gamma * (3.0 + std::cos(5.0 * 2.0 * std::numbers::pi * x1)) - 1.0;
  }
  const double nb = spectral_norm(b);
  const CMatrix apb = es.matrix() + b;
  const CVector& rhs = es.rhs_state;
  CVector exact = apb.fullPivLu().solve(rhs);
  exact /= exact.norm();

  Table t{"solve",
          {"method", "dim", "eps", "xi", "kappa", "err_vs_exact", "queries_UA_prime", "queries_UB", "queries_Ub",
           "poly_degree"},
          {}};
  auto row = [&](const std::string& m, const SolveResult& r) {
    t.rows.push_back({m, N, s.eps, r.xi, r.kappa, state_distance(r.state, exact), r.cost.queries_UA_prime,
                      r.cost.queries_UB, r.cost.queries_Ub, static_cast<long>(r.cost.poly_degree)});
  };
  row("qsvt", qsvt_solve(LogicalOperator{apb, spectral_norm(apb), 0.0}, rhs, s.eps));
  PrecondProblem p{normal_inverse_logical(es.v, es.oracle), LogicalOperator{b, nb > 0 ? nb : 1.0, 0.0}, {}, rhs};
  row("preconditioned", precond_solve(p, s.eps));
  return t;
}

// ---------------------------------------------------------------- sigma_scan

struct ScanParams {
  std::vector<double> gammas;
  int grid_n = kDefaultScanGrid;
};

ScanParams read_scan(ParamReader& p) {
  ScanParams s;
  s.gammas = p.nums("gammas");
  s.grid_n = static_cast<int>(p.integer("grid_n", kDefaultScanGrid));
  p.finish();
  if (s.grid_n < 4 || s.grid_n > 1024 || !is_power_of_two(s.grid_n))
    bad("params.grid_n: expected a power of two in [4, 1024]");
  return s;
}

Table run_scan(const ScanParams& s, Exec exec) {
  Table t{"sigma_scan", {"gamma", "sigma_min", "c_ab_bound"}, {}};
  for (const auto& r : sigma_min_scan(s.gammas, s.grid_n, exec)) t.rows.push_back({r.gamma, r.sigma_min, r.c_ab_bound});
  return t;
}

// ---------------------------------------------------------------- greens

struct GreensParams {
  std::string model = "hubbard";
  int lx = 2, ly = 1;
  double t = 1.0, u = 4.0, epsilon = 0.5;
  Split split = Split::interaction_as_a;
  int n_e = -1;
  int i = 1, j = 1;
  double eta = 0.5, eps = 1e-3;
  GroundStateNoise noise;
  std::vector<cplx> zs;
};

GreensParams read_greens(ParamReader& p) {
  GreensParams s;
  s.model = p.str("model", "hubbard");
  if (s.model == "hubbard") {
    s.lx = static_cast<int>(p.integer("lx", 2));
    s.ly = static_cast<int>(p.integer("ly", 1));
    s.t = p.num("t", 1.0);
    s.u = p.num("U", 4.0);
    const std::string split = p.str("split", "interaction");
    if (split == "interaction") s.split = Split::interaction_as_a;
    else if (split == "kinetic") s.split = Split::kinetic_as_a;
    else bad("params.split: expected interaction or kinetic");
    if (s.lx < 1 || s.ly < 1 || 2 * s.lx * s.ly > kMaxOrbitals) bad("params: lattice too large");
  } else if (s.model == "single_orbital") {
    s.epsilon = p.num("epsilon", 0.5);
  } else {
    bad("params.model: expected hubbard or single_orbital");
  }
  s.n_e = static_cast<int>(p.integer("n_e", -1));
  s.i = static_cast<int>(p.integer("i", 1));
  s.j = static_cast<int>(p.integer("j", 1));
  s.eta = p.positive("eta", 0.5);
  s.eps = p.positive("eps", 1e-3);
  s.noise.varsigma = p.num("varsigma", 0.0);
  s.noise.varsigma_prime = p.num("varsigma_prime", 0.0);
  s.noise.p = p.positive("p", 1.0);
  if (p.has("z_points")) {
    const json& zp = p.raw("z_points");
    if (!zp.is_array() || zp.empty()) bad("params.z_points: expected a nonempty array of [re, im] pairs");
    for (const auto& z : zp) {
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        bad("params.z_points: expected a nonempty array of [re, im] pairs");
      s.zs.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
  } else if (p.has("z_grid")) {
    ParamReader g(p.raw("z_grid"));
    const double lo = g.num("re_min"), hi = g.num("re_max"), im = g.num("im");
    const long n = g.integer("points");
    g.finish();
    if (n < 1 || n > 100000) bad("params.z_grid.points: expected 1..100000");
    for (long k = 0; k < n; ++k) s.zs.emplace_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1), im);
  } else {
    bad("params: one of z_points or z_grid is required");
  }
  p.finish();
  for (const auto& z : s.zs)
    if (std::abs(z.imag()) < s.eta) bad("params: every z needs |Im z| >= eta");
  if (s.eps >= 1.0) bad("params.eps: must lie in (0, 1)");
  return s;
}

Table run_greens(const GreensParams& s, Exec exec) {
  const FockHamiltonian h =
      s.model == "hubbard" ? hubbard_hamiltonian(s.lx, s.ly, s.t, s.u, s.split) : single_orbital_hamiltonian(s.epsilon);
  const int ne = s.n_e >= 0 ? s.n_e : (s.model == "hubbard" ? h.n_sites : 0);
  const GroundStateOracle gs = ground_state(h, ne, s.noise);
  Table t{"greens", {"re_z", "im_z", "i", "j", "re_G", "im_G", "method", "err_vs_exact"}, {}};
  for (const auto& r : greens_sweep(h, gs, s.zs, s.i, s.j, s.eta, s.eps, exec))
    t.rows.push_back({r.z.real(), r.z.imag(), static_cast<long>(r.i), static_cast<long>(r.j), r.g.real(), r.g.imag(),
                      r.method, r.err_vs_exact});
  return t;
}

// ---------------------------------------------------------------- gibbs

struct GibbsParams {
  std::vector<double> diag;
  long random_n = 0;
  double b_scale = 0.0;
  double shift = 0.0;
  double spread = 3.0;
  double beta = 1.0;
  GibbsRoute route = GibbsRoute::contour;
  double eps = 1e-6;
};

GibbsParams read_gibbs(ParamReader& p) {
  GibbsParams s;
  if (p.has("diag")) {
    s.diag = p.nums("diag");
  } else {
    s.random_n = p.integer("n", 4);
    if (s.random_n < 1 || s.random_n > 64) bad("params.n: expected 1..64");
  }
  s.b_scale = p.num("b_scale", 0.0);
  s.shift = p.num("shift", s.diag.empty() ? 0.2 : 0.0);
  s.spread = p.positive("spread", 3.0);
  s.beta = p.positive("beta", 1.0);
  try {
    s.route = parse_gibbs_route(p.str("route", "contour"));
  } catch (const Error&) {
    bad("params.route: expected contour or inverse");
  }
  s.eps = p.positive("eps", 1e-6);
  p.finish();
  if (s.eps >= 1.0) bad("params.eps: must lie in (0, 1)");
  if (s.diag.size() > 64) bad("params.diag: at most 64 entries");
  if (s.b_scale < 0.0) bad("params.b_scale: must be nonnegative");
  return s;
}

Table run_gibbs(const GibbsParams& s, std::uint64_t seed, Exec exec) {
  std::mt19937_64 rng(seed);
  Diagonalization a;
  if (!s.diag.empty()) {
    const long n = static_cast<long>(s.diag.size());
    a.v = CMatrix::Identity(n, n);
    a.d = RVector::Map(s.diag.data(), n);
  } else {
    const long n = s.random_n;
    std::normal_distribution<double> nd;
    CMatrix g(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) g(i, j) = cplx(nd(rng), nd(rng));
    Eigen::HouseholderQR<CMatrix> qr(g);
    a.v = qr.householderQ() * CMatrix::Identity(n, n);
    std::uniform_real_distribution<double> ud(0.0, s.spread);
    a.d = RVector(n);
    for (long i = 0; i < n; ++i) a.d(i) = ud(rng);
  }
  const long n = a.d.size();
  LogicalOperator b{CMatrix::Zero(n, n), 0.0, 0.0};
  if (s.b_scale > 0.0) {
    std::normal_distribution<double> nd;
    CMatrix g(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) g(i, j) = cplx(nd(rng), nd(rng));
    CMatrix hb = 0.5 * (g + g.adjoint());
    hb *= s.b_scale / spectral_norm(hb);
    b = LogicalOperator{hb, s.b_scale, 0.0};
  }
  // keep A + B positive semidefinite
  a.d.array() += s.shift + (s.b_scale > 0.0 ? s.b_scale : 0.0);
  const GibbsResult g = purified_gibbs(a, b, s.beta, s.route, s.eps, exec);
  Table t{"gibbs", {"beta", "xi", "xi_exact", "trace_dist_to_exact", "route"}, {}};
  t.rows.push_back({s.beta, g.xi, g.xi_exact, g.trace_dist_to_exact, std::string(to_string(g.route))});
  return t;
}

// ---------------------------------------------------------------- contour_convergence

struct ContourParams {
  std::vector<double> betas;
  std::vector<long> js;
  std::optional<double> T;
  double t_eps = 1e-6;
  double x_max = 50.0;
  long points = 10000;
  QuadBoundForm form = QuadBoundForm::max_beta;
};

ContourParams read_contour(ParamReader& p) {
  ContourParams s;
  if (p.has("betas")) s.betas = p.nums("betas");
  else s.betas = {p.positive("beta", 1.0)};
  for (double b : s.betas)
    if (!(b > 0.0)) bad("params.betas: must be positive");
  s.js = p.ints("J_list");
  for (long J : s.js)
    if (J < 2 || J > kMaxContourJ) bad("params.J_list: entries must lie in [2, 100000]");
  if (p.has("T")) s.T = p.num("T");
  if (s.T && !(*s.T >= 1.0)) bad("params.T: must be at least 1");
  s.t_eps = p.positive("T_eps", 1e-6);
  s.x_max = p.positive("x_max", 50.0);
  s.points = p.integer("points", 10000);
  if (s.points < 2) bad("params.points: need at least 2");
  const std::string form = p.str("bound_form", "max_beta");
  if (form == "max_beta") s.form = QuadBoundForm::max_beta;
  else if (form == "min_beta") s.form = QuadBoundForm::min_beta;
  else bad("params.bound_form: expected max_beta or min_beta");
  p.finish();
  if (s.t_eps >= 1.0) bad("params.T_eps: must lie in (0, 1)");
  return s;
}

Table run_contour(const ContourParams& s, Exec exec) {
  Table t{"contour_convergence", {"beta", "T", "J", "empirical_err", "error_bound"}, {}};
  for (double beta : s.betas) {
    const double T = s.T ? *s.T : choose_T_J(beta, s.t_eps, s.form).T;
    std::vector<std::vector<Cell>> rows(s.js.size());
    for_each_index(static_cast<long>(s.js.size()), exec, [&](long k) {
      const int J = static_cast<int>(s.js[static_cast<size_t>(k)]);
      const QuadratureRule r = contour_nodes(beta, T, J);
      rows[static_cast<size_t>(k)] = {beta, T, static_cast<long>(J),
                                      quadrature_empirical_error(r, s.x_max, s.points, Exec::serial),
                                      quadrature_error_bound(beta, T, J, s.form)};
    });
    for (auto& r : rows) t.rows.push_back(std::move(r));
  }
  return t;
}

// ---------------------------------------------------------------- cheb_convergence

struct ChebParams {
  double zeta = 1.0;
  std::vector<long> degrees;
  long grid = 10000;
  int r_max = 8;
};

ChebParams read_cheb(ParamReader& p) {
  ChebParams s;
  s.zeta = p.positive("zeta", 1.0);
  s.degrees = p.ints("degrees");
  for (long d : s.degrees)
    if (d < 1 || d > 20000) bad("params.degrees: entries must lie in [1, 20000]");
  s.grid = p.integer("grid", 10000);
  s.r_max = static_cast<int>(p.integer("r_max", 8));
  p.finish();
  if (s.grid < 2) bad("params.grid: need at least 2");
  if (s.r_max < 1 || s.r_max > 10) bad("params.r_max: expected 1..10");
  return s;
}

Table run_cheb(const ChebParams& s, Exec exec) {
  const double zeta = s.zeta;
  const ScalarFn g = [zeta](double y) {
    if (y == 0.0) return 0.0;
    const double v = std::exp(-zeta / std::abs(y));
    return y > 0.0 ? v : -v;
  };
  // sup |g^{(r+1)}| by sampling (0, 1]; g is odd
  std::vector<double> sup(static_cast<size_t>(s.r_max) + 1, 0.0);
  for (int r = 1; r <= s.r_max; ++r)
    for (int i = 1; i <= 2000; ++i)
      sup[static_cast<size_t>(r)] =
          std::max(sup[static_cast<size_t>(r)], std::abs(fd_derivative(g, i / 2000.0, r + 1, 2e-3 * (r + 1), 8)));

  const RVector ys = RVector::LinSpaced(s.grid, -1.0, 1.0);
  Table t{"cheb_convergence", {"zeta", "degree", "empirical_err", "derivative_bound", "best_r"}, {}};
  std::vector<std::vector<Cell>> rows(s.degrees.size());
  for_each_index(static_cast<long>(s.degrees.size()), exec, [&](long k) {
    const int d = static_cast<int>(s.degrees[static_cast<size_t>(k)]);
    const ChebSeries c = chebyshev_coeffs(g, d);
    double err = 0.0;
    for (long i = 0; i < ys.size(); ++i) err = std::max(err, std::abs(c(ys(i)) - g(ys(i))));
    double best = INFINITY;
    long best_r = 0;
    for (int r = 1; r <= s.r_max; ++r) {
      const double b = chebyshev_truncation_bound(r, sup[static_cast<size_t>(r)], d);
      if (b < best) best = b, best_r = r;
    }
    rows[static_cast<size_t>(k)] = {zeta, static_cast<long>(d), err, best, best_r};
  });
  for (auto& r : rows) t.rows.push_back(std::move(r));
  return t;
}

// ---------------------------------------------------------------- cost_table

struct CostParams {
  std::vector<std::string> models;
  CostTableParams base;
};

CostParams read_cost(ParamReader& p) {
  CostParams s;
  if (p.has("models")) {
    const json& m = p.raw("models");
    if (!m.is_array() || m.empty()) bad("params.models: expected a nonempty array of names");
    for (const auto& x : m) {
      if (!x.is_string()) bad("params.models: expected a nonempty array of names");
      s.models.push_back(x.get<std::string>());
    }
  } else {
    s.models = {"generic", "hubbard", "planewave_dual", "schwinger"};
  }
  CostTableParams& c = s.base;
  c.z_abs = p.num("z_abs", c.z_abs);
  c.eta = p.positive("eta", c.eta);
  c.eps = p.positive("eps", c.eps);
  c.p = p.positive("p", c.p);
  c.varsigma = p.num("varsigma", c.varsigma);
  c.alpha_h = p.num("alpha_h", c.alpha_h);
  c.alpha_b = p.num("alpha_b", c.alpha_b);
  c.sigma = p.num("sigma", c.sigma);
  c.n = p.positive("n", c.n);
  c.t = p.num("t", c.t);
  c.u = p.num("U", c.u);
  c.omega = p.positive("omega", c.omega);
  c.x = p.num("x", c.x);
  c.mu = p.num("mu", c.mu);
  c.gauge_cutoff = p.num("gauge_cutoff", c.gauge_cutoff);
  p.finish();
  for (const auto& m : s.models)
    if (m != "generic" && m != "hubbard" && m != "planewave_dual" && m != "schwinger")
      bad("params.models: unknown model '" + m + "'");
  return s;
}

Table run_cost(const CostParams& s) {
  Table t{"cost_table", {"model", "algorithm", "alpha_h", "alpha_b", "sigma", "queries_upsi", "queries_blocks", "error"},
          {}};
  for (const auto& m : s.models) {
    CostTableParams c = s.base;
    c.model = m;
    for (const auto& r : query_cost_table(c))
      t.rows.push_back({r.model, r.algorithm, r.alpha_h, r.alpha_b, r.sigma, r.queries_upsi, r.queries_blocks, r.error});
  }
  return t;
}

}  // namespace

Experiment parse_experiment(const std::string& s) {
  for (size_t k = 0; k < std::size(kExperimentNames); ++k)
    if (s == kExperimentNames[k]) return static_cast<Experiment>(k);
  bad("unknown experiment '" + s + "'");
}

const char* to_string(Experiment e) { return kExperimentNames[static_cast<size_t>(e)]; }

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) bad("config must be a JSON object");
  static const std::set<std::string> keys = {"experiment", "seed", "params", "output_dir", "formats"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) bad("unknown top-level key '" + k + "'");
  if (!j.contains("experiment") || !j["experiment"].is_string()) bad("experiment: required string");
  ExperimentConfig c;
  c.experiment = parse_experiment(j["experiment"].get<std::string>());
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long>() >= 0))
      bad("seed: expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) bad("params: expected an object");
    c.params = j["params"];
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) bad("output_dir: expected a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("formats")) {
    const json& f = j["formats"];
    if (!f.is_array() || f.empty()) bad("formats: expected a nonempty array");
    c.formats.clear();
    for (const auto& x : f) {
      const std::string s = x.is_string() ? x.get<std::string>() : "";
      if (s == "csv") c.formats.push_back(ReportFormat::csv);
      else if (s == "json") c.formats.push_back(ReportFormat::json);
      else bad("formats: entries must be \"csv\" or \"json\"");
    }
  }
  c.hash = config_hash(j);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

void validate_params(const ExperimentConfig& c) {
  ParamReader p(c.params);
  switch (c.experiment) {
    case Experiment::solve: read_solve(p); break;
    case Experiment::sigma_scan: read_scan(p); break;
    case Experiment::greens: read_greens(p); break;
    case Experiment::gibbs: read_gibbs(p); break;
    case Experiment::contour_convergence: read_contour(p); break;
    case Experiment::cheb_convergence: read_cheb(p); break;
    case Experiment::cost_table: read_cost(p); break;
  }
}

std::vector<Table> compute_experiment(const ExperimentConfig& c, Exec exec) {
  ParamReader p(c.params);
  switch (c.experiment) {
    case Experiment::solve: return {run_solve(read_solve(p))};
    case Experiment::sigma_scan: return {run_scan(read_scan(p), exec)};
    case Experiment::greens: return {run_greens(read_greens(p), exec)};
    case Experiment::gibbs: return {run_gibbs(read_gibbs(p), c.seed, exec)};
    case Experiment::contour_convergence: return {run_contour(read_contour(p), exec)};
    case Experiment::cheb_convergence: return {run_cheb(read_cheb(p), exec)};
    case Experiment::cost_table: return {run_cost(read_cost(p))};
  }
  return {};
}

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& opt) {
  ExperimentConfig c = config;
  if (opt.seed) c.seed = *opt.seed;
  const std::string dir = opt.output_dir.value_or(c.output_dir);
  validate_params(c);

  RunResult r;
  r.tables = compute_experiment(c, opt.jobs > 1 ? Exec::parallel : Exec::serial);
  const std::string stamp = utc_timestamp();
  const std::vector<std::string> comments = {std::string("qprecon ") + to_string(c.experiment),
                                             "config_hash " + c.hash, "seed " + std::to_string(c.seed),
                                             "generated " + stamp};
  const json meta = {{"experiment", to_string(c.experiment)},
                     {"config_hash", c.hash},
                     {"seed", c.seed},
                     {"generated", stamp}};
  for (const auto& t : r.tables)
    for (ReportFormat f : c.formats) r.files.push_back(emit_report(t, f, dir, comments, meta));
  return r;
}

}  // namespace qprecon
