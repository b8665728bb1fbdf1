#pragma once

namespace qprecon {

// Leading-order query estimates (unit constants) for one algorithm run.
struct CostReport {
  double queries_UA_prime = 0.0;
  double queries_UB = 0.0;
  double queries_Ub = 0.0;
  double queries_UPsi = 0.0;
  double primitive_gate_proxy = 0.0;
  double achieved_error_budget = 0.0;
  // oracle uses for the fast-inversion input model
  double queries_V = 0.0;
  double queries_V_inv = 0.0;
  double queries_OD = 0.0;
  double queries_OD_inv = 0.0;
  // polynomial degree actually synthesized (0 when not applicable)
  int poly_degree = 0;
  // degree guaranteed by the a priori bound, when one applies
  double degree_bound = 0.0;
  int qubits = 0;
};

}  // namespace qprecon
