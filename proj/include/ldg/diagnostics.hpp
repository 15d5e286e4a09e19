#pragma once

#include <vector>

#include "ldg/operators.hpp"
#include "ldg/kkt.hpp"

namespace ldg {

/// Per-step diagnostics row.
struct StepRecord {
  double time = 0.0;
  double tau = 0.0;
  double entropy = 0.0;
  double mass = 0.0;
  double min_u = 0.0;       // over the Gauss-Lobatto constraint points
  int active_count = 0;
  double max_lambda = 0.0;
  int newton_iterations = 0;
};

/// Discrete entropy E_h = int (U_h phi + H(U_h)), by volume quadrature.
double discrete_entropy(const LdgAssembler& assembler, const Vec& U);

double total_mass(const LdgAssembler& assembler, const Vec& U);

/// Minimum of U_h over the constraint points of every element.
double min_at_constraint_points(const Discretization& disc, const Vec& U);

struct ErrorNorms {
  double linf = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
};

/// Errors against the exact solution at time t. Linf is sampled on a dense
/// per-element grid with 4(k+1) points per axis; L1/L2 by volume quadrature.
ErrorNorms error_norms(const LdgAssembler& assembler, const Vec& U, double t);

struct ConvergenceRow {
  int elements = 0;
  double linf = 0.0;
  double linf_order = 0.0;
  double l1 = 0.0;
  double l1_order = 0.0;
  double min_u = 0.0;
};

/// Orders from successive mesh doublings: log2(e_{M/2} / e_M).
std::vector<ConvergenceRow> convergence_table(
    const std::vector<int>& meshes, const std::vector<ErrorNorms>& errors,
    const std::vector<double>& min_u);

/// Empirical bound tau <= sigma/(4c) from sampled operator entries at the
/// given state; diagnostic only, never enforced.
double p_function_tau_bound(const LdgAssembler& assembler, const Vec& U);

}  // namespace ldg
