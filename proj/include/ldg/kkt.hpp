#pragma once

#include <limits>
#include <optional>

#include "ldg/operators.hpp"

namespace ldg {

/// Positivity constraints g_j(U) = u_min - U_h(x_j) at the Gauss-Lobatto
/// points of every element, plus the affine part of the mass equality.
/// Both gradients are constant in U.
struct ConstraintSet {
  SpMat point_eval;  // m x Ns, row j evaluates U_h at constraint point j
  double u_min = 0.0;
  // safeguard ceiling for project_feasible (no multiplier attached); finite
  // only when the model has a finite admissible upper bound
  double u_cap = std::numeric_limits<double>::infinity();
  // per-element nodal transform: point_values maps modal coefficients to
  // values at the constraint points (square, identical for every element)
  Mat point_values;
  Mat point_values_inv;

  int size() const { return static_cast<int>(point_eval.rows()); }
  Vec eval_g(const Vec& U) const {
    return Vec::Constant(size(), u_min) - point_eval * U;
  }
  // clamp U at the constraint points to u >= u_min, element by element
  void project_feasible(Vec& U) const;
};

ConstraintSet build_constraints(
    const Discretization& disc, double u_min,
    double u_cap = std::numeric_limits<double>::infinity());

/// One implicit solve: residual L(U), its Jacobian, and the scalar mass
/// equality h(U) with gradient. Implementations: a DIRK stage and the
/// constrained initial projection.
class KktProblem {
 public:
  virtual ~KktProblem() = default;
  virtual Vec residual(const Vec& U) = 0;
  virtual SpMat jacobian(const Vec& U) = 0;
  virtual double equality(const Vec& U) = 0;
  virtual Vec equality_grad(const Vec& U) = 0;
  /// Natural magnitude of the residual entries; the Newton tolerance is
  /// multiplied by this so convergence in the coefficients is
  /// mesh-independent (the residual carries a mass-matrix factor ~ h^d).
  virtual double residual_scale() const { return 1.0; }
  /// |H''(u)| (clamped to the admissible range), or 0 when the problem has
  /// no entropy structure.  Used to bound Newton steps where the
  /// linearization degenerates.
  virtual double entropy_curvature(double) const { return 0.0; }
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  bool warm_start = true;
};

struct KktResult {
  Vec U;
  double mu = 0.0;
  Vec lambda;
  int iterations = 0;
  double residual_norm = 0.0;
  int active_count = 0;
  double max_lambda = 0.0;
  std::vector<double> residual_history;
};

/// Active-set semi-smooth Newton on F(z) = (L + grad_h mu + grad_g^T lambda,
/// -h, min(-g, lambda)). The min-branch tie -g_j == lambda_j goes to the
/// active (constraint) branch.
KktResult semismooth_newton(KktProblem& problem, const ConstraintSet& cs,
                            const Vec& U0, double mu0, const Vec& lambda0,
                            const NewtonOptions& opts);

/// Plain Newton on L(U) = 0, used when the limiter is off.
KktResult plain_newton(KktProblem& problem, const Vec& U0,
                       const NewtonOptions& opts);

/// One DIRK stage: L(U) = M(U - U^n) + hist + tau a_ii (B Q(U) - src(t_i)),
/// with hist the frozen contribution of earlier stages. The equality carries
/// the reference mass, earlier-stage boundary fluxes and source integrals.
class DirkStageProblem : public KktProblem {
 public:
  DirkStageProblem(const LdgAssembler& assembler, Vec Uprev, Vec history,
                   double mass_ref, double flux_history, double tau,
                   double a_ii, double stage_time);

  Vec residual(const Vec& U) override;
  SpMat jacobian(const Vec& U) override;
  double equality(const Vec& U) override;
  Vec equality_grad(const Vec& U) override;
  double residual_scale() const override;
  double entropy_curvature(double u) const override;

  /// Chain output Q at the last evaluated state.
  const Vec& last_Q() const { return chain_.Q; }
  const Vec& last_S() const { return chain_.S; }

 private:
  void ensure_chain(const Vec& U);
  void ensure_dqdu(const Vec& U);

  const LdgAssembler* asm_;
  Vec Uprev_, history_;
  double mass_ref_, flux_history_, tau_, a_ii_, stage_time_;
  Vec src_moments_;
  double src_integral_;
  bool has_boundary_flux_;

  Vec cached_U_;
  LdgAssembler::Chain chain_;
  bool have_chain_ = false;
  SpMat dqdu_;
  bool have_dqdu_ = false;
};

/// Constrained L2 projection of the initial condition:
/// L(U) = M U - (u0 moments), h = int u0 - int U_h.
class ProjectionProblem : public KktProblem {
 public:
  explicit ProjectionProblem(const LdgAssembler& assembler);
  Vec residual(const Vec& U) override;
  SpMat jacobian(const Vec& U) override;
  double equality(const Vec& U) override;
  Vec equality_grad(const Vec& U) override;
  double residual_scale() const override;

 private:
  const LdgAssembler* asm_;
  Vec moments_;
  double mass_;
};

/// Project u0, enforcing positivity and mass when a constraint set is given.
/// Requires mean(u0) >= u_min for the constrained variant.
Vec project_initial(const LdgAssembler& assembler, const ConstraintSet* cs,
                    const NewtonOptions& opts);

}  // namespace ldg
