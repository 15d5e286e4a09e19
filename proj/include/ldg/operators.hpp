#pragma once

#include <vector>

#include "ldg/basis.hpp"
#include "ldg/mesh.hpp"
#include "ldg/model.hpp"

namespace ldg {

/// Alternating flux pairing: which side q-hat and p-hat are taken from.
/// RightQLeftP: q-hat = q^R, p-hat = p^L. LeftQRightP is the mirror.
enum class FluxChoice { RightQLeftP, LeftQRightP };

/// Mesh + basis + quadrature/constraint point tables for one discretization.
/// Everything here is immutable after construction.
class Discretization {
 public:
  Discretization(const Mesh& mesh, int degree, int volume_points = 0,
                 int constraint_points = 0);

  const Mesh& mesh() const { return *mesh_; }
  const Basis& basis() const { return basis_; }
  int num_scalar_dofs() const { return mesh_->num_elements() * basis_.size(); }
  int num_vector_dofs() const { return mesh_->dim() * num_scalar_dofs(); }
  int dof(int element, int j) const { return element * basis_.size() + j; }
  int vdof(int axis, int element, int j) const {
    return axis * num_scalar_dofs() + dof(element, j);
  }

  const TensorRule& volume_rule() const { return volume_; }
  const BasisTable& volume_table() const { return vol_table_; }
  double volume_jacobian() const { return vol_jac_; }

  /// Transversal quadrature along a face (single unit-weight point in 1D).
  const QuadratureRule& face_rule() const { return face_rule_; }
  /// Basis traces at face quadrature points; side 0 = lower (xi_axis = -1),
  /// side 1 = upper.
  const Mat& trace(int axis, int side) const { return trace_[axis][side]; }
  /// Physical measure carried by one face quadrature weight.
  double face_jacobian(int axis) const { return face_jac_[axis]; }
  /// Physical coordinates of face quadrature point fq on the given face side
  /// of element e.
  std::array<double, 2> face_point(int e, int axis, int side, int fq) const;

  /// Gauss-Lobatto constraint points (tensorized) and basis values there.
  const TensorRule& constraint_points() const { return cpoints_; }
  const BasisTable& constraint_table() const { return ctable_; }
  int points_per_element() const { return cpoints_.size(); }

  /// u values at the volume quadrature points of every element
  /// (num_elements x nq). Checks admissibility against spec when given.
  Mat element_values(const Vec& U, const ProblemSpec* spec = nullptr) const;

  /// Same, at the Gauss-Lobatto constraint points. All state-dependent
  /// integrands are evaluated here, so a state that satisfies the positivity
  /// constraints is never probed outside its admissible range.
  Mat element_values_c(const Vec& U, const ProblemSpec* spec = nullptr) const;

 private:
  const Mesh* mesh_;
  Basis basis_;
  TensorRule volume_;
  BasisTable vol_table_;
  double vol_jac_;
  QuadratureRule face_rule_;
  Mat trace_[2][2];
  double face_jac_[2] = {1.0, 1.0};
  TensorRule cpoints_;
  BasisTable ctable_;
};

/// The state-independent operators of the LDG scheme.
struct OperatorSet {
  Vec mass_diag;                // M (diagonal in the Legendre basis)
  SpMat M;                      // same, as a sparse matrix
  SpMat B;                      // Ns x dNs, B*Q = L_h^1(Q)
  SpMat A;                      // dNs x Ns, A*P = -L_h^3(P)
  Vec element_integral;         // int_K phi_j, the gradient of the mass map
  Eigen::SparseVector<double> boundary_q_weights;  // w: w.Q = int_dOmega qhat.nu
  double sigma = 0.0;           // smallest eigenvalue of M
};

OperatorSet assemble_operators(const Discretization& disc, FluxChoice flux);

/// State-dependent assembly and the per-stage operator chain
///   P = M^{-1} D(U),  S = bM^{-1}(A P + r(t)),  Q = bM^{-1} C_d(U) S,
/// with r(t) the Dirichlet boundary load (zero otherwise).
class LdgAssembler {
 public:
  /// Strict evaluation throws InadmissibleState when the state leaves the
  /// model's admissible range at a constraint point. Clipped evaluation
  /// clamps the nonlinear-function arguments to
  /// [lo + u_min/2, hi - u_min/2] instead; intermediate Newton iterates of
  /// the limited solve may leave the range transiently, while converged
  /// limited states (u >= u_min at all constraint points) are never
  /// affected by the clamp.
  enum class Eval { Strict, Clipped };

  LdgAssembler(const Discretization& disc, const ProblemSpec& spec,
               const OperatorSet& ops, Eval eval = Eval::Strict);

  const Discretization& disc() const { return *disc_; }
  const ProblemSpec& spec() const { return *spec_; }
  const OperatorSet& ops() const { return *ops_; }

  /// D_i = int (phi(x) + H'(U_h)) phi_i per element.
  Vec assemble_D(const Vec& U) const;
  /// Element blocks C_e[i][j] = int f(U_h) phi_j phi_i.
  std::vector<Mat> assemble_C(const Vec& U) const;
  /// Element blocks of dD/dU: int H''(U_h) phi_j phi_i.
  std::vector<Mat> assemble_DU(const Vec& U) const;
  /// Element blocks of d(C S)/dU for one axis: int f'(U_h) s_a phi_j phi_i.
  std::vector<Mat> assemble_G(const Vec& U, const Vec& S, int axis) const;

  Vec source_moments(double t) const;   // int S(x,t) phi_i, zero if no source
  double source_integral(double t) const;
  Vec dirichlet_load(double t) const;   // boundary p-hat data, dNs

  struct Chain {
    Vec P, S, Q;
  };
  Chain chain(const Vec& U, double t) const;

  /// Exact Jacobian of the chain output Q with respect to U.
  SpMat dQdU(const Vec& U, const Chain& ch) const;

  /// L2 moments of the initial condition and its integral.
  Vec initial_moments() const;
  double initial_integral() const;

 private:
  /// State values at the constraint points, admissibility-checked or clipped
  /// according to the evaluation mode. When dmask is given it receives the
  /// clamp derivative (0 at clipped points, 1 elsewhere) so Jacobian blocks
  /// stay consistent with the clipped residual.
  Mat state_values(const Vec& U, Mat* dmask = nullptr) const;

  const Discretization* disc_;
  const ProblemSpec* spec_;
  const OperatorSet* ops_;
  Eval eval_;
};

}  // namespace ldg
