#include "ldg/operators.hpp"

#include <cmath>

namespace ldg {

Discretization::Discretization(const Mesh& mesh, int degree, int volume_points,
                               int constraint_points)
    : mesh_(&mesh), basis_(degree, mesh.dim()) {
  int dim = mesh.dim();
  int nq = volume_points > 0 ? volume_points : degree + 2;
  int np = constraint_points > 0 ? constraint_points : degree + 1;

  volume_ = tensor_rule(gauss_rule(nq), dim);
  vol_table_ = basis_.eval(volume_);
  vol_jac_ = 1.0;
  for (int a = 0; a < dim; ++a) vol_jac_ *= 0.5 * mesh.h(a);

  if (dim == 1) {
    face_rule_.kind = QuadKind::Gauss;
    face_rule_.points = Vec::Zero(1);
    face_rule_.weights = Vec::Ones(1);
  } else {
    face_rule_ = gauss_rule(nq);
  }
  for (int axis = 0; axis < dim; ++axis) {
    if (dim == 2) face_jac_[axis] = 0.5 * mesh.h(1 - axis);
    int nf = face_rule_.size();
    for (int side = 0; side < 2; ++side) {
      Mat pts(nf, dim);
      for (int fq = 0; fq < nf; ++fq) {
        pts(fq, axis) = side == 0 ? -1.0 : 1.0;
        if (dim == 2) pts(fq, 1 - axis) = face_rule_.points[fq];
      }
      trace_[axis][side] = basis_.eval(pts).values;
    }
  }

  QuadratureRule cp1d;
  if (np == 1) {
    cp1d.kind = QuadKind::GaussLobatto;
    cp1d.points = Vec::Zero(1);
    cp1d.weights = Vec::Constant(1, 2.0);
  } else {
    cp1d = gauss_lobatto_rule(np);
  }
  cpoints_ = tensor_rule(cp1d, dim);
  ctable_ = basis_.eval(cpoints_);
}

std::array<double, 2> Discretization::face_point(int e, int axis, int side,
                                                 int fq) const {
  double ref[2] = {0.0, 0.0};
  ref[axis] = side == 0 ? -1.0 : 1.0;
  if (mesh_->dim() == 2) ref[1 - axis] = face_rule_.points[fq];
  return mesh_->to_physical(e, ref);
}

namespace {

Mat values_at(const Mesh& mesh, int nk, const BasisTable& table, const Vec& U,
              const ProblemSpec* spec) {
  int ne = mesh.num_elements();
  int nq = static_cast<int>(table.values.rows());
  Mat out(ne, nq);
  for (int e = 0; e < ne; ++e) {
    Eigen::Map<const Vec> local(U.data() + e * nk, nk);
    out.row(e) = (table.values * local).transpose();
    if (spec)
      for (int q = 0; q < nq; ++q) spec->check_admissible(out(e, q), e, q);
  }
  return out;
}

}  // namespace

Mat Discretization::element_values(const Vec& U, const ProblemSpec* spec) const {
  return values_at(*mesh_, basis_.size(), vol_table_, U, spec);
}

Mat Discretization::element_values_c(const Vec& U,
                                     const ProblemSpec* spec) const {
  return values_at(*mesh_, basis_.size(), ctable_, U, spec);
}

namespace {

// Face mass matrix between the traces of the source and test elements:
// F(i,j) = sum_fq w_fq trace_src(fq,j) trace_test(fq,i).
Mat face_matrix(const Discretization& disc, int axis, int src_side,
                int test_side) {
  const Mat& ts = disc.trace(axis, src_side);
  const Mat& tt = disc.trace(axis, test_side);
  return tt.transpose() * disc.face_rule().weights.asDiagonal() * ts;
}

}  // namespace

OperatorSet assemble_operators(const Discretization& disc, FluxChoice flux) {
  const Mesh& mesh = disc.mesh();
  const Basis& basis = disc.basis();
  int dim = mesh.dim();
  int nk = basis.size();
  int ns = disc.num_scalar_dofs();
  int nv = disc.num_vector_dofs();

  OperatorSet ops;
  ops.mass_diag.resize(ns);
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int j = 0; j < nk; ++j) {
      auto lc = basis.local_coords(j);
      double m = 0.5 * mesh.h(0) * basis.mass_factor_1d(lc[0]);
      if (dim == 2) m *= 0.5 * mesh.h(1) * basis.mass_factor_1d(lc[1]);
      ops.mass_diag[disc.dof(e, j)] = m;
    }
  ops.sigma = ops.mass_diag.minCoeff();
  ops.M.resize(ns, ns);
  {
    std::vector<Triplet> trip;
    for (int i = 0; i < ns; ++i) trip.emplace_back(i, i, ops.mass_diag[i]);
    ops.M.setFromTriplets(trip.begin(), trip.end());
  }

  ops.element_integral = Vec::Zero(ns);
  const auto& vol = disc.volume_rule();
  const auto& vt = disc.volume_table();
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int j = 0; j < nk; ++j) {
      double s = 0.0;
      for (int q = 0; q < vol.size(); ++q) s += vol.weights[q] * vt.values(q, j);
      ops.element_integral[disc.dof(e, j)] = s * disc.volume_jacobian();
    }

  std::vector<Triplet> Bt, At;
  ops.boundary_q_weights.resize(nv);

  // Volume terms, identical for every element on a uniform mesh:
  // Svol_a(i,j) = int_K phi_j d_a phi_i.
  for (int a = 0; a < dim; ++a) {
    Mat svol = Mat::Zero(nk, nk);
    double scale = disc.volume_jacobian() * 2.0 / mesh.h(a);
    for (int q = 0; q < vol.size(); ++q)
      for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j)
          svol(i, j) += scale * vol.weights[q] * vt.values(q, j) * vt.grads[a](q, i);
    for (int e = 0; e < mesh.num_elements(); ++e)
      for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j) {
          if (svol(i, j) == 0.0) continue;
          Bt.emplace_back(disc.dof(e, i), disc.vdof(a, e, j), svol(i, j));
          At.emplace_back(disc.vdof(a, e, i), disc.dof(e, j), -svol(i, j));
        }
  }

  bool qhat_from_plus = flux == FluxChoice::RightQLeftP;
  for (const Face& f : mesh.faces()) {
    int a = f.axis;
    double fj = disc.face_jacobian(a);
    if (!f.boundary) {
      int qsrc = qhat_from_plus ? f.plus : f.minus;
      int qside = qhat_from_plus ? 0 : 1;  // trace side of qsrc on this face
      int psrc = qhat_from_plus ? f.minus : f.plus;
      int pside = qhat_from_plus ? 1 : 0;
      Mat fq_minus = fj * face_matrix(disc, a, qside, 1);
      Mat fq_plus = fj * face_matrix(disc, a, qside, 0);
      Mat fp_minus = fj * face_matrix(disc, a, pside, 1);
      Mat fp_plus = fj * face_matrix(disc, a, pside, 0);
      for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j) {
          // B face term: -(qhat . nu, rho)_dK; nu = +1 on minus, -1 on plus.
          Bt.emplace_back(disc.dof(f.minus, i), disc.vdof(a, qsrc, j),
                          -fq_minus(i, j));
          Bt.emplace_back(disc.dof(f.plus, i), disc.vdof(a, qsrc, j),
                          fq_plus(i, j));
          // A face term: +(phat, nu_a theta)_dK.
          At.emplace_back(disc.vdof(a, f.minus, i), disc.dof(psrc, j),
                          fp_minus(i, j));
          At.emplace_back(disc.vdof(a, f.plus, i), disc.dof(psrc, j),
                          -fp_plus(i, j));
        }
    } else {
      int e = f.minus < 0 ? f.plus : f.minus;
      int side = f.minus < 0 ? 0 : 1;
      double nu = side == 0 ? -1.0 : 1.0;
      Mat self = fj * face_matrix(disc, a, side, side);
      if (mesh.boundary() == BoundaryKind::ZeroFlux) {
        // qhat.nu = 0: no B term. phat = p^in.
        for (int i = 0; i < nk; ++i)
          for (int j = 0; j < nk; ++j)
            At.emplace_back(disc.vdof(a, e, i), disc.dof(e, j),
                            nu * self(i, j));
      } else if (mesh.boundary() == BoundaryKind::Dirichlet) {
        // qhat = q^in; phat is boundary data, assembled as a load elsewhere.
        for (int i = 0; i < nk; ++i)
          for (int j = 0; j < nk; ++j)
            Bt.emplace_back(disc.dof(e, i), disc.vdof(a, e, j),
                            -nu * self(i, j));
        const auto& fr = disc.face_rule();
        for (int j = 0; j < nk; ++j) {
          double s = 0.0;
          for (int q = 0; q < fr.size(); ++q)
            s += fr.weights[q] * disc.trace(a, side)(q, j);
          ops.boundary_q_weights.coeffRef(disc.vdof(a, e, j)) += nu * fj * s;
        }
      } else {
        throw ConfigError("periodic mesh should have no boundary faces");
      }
    }
  }

  ops.B.resize(ns, nv);
  ops.B.setFromTriplets(Bt.begin(), Bt.end());
  ops.A.resize(nv, ns);
  ops.A.setFromTriplets(At.begin(), At.end());
  ops.B.prune(0.0);
  ops.A.prune(0.0);
  return ops;
}

LdgAssembler::LdgAssembler(const Discretization& disc, const ProblemSpec& spec,
                           const OperatorSet& ops, Eval eval)
    : disc_(&disc), spec_(&spec), ops_(&ops), eval_(eval) {}

Mat LdgAssembler::state_values(const Vec& U, Mat* dmask) const {
  if (eval_ == Eval::Strict) {
    Mat uq = disc_->element_values_c(U, spec_);
    if (dmask) *dmask = Mat::Ones(uq.rows(), uq.cols());
    return uq;
  }
  Mat uq = disc_->element_values_c(U);
  if (dmask) *dmask = Mat::Ones(uq.rows(), uq.cols());
  double margin = 0.5 * spec_->u_min;
  double lo = spec_->admissible_lo + margin;
  double hi = spec_->admissible_hi - margin;
  for (int e = 0; e < uq.rows(); ++e)
    for (int q = 0; q < uq.cols(); ++q) {
      double& u = uq(e, q);
      if ((std::isfinite(lo) && u < lo) || (std::isfinite(hi) && u > hi)) {
        u = std::min(std::max(u, lo), hi);
        if (dmask) (*dmask)(e, q) = 0.0;
      }
    }
  return uq;
}

Vec LdgAssembler::assemble_D(const Vec& U) const {
  const auto& cp = disc_->constraint_points();
  const auto& ct = disc_->constraint_table();
  int ne = disc_->mesh().num_elements();
  int nk = disc_->basis().size();
  Mat uq = state_values(U);
  Vec D = Vec::Zero(disc_->num_scalar_dofs());
  for (int e = 0; e < ne; ++e) {
    Vec integrand(cp.size());
    for (int q = 0; q < cp.size(); ++q) {
      auto x = disc_->mesh().to_physical(e, cp.points.row(q).data());
      integrand[q] = cp.weights[q] *
                     (spec_->phi(x.data()) + spec_->H_prime(uq(e, q)));
    }
    D.segment(e * nk, nk) = disc_->volume_jacobian() *
                            (ct.values.transpose() * integrand);
  }
  return D;
}

namespace {

// Weighted element mass blocks out_e(i,j) = int w(x) phi_j phi_i over K,
// evaluated with the Gauss-Lobatto constraint rule (the weight depends on
// the state, which is only admissible at those points).
std::vector<Mat> weighted_blocks(const Discretization& disc,
                                 const Mat& weight_at_q) {
  const auto& cp = disc.constraint_points();
  const auto& ct = disc.constraint_table();
  int ne = disc.mesh().num_elements();
  std::vector<Mat> blocks(ne);
  for (int e = 0; e < ne; ++e) {
    Vec w = disc.volume_jacobian() *
            (cp.weights.array() * weight_at_q.row(e).transpose().array())
                .matrix();
    blocks[e] = ct.values.transpose() * w.asDiagonal() * ct.values;
  }
  return blocks;
}

SpMat block_diag(const Discretization& disc, const std::vector<Mat>& blocks,
                 int copies) {
  int nk = disc.basis().size();
  int ns = disc.num_scalar_dofs();
  std::vector<Triplet> trip;
  for (int c = 0; c < copies; ++c)
    for (int e = 0; e < static_cast<int>(blocks.size()); ++e)
      for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j)
          if (blocks[e](i, j) != 0.0)
            trip.emplace_back(c * ns + e * nk + i, c * ns + e * nk + j,
                              blocks[e](i, j));
  SpMat out(copies * ns, copies * ns);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace

std::vector<Mat> LdgAssembler::assemble_C(const Vec& U) const {
  Mat uq = state_values(U);
  Mat w = uq.unaryExpr([&](double u) { return spec_->f(u); });
  return weighted_blocks(*disc_, w);
}

std::vector<Mat> LdgAssembler::assemble_DU(const Vec& U) const {
  Mat mask;
  Mat uq = state_values(U, &mask);
  Mat w = uq.unaryExpr([&](double u) { return spec_->H_second(u); })
              .cwiseProduct(mask);
  return weighted_blocks(*disc_, w);
}

std::vector<Mat> LdgAssembler::assemble_G(const Vec& U, const Vec& S,
                                          int axis) const {
  Mat mask;
  Mat uq = state_values(U, &mask);
  int ns = disc_->num_scalar_dofs();
  Mat sq = disc_->element_values_c(S.segment(axis * ns, ns));
  Mat w = uq.binaryExpr(sq, [&](double u, double s) {
             return spec_->f_prime(u) * s;
           }).cwiseProduct(mask);
  return weighted_blocks(*disc_, w);
}

Vec LdgAssembler::source_moments(double t) const {
  Vec out = Vec::Zero(disc_->num_scalar_dofs());
  if (!spec_->has_source()) return out;
  const auto& vol = disc_->volume_rule();
  const auto& vt = disc_->volume_table();
  int nk = disc_->basis().size();
  for (int e = 0; e < disc_->mesh().num_elements(); ++e) {
    Vec sv(vol.size());
    for (int q = 0; q < vol.size(); ++q) {
      auto x = disc_->mesh().to_physical(e, vol.points.row(q).data());
      sv[q] = vol.weights[q] * spec_->source(x.data(), t);
    }
    out.segment(e * nk, nk) = disc_->volume_jacobian() *
                              (vt.values.transpose() * sv);
  }
  return out;
}

double LdgAssembler::source_integral(double t) const {
  if (!spec_->has_source()) return 0.0;
  const auto& vol = disc_->volume_rule();
  double s = 0.0;
  for (int e = 0; e < disc_->mesh().num_elements(); ++e)
    for (int q = 0; q < vol.size(); ++q) {
      auto x = disc_->mesh().to_physical(e, vol.points.row(q).data());
      s += vol.weights[q] * spec_->source(x.data(), t);
    }
  return s * disc_->volume_jacobian();
}

Vec LdgAssembler::dirichlet_load(double t) const {
  Vec r = Vec::Zero(disc_->num_vector_dofs());
  if (spec_->boundary != BoundaryKind::Dirichlet) return r;
  if (!spec_->has_exact())
    throw ConfigError("Dirichlet data requires an exact solution");
  const Mesh& mesh = disc_->mesh();
  int nk = disc_->basis().size();
  for (const Face& f : mesh.faces()) {
    if (!f.boundary) continue;
    int e = f.minus < 0 ? f.plus : f.minus;
    int side = f.minus < 0 ? 0 : 1;
    double nu = side == 0 ? -1.0 : 1.0;
    const auto& fr = disc_->face_rule();
    for (int q = 0; q < fr.size(); ++q) {
      auto x = disc_->face_point(e, f.axis, side, q);
      double pb = spec_->phi(x.data()) +
                  spec_->H_prime(spec_->exact(x.data(), t));
      double w = nu * disc_->face_jacobian(f.axis) * fr.weights[q] * pb;
      for (int i = 0; i < nk; ++i)
        r[disc_->vdof(f.axis, e, i)] += w * disc_->trace(f.axis, side)(q, i);
    }
  }
  return r;
}

LdgAssembler::Chain LdgAssembler::chain(const Vec& U, double t) const {
  int ns = disc_->num_scalar_dofs();
  int dim = disc_->mesh().dim();
  Chain ch;
  ch.P = assemble_D(U).cwiseQuotient(ops_->mass_diag);
  Vec rhs = ops_->A * ch.P;
  if (spec_->boundary == BoundaryKind::Dirichlet) rhs += dirichlet_load(t);
  ch.S.resize(dim * ns);
  for (int a = 0; a < dim; ++a)
    ch.S.segment(a * ns, ns) =
        rhs.segment(a * ns, ns).cwiseQuotient(ops_->mass_diag);
  auto C = assemble_C(U);
  int nk = disc_->basis().size();
  ch.Q.resize(dim * ns);
  for (int a = 0; a < dim; ++a)
    for (int e = 0; e < disc_->mesh().num_elements(); ++e)
      ch.Q.segment(a * ns + e * nk, nk) =
          (C[e] * ch.S.segment(a * ns + e * nk, nk))
              .cwiseQuotient(ops_->mass_diag.segment(e * nk, nk));
  return ch;
}

SpMat LdgAssembler::dQdU(const Vec& U, const Chain& ch) const {
  int ns = disc_->num_scalar_dofs();
  int dim = disc_->mesh().dim();
  Vec minv = ops_->mass_diag.cwiseInverse();
  Vec minvv(dim * ns);
  for (int a = 0; a < dim; ++a) minvv.segment(a * ns, ns) = minv;

  SpMat DU = block_diag(*disc_, assemble_DU(U), 1);
  SpMat W = minvv.asDiagonal() * (ops_->A * (minv.asDiagonal() * DU));
  SpMat Cd = block_diag(*disc_, assemble_C(U), dim);

  std::vector<Triplet> gt;
  int nk = disc_->basis().size();
  for (int a = 0; a < dim; ++a) {
    auto G = assemble_G(U, ch.S, a);
    for (int e = 0; e < disc_->mesh().num_elements(); ++e)
      for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j)
          if (G[e](i, j) != 0.0)
            gt.emplace_back(a * ns + e * nk + i, e * nk + j, G[e](i, j));
  }
  SpMat Gm(dim * ns, ns);
  Gm.setFromTriplets(gt.begin(), gt.end());

  SpMat inner = Cd * W + Gm;
  return SpMat(minvv.asDiagonal() * inner);
}

Vec LdgAssembler::initial_moments() const {
  const auto& vol = disc_->volume_rule();
  const auto& vt = disc_->volume_table();
  int nk = disc_->basis().size();
  Vec out = Vec::Zero(disc_->num_scalar_dofs());
  for (int e = 0; e < disc_->mesh().num_elements(); ++e) {
    Vec uv(vol.size());
    for (int q = 0; q < vol.size(); ++q) {
      auto x = disc_->mesh().to_physical(e, vol.points.row(q).data());
      uv[q] = vol.weights[q] * spec_->u0(x.data());
    }
    out.segment(e * nk, nk) = disc_->volume_jacobian() *
                              (vt.values.transpose() * uv);
  }
  return out;
}

double LdgAssembler::initial_integral() const {
  const auto& vol = disc_->volume_rule();
  double s = 0.0;
  for (int e = 0; e < disc_->mesh().num_elements(); ++e)
    for (int q = 0; q < vol.size(); ++q) {
      auto x = disc_->mesh().to_physical(e, vol.points.row(q).data());
      s += vol.weights[q] * spec_->u0(x.data());
    }
  return s * disc_->volume_jacobian();
}

}  // namespace ldg
