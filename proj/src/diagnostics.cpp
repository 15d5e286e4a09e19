#include "ldg/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace ldg {

double discrete_entropy(const LdgAssembler& assembler, const Vec& U) {
  const auto& disc = assembler.disc();
  const auto& spec = assembler.spec();
  const auto& cp = disc.constraint_points();
  Mat uq = disc.element_values_c(U);
  double s = 0.0;
  for (int e = 0; e < disc.mesh().num_elements(); ++e)
    for (int q = 0; q < cp.size(); ++q) {
      auto x = disc.mesh().to_physical(e, cp.points.row(q).data());
      s += cp.weights[q] * entropy_density(spec, uq(e, q), x.data());
    }
  return s * disc.volume_jacobian();
}

double total_mass(const LdgAssembler& assembler, const Vec& U) {
  return assembler.ops().element_integral.dot(U);
}

double min_at_constraint_points(const Discretization& disc, const Vec& U) {
  const auto& ct = disc.constraint_table();
  int nk = disc.basis().size();
  double m = std::numeric_limits<double>::infinity();
  for (int e = 0; e < disc.mesh().num_elements(); ++e) {
    Eigen::Map<const Vec> local(U.data() + e * nk, nk);
    m = std::min(m, (ct.values * local).minCoeff());
  }
  return m;
}

ErrorNorms error_norms(const LdgAssembler& assembler, const Vec& U, double t) {
  const auto& disc = assembler.disc();
  const auto& spec = assembler.spec();
  if (!spec.has_exact()) throw ConfigError("no exact solution available");
  const auto& mesh = disc.mesh();
  int nk = disc.basis().size();
  ErrorNorms out;

  // Linf on a dense sample grid
  int nsample = 4 * (disc.basis().degree() + 1);
  Mat pts(mesh.dim() == 2 ? nsample * nsample : nsample, mesh.dim());
  if (mesh.dim() == 1) {
    for (int i = 0; i < nsample; ++i)
      pts(i, 0) = -1.0 + 2.0 * i / (nsample - 1.0);
  } else {
    int r = 0;
    for (int j = 0; j < nsample; ++j)
      for (int i = 0; i < nsample; ++i, ++r) {
        pts(r, 0) = -1.0 + 2.0 * i / (nsample - 1.0);
        pts(r, 1) = -1.0 + 2.0 * j / (nsample - 1.0);
      }
  }
  Mat dense = disc.basis().eval(pts).values;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    Eigen::Map<const Vec> local(U.data() + e * nk, nk);
    Vec uh = dense * local;
    for (int q = 0; q < uh.size(); ++q) {
      auto x = mesh.to_physical(e, pts.row(q).data());
      out.linf = std::max(out.linf, std::abs(uh[q] - spec.exact(x.data(), t)));
    }
  }

  const auto& vol = disc.volume_rule();
  Mat uq = disc.element_values(U);
  double l1 = 0.0, l2 = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int q = 0; q < vol.size(); ++q) {
      auto x = mesh.to_physical(e, vol.points.row(q).data());
      double err = uq(e, q) - spec.exact(x.data(), t);
      l1 += vol.weights[q] * std::abs(err);
      l2 += vol.weights[q] * err * err;
    }
  out.l1 = l1 * disc.volume_jacobian();
  out.l2 = std::sqrt(l2 * disc.volume_jacobian());
  return out;
}

std::vector<ConvergenceRow> convergence_table(
    const std::vector<int>& meshes, const std::vector<ErrorNorms>& errors,
    const std::vector<double>& min_u) {
  if (meshes.size() != errors.size() || meshes.size() != min_u.size())
    throw ConfigError("convergence table inputs have mismatched lengths");
  std::vector<ConvergenceRow> rows;
  for (size_t i = 0; i < meshes.size(); ++i) {
    if (i > 0 && meshes[i] != 2 * meshes[i - 1])
      throw ConfigError("convergence study requires doubling mesh sequence");
    ConvergenceRow r;
    r.elements = meshes[i];
    r.linf = errors[i].linf;
    r.l1 = errors[i].l1;
    r.min_u = min_u[i];
    if (i > 0) {
      r.linf_order = std::log2(errors[i - 1].linf / errors[i].linf);
      r.l1_order = std::log2(errors[i - 1].l1 / errors[i].l1);
    }
    rows.push_back(r);
  }
  return rows;
}

double p_function_tau_bound(const LdgAssembler& assembler, const Vec& U) {
  double c = 0.0;
  auto absmax = [&](const std::vector<Mat>& blocks) {
    for (const auto& b : blocks)
      c = std::max(c, b.cwiseAbs().maxCoeff());
  };
  absmax(assembler.assemble_C(U));
  absmax(assembler.assemble_DU(U));
  c = std::max(c, assembler.assemble_D(U).cwiseAbs().maxCoeff());
  if (c <= 0.0) return std::numeric_limits<double>::infinity();
  return assembler.ops().sigma / (4.0 * c);
}

}  // namespace ldg
