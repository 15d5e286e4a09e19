#include "ldg/kkt.hpp"
#include <cstdlib>
#include <algorithm>

#include <Eigen/SparseLU>
#include <cmath>

namespace ldg {

ConstraintSet build_constraints(const Discretization& disc, double u_min,
                                double u_cap) {
  const auto& ct = disc.constraint_table();
  int npts = disc.points_per_element();
  int nk = disc.basis().size();
  int ne = disc.mesh().num_elements();
  std::vector<Triplet> trip;
  for (int e = 0; e < ne; ++e)
    for (int p = 0; p < npts; ++p)
      for (int j = 0; j < nk; ++j)
        trip.emplace_back(e * npts + p, e * nk + j, ct.values(p, j));
  ConstraintSet cs;
  cs.u_min = u_min;
  cs.u_cap = u_cap;
  cs.point_eval.resize(ne * npts, ne * nk);
  cs.point_eval.setFromTriplets(trip.begin(), trip.end());
  cs.point_values = ct.values;
  cs.point_values_inv = ct.values.inverse();
  return cs;
}

void ConstraintSet::project_feasible(Vec& U) const {
  int npts = static_cast<int>(point_values.rows());
  int nk = static_cast<int>(point_values.cols());
  int ne = static_cast<int>(U.size()) / nk;
  for (int e = 0; e < ne; ++e) {
    Vec nodal = point_values * U.segment(e * nk, nk);
    if (nodal.minCoeff() >= u_min && nodal.maxCoeff() <= u_cap) continue;
    nodal = nodal.cwiseMax(u_min).cwiseMin(u_cap);
    U.segment(e * nk, nk) = point_values_inv * nodal;
  }
}

namespace {

struct SparseFactor {
  Eigen::SparseLU<SpMat> lu;
  SpMat Jc;
  void factorize(const SpMat& J, int active_count) {
    Jc = J;
    Jc.makeCompressed();
    lu.analyzePattern(Jc);
    lu.factorize(Jc);
    if (lu.info() != Eigen::Success) throw SingularSystem(active_count);
  }
};

}  // namespace

KktResult semismooth_newton(KktProblem& problem, const ConstraintSet& cs,
                            const Vec& U0, double mu0, const Vec& lambda0,
                            const NewtonOptions& opts) {
  int n = static_cast<int>(U0.size());
  int m = cs.size();
  Vec U = U0;
  double mu = mu0;
  Vec lam = lambda0.size() == m ? lambda0 : Vec::Zero(m);
  lam = lam.cwiseMax(0.0);

  KktResult res;
  const double tol = opts.tol * problem.residual_scale();
  // treat points sitting on the bound (up to the nodal round-trip noise of
  // project_feasible) as active, otherwise they flip branch every iteration
  const double tie = 0.01 * cs.u_min + 1e-14;
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    Vec L = problem.residual(U);
    double h = problem.equality(U);
    Vec gh = problem.equality_grad(U);
    Vec g = cs.eval_g(U);

    Vec r1 = L + gh * mu - cs.point_eval.transpose() * lam;
    Vec r3 = (-g).cwiseMin(lam);
    double fnorm = std::max({r1.lpNorm<Eigen::Infinity>(), std::abs(h),
                             m > 0 ? r3.lpNorm<Eigen::Infinity>() : 0.0});
    res.residual_history.push_back(fnorm);
    if (!std::isfinite(fnorm)) throw NonConvergence(iter, fnorm);
    if (fnorm <= tol) {
      res.U = U;
      res.mu = mu;
      res.lambda = lam;
      res.iterations = iter;
      res.residual_norm = fnorm;
      res.max_lambda = m > 0 ? lam.maxCoeff() : 0.0;
      for (int j = 0; j < m; ++j)
        if (-g[j] <= lam[j] + tie) ++res.active_count;
      return res;
    }
    if (iter == opts.max_iter) throw NonConvergence(iter, fnorm);

    SpMat J = problem.jacobian(U);
    std::vector<Triplet> trip;
    trip.reserve(J.nonZeros() + 4 * cs.point_eval.nonZeros() + 2 * n + m);
    for (int k = 0; k < J.outerSize(); ++k)
      for (SpMat::InnerIterator it(J, k); it; ++it)
        trip.emplace_back(static_cast<int>(it.row()),
                          static_cast<int>(it.col()), it.value());
    for (int i = 0; i < n; ++i)
      if (gh[i] != 0.0) {
        trip.emplace_back(i, n, gh[i]);     // grad_h^T mu column
        trip.emplace_back(n, i, -gh[i]);    // -h row
      }
    for (int k = 0; k < cs.point_eval.outerSize(); ++k)
      for (SpMat::InnerIterator it(cs.point_eval, k); it; ++it) {
        int j = static_cast<int>(it.row());
        int i = static_cast<int>(it.col());
        trip.emplace_back(i, n + 1 + j, -it.value());  // grad_g^T lambda
      }
    // complementarity rows: active branch differentiates -g_j (row +P_j),
    // inactive branch differentiates lambda_j
    // far from convergence, additionally pin points hovering just above the
    // bound: their curvature |H''| ~ 1/u makes the linearization radius
    // microscopic, and leaving them free lets the Newton direction exploit
    // those columns with wildly invalid components.  Pinning freezes them
    // for this iteration (their complementarity residual is 0); near
    // convergence the pure branch takes over so the exact complementarity
    // conditions decide.
    const double pin =
        fnorm > 1e5 * tol ? 1e4 * cs.u_min : 0.0;
    std::vector<char> active(m);
    for (int j = 0; j < m; ++j) {
      active[j] = -g[j] <= std::max(lam[j] + tie, pin);
      if (!active[j]) trip.emplace_back(n + 1 + j, n + 1 + j, 1.0);
    }
    for (int k = 0; k < cs.point_eval.outerSize(); ++k)
      for (SpMat::InnerIterator it(cs.point_eval, k); it; ++it) {
        int j = static_cast<int>(it.row());
        if (active[j])
          trip.emplace_back(n + 1 + j, static_cast<int>(it.col()), it.value());
      }

    int total = n + 1 + m;
    SpMat Jfull(total, total);
    Jfull.setFromTriplets(trip.begin(), trip.end());

    Vec F(total);
    F.head(n) = r1;
    F[n] = -h;
    F.tail(m) = r3;

    int active_count = 0;
    for (int j = 0; j < m; ++j)
      if (-g[j] <= lam[j] + tie) ++active_count;
    SparseFactor fac;
    fac.factorize(Jfull, active_count);
    Vec delta = fac.lu.solve(-F);
    if (std::getenv("LDG_NEWTON_DEBUG")) {
      double lin = (Jfull * delta + F).norm() / F.norm();
      Vec pts = cs.point_eval * U;
      std::fprintf(stderr,
                   "  it %d |F|=%.3e |F|inf=%.3e linres=%.3e u[%.2e,%.2e] "
                   "lam[%.2e,%.2e]\n",
                   iter, F.norm(), fnorm, lin, pts.minCoeff(), pts.maxCoeff(),
                   lam.minCoeff(), lam.maxCoeff());
      if (std::getenv("LDG_NEWTON_DEBUG")[0] == '2') {
        int nk = static_cast<int>(cs.point_values.cols());
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
          return std::abs(r1[a]) > std::abs(r1[b]);
        });
        for (int q = 0; q < 8; ++q) {
          int i = idx[q];
          int e = i / nk;
          Vec nodal = cs.point_values * U.segment(e * nk, nk);
          std::fprintf(stderr,
                       "      r1[%d]=%.3e e=%d dof=%d u_e[%.2e,%.2e] "
                       "lam_e[%.2e,%.2e] dU=%.2e\n",
                       i, r1[i], e, i % nk, nodal.minCoeff(), nodal.maxCoeff(),
                       lam.segment(e * nk, nk).minCoeff(),
                       lam.segment(e * nk, nk).maxCoeff(), delta[i]);
        }
        int imax;
        delta.head(n).cwiseAbs().maxCoeff(&imax);
        int e = imax / nk;
        Vec nodal = cs.point_values * U.segment(e * nk, nk);
        int act_e = 0;
        for (int p = 0; p < nk; ++p)
          if (nodal[p] - cs.u_min <= lam[e * nk + p] + 1e-12) ++act_e;
        std::fprintf(stderr,
                     "      maxdU=%.3e @%d e=%d u_e[%.2e,%.2e] act_e=%d "
                     "colnorm=%.3e r1=%.3e dnodal_max=%.2e\n",
                     delta[imax], imax, e, nodal.minCoeff(), nodal.maxCoeff(),
                     act_e, Jfull.col(imax).norm(), r1[imax],
                     (cs.point_values * delta.segment(e * nk, nk))
                         .cwiseAbs()
                         .maxCoeff());
      }
        double s = 1e-6;
      Vec U_s = U + s * delta.head(n);
      double mu_s = mu + s * delta[n];
      Vec lam_s = lam + s * delta.tail(m);
      Vec L_s = problem.residual(U_s);
      Vec g_s = cs.eval_g(U_s);
      Vec r1_s = L_s + problem.equality_grad(U_s) * mu_s -
                 cs.point_eval.transpose() * lam_s;
      Vec r3_s = (-g_s).cwiseMin(lam_s);
      Vec d1 = (r1_s - r1) / s + r1;  // expect ~0 if J consistent
      Vec d3 = (r3_s - r3) / s + r3;
      int i1, i3;
      d1.cwiseAbs().maxCoeff(&i1);
      d3.cwiseAbs().maxCoeff(&i3);
      std::fprintf(stderr,
                   "    DD mismatch r1: %.3e @%d (r1=%.2e dU=%.2e)  r3: %.3e "
                   "@%d (g=%.2e lam=%.2e dlam=%.2e act=%d)\n",
                   d1.cwiseAbs().maxCoeff(), i1, r1[i1],
                   (delta.head(n))[i1], d3.cwiseAbs().maxCoeff(), i3, g[i3],
                   lam[i3], (delta.tail(m))[i3], (int)active[i3]);
    }

    // componentwise trust region in the entropy variable: the linearization
    // is only trustworthy while |H''(u)| * du stays O(1).  Near-degenerate
    // points (H'' ~ 1/u) otherwise receive direction components many orders
    // of magnitude beyond that validity range, and those junk components
    // force the line search into uselessly small global steps.  Clip the
    // offending nodal components individually; the useful part of the
    // direction is untouched.
    {
      const double budget = 2.0;
      int nk = static_cast<int>(cs.point_values.cols());
      Vec caps = Vec::Constant(n, std::numeric_limits<double>::infinity());
      bool any_cap = false;
      for (int e = 0; e * nk < n; ++e) {
        Vec un = cs.point_values * U.segment(e * nk, nk);
        for (int p = 0; p < nk; ++p) {
          double c = problem.entropy_curvature(un[p]);
          if (c > 0.0) {
            caps[e * nk + p] = budget / c;
            any_cap = true;
          }
        }
      }
      auto clip_to_caps = [&](Vec& d) {
        bool clipped = false;
        for (int e = 0; e * nk < n; ++e) {
          Vec dn = cs.point_values * d.segment(e * nk, nk);
          bool changed = false;
          for (int p = 0; p < nk; ++p) {
            double cap = caps[e * nk + p];
            if (std::abs(dn[p]) > cap) {
              dn[p] = std::copysign(cap, dn[p]);
              changed = true;
            }
          }
          if (changed) {
            d.segment(e * nk, nk) = cs.point_values_inv * dn;
            clipped = true;
          }
        }
        return clipped;
      };
      if (any_cap && clip_to_caps(delta)) {
        // clipping leaves the coupling of the removed components
        // unexplained, destroying descent; a few projected correction
        // sweeps with the existing factorization restore it
        for (int inner = 0; inner < 4; ++inner) {
          Vec rl = -F - Jfull * delta;
          delta += fac.lu.solve(rl);
          if (!clip_to_caps(delta)) break;
        }
      }
    }

    // backtracking on |F|, with trial states projected back into the
    // admissible box so iterates never sit on the clipped-evaluation kink
    double merit = F.norm();
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 24; ++ls, step *= 0.5) {
      Vec U_try = U + step * delta.head(n);
      cs.project_feasible(U_try);
      double mu_try = mu + step * delta[n];
      Vec lam_try = lam + step * delta.tail(m);
      double trial;
      try {
        Vec F_try(total);
        F_try.head(n) = problem.residual(U_try) +
                        problem.equality_grad(U_try) * mu_try -
                        cs.point_eval.transpose() * lam_try;
        F_try[n] = -problem.equality(U_try);
        F_try.tail(m) = (-cs.eval_g(U_try)).cwiseMin(lam_try);
        trial = F_try.norm();
      } catch (const InadmissibleState&) {
        continue;
      }
      if (std::getenv("LDG_LS_DEBUG"))
        std::fprintf(stderr, "    ls s=%.3e trial=%.6e merit=%.6e\n", step,
                     trial, merit);
      if (std::isfinite(trial) && trial <= (1.0 - 1e-4 * step) * merit) {
        U = U_try;
        mu = mu_try;
        lam = lam_try;
        accepted = true;
        break;
      }
    }
    if (!accepted) throw NonConvergence(iter, fnorm);
  }
  throw NonConvergence(opts.max_iter, 0.0);  // unreachable
}

KktResult plain_newton(KktProblem& problem, const Vec& U0,
                       const NewtonOptions& opts) {
  Vec U = U0;
  KktResult res;
  const double tol = opts.tol * problem.residual_scale();
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    Vec L = problem.residual(U);
    double fnorm = L.lpNorm<Eigen::Infinity>();
    res.residual_history.push_back(fnorm);
    if (!std::isfinite(fnorm)) throw NonConvergence(iter, fnorm);
    if (fnorm <= tol) {
      res.U = U;
      res.iterations = iter;
      res.residual_norm = fnorm;
      return res;
    }
    if (iter == opts.max_iter) throw NonConvergence(iter, fnorm);
    SpMat J = problem.jacobian(U);
    SparseFactor fac;
    fac.factorize(J, 0);
    Vec delta = fac.lu.solve(-L);
    double merit = L.norm();
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
      Vec U_try = U + step * delta;
      double trial;
      try {
        trial = problem.residual(U_try).norm();
      } catch (const InadmissibleState&) {
        continue;
      }
      if (std::isfinite(trial) && trial <= (1.0 - 1e-4 * step) * merit) {
        U = U_try;
        accepted = true;
        break;
      }
    }
    if (!accepted) throw NonConvergence(iter, fnorm);
  }
  throw NonConvergence(opts.max_iter, 0.0);  // unreachable
}

DirkStageProblem::DirkStageProblem(const LdgAssembler& assembler, Vec Uprev,
                                   Vec history, double mass_ref,
                                   double flux_history, double tau, double a_ii,
                                   double stage_time)
    : asm_(&assembler), Uprev_(std::move(Uprev)), history_(std::move(history)),
      mass_ref_(mass_ref), flux_history_(flux_history), tau_(tau), a_ii_(a_ii),
      stage_time_(stage_time) {
  src_moments_ = asm_->source_moments(stage_time_);
  src_integral_ = asm_->source_integral(stage_time_);
  has_boundary_flux_ = asm_->ops().boundary_q_weights.nonZeros() > 0;
}

void DirkStageProblem::ensure_chain(const Vec& U) {
  if (have_chain_ && cached_U_.size() == U.size() && cached_U_ == U) return;
  chain_ = asm_->chain(U, stage_time_);
  cached_U_ = U;
  have_chain_ = true;
  have_dqdu_ = false;
}

void DirkStageProblem::ensure_dqdu(const Vec& U) {
  ensure_chain(U);
  if (have_dqdu_) return;
  dqdu_ = asm_->dQdU(U, chain_);
  have_dqdu_ = true;
}

Vec DirkStageProblem::residual(const Vec& U) {
  ensure_chain(U);
  const auto& ops = asm_->ops();
  return ops.mass_diag.cwiseProduct(U - Uprev_) + history_ +
         tau_ * a_ii_ * (ops.B * chain_.Q - src_moments_);
}

SpMat DirkStageProblem::jacobian(const Vec& U) {
  ensure_dqdu(U);
  const auto& ops = asm_->ops();
  SpMat J = ops.M + SpMat(tau_ * a_ii_ * (ops.B * dqdu_));
  return J;
}

double DirkStageProblem::equality(const Vec& U) {
  ensure_chain(U);
  const auto& ops = asm_->ops();
  double flux = flux_history_ + a_ii_ * src_integral_;
  if (has_boundary_flux_) flux += a_ii_ * ops.boundary_q_weights.dot(chain_.Q);
  return mass_ref_ + tau_ * flux - ops.element_integral.dot(U);
}

double DirkStageProblem::residual_scale() const { return asm_->ops().sigma; }

double DirkStageProblem::entropy_curvature(double u) const {
  const auto& spec = asm_->spec();
  double margin = 0.5 * spec.u_min;
  if (std::isfinite(spec.admissible_lo))
    u = std::max(u, spec.admissible_lo + margin);
  if (std::isfinite(spec.admissible_hi))
    u = std::min(u, spec.admissible_hi - margin);
  return std::abs(spec.H_second(u));
}

Vec DirkStageProblem::equality_grad(const Vec& U) {
  const auto& ops = asm_->ops();
  Vec g = -ops.element_integral;
  if (has_boundary_flux_) {
    ensure_dqdu(U);
    g += tau_ * a_ii_ * (dqdu_.transpose() * Vec(ops.boundary_q_weights));
  }
  return g;
}

ProjectionProblem::ProjectionProblem(const LdgAssembler& assembler)
    : asm_(&assembler),
      moments_(assembler.initial_moments()),
      mass_(assembler.initial_integral()) {}

Vec ProjectionProblem::residual(const Vec& U) {
  return asm_->ops().mass_diag.cwiseProduct(U) - moments_;
}

SpMat ProjectionProblem::jacobian(const Vec&) { return asm_->ops().M; }

double ProjectionProblem::equality(const Vec& U) {
  return mass_ - asm_->ops().element_integral.dot(U);
}

Vec ProjectionProblem::equality_grad(const Vec&) {
  return -asm_->ops().element_integral;
}

double ProjectionProblem::residual_scale() const { return asm_->ops().sigma; }

Vec project_initial(const LdgAssembler& assembler, const ConstraintSet* cs,
                    const NewtonOptions& opts) {
  ProjectionProblem problem(assembler);
  Vec U0 = assembler.initial_moments().cwiseQuotient(
      assembler.ops().mass_diag);
  if (!cs) return U0;
  double mean = assembler.initial_integral() /
                assembler.disc().mesh().domain_measure();
  if (mean < cs->u_min)
    throw ConfigError("mean of initial data lies below u_min");
  auto res = semismooth_newton(problem, *cs, U0, 0.0, Vec::Zero(cs->size()),
                               opts);
  return res.U;
}

}  // namespace ldg
