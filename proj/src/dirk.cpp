#include "ldg/dirk.hpp"

#include <cmath>

namespace ldg {

ButcherTableau tableau(int order) {
  ButcherTableau t;
  t.order = order;
  if (order == 1) {
    t.stages = 1;
    t.a = Mat::Constant(1, 1, 1.0);
    t.b = Vec::Constant(1, 1.0);
  } else if (order == 2) {
    double g = 1.0 - std::sqrt(2.0) / 2.0;
    t.stages = 2;
    t.a = Mat::Zero(2, 2);
    t.a(0, 0) = g;
    t.a(1, 0) = 1.0 - g;
    t.a(1, 1) = g;
    t.b = t.a.row(1);
  } else if (order == 3) {
    // 3-stage stiffly accurate SDIRK, gamma the root of
    // x^3 - 3x^2 + 3x/2 - 1/6 in (0, 1/2)
    double g = 0.435866521508458999;
    t.stages = 3;
    t.a = Mat::Zero(3, 3);
    t.a(0, 0) = g;
    t.a(1, 0) = 0.5 * (1.0 - g);
    t.a(1, 1) = g;
    t.a(2, 0) = -1.5 * g * g + 4.0 * g - 0.25;
    t.a(2, 1) = 1.5 * g * g - 5.0 * g + 1.25;
    t.a(2, 2) = g;
    t.b = t.a.row(2);
  } else if (order == 4) {
    // 5-stage stiffly accurate SDIRK of classical order 4, gamma = 1/4
    t.stages = 5;
    t.a = Mat::Zero(5, 5);
    t.a(0, 0) = 0.25;
    t.a(1, 0) = 0.5;
    t.a(1, 1) = 0.25;
    t.a(2, 0) = 17.0 / 50.0;
    t.a(2, 1) = -1.0 / 25.0;
    t.a(2, 2) = 0.25;
    t.a(3, 0) = 371.0 / 1360.0;
    t.a(3, 1) = -137.0 / 2720.0;
    t.a(3, 2) = 15.0 / 544.0;
    t.a(3, 3) = 0.25;
    t.a(4, 0) = 25.0 / 24.0;
    t.a(4, 1) = -49.0 / 48.0;
    t.a(4, 2) = 125.0 / 16.0;
    t.a(4, 3) = -85.0 / 12.0;
    t.a(4, 4) = 0.25;
    t.b = t.a.row(4);
  } else {
    throw ConfigError("unsupported DIRK order " + std::to_string(order));
  }
  t.c = t.a.rowwise().sum();
  return t;
}

StepResult advance_step(const LdgAssembler& assembler, const ConstraintSet* cs,
                        const Vec& Un, double t, double tau,
                        const ButcherTableau& tab, const NewtonOptions& opts,
                        const Vec* warm_lambda, int hard_iteration_limit) {
  const auto& ops = assembler.ops();
  int ns = static_cast<int>(Un.size());
  double mass_ref = ops.element_integral.dot(Un);
  bool has_flux = ops.boundary_q_weights.nonZeros() > 0;

  StepResult out;
  out.U = Un;
  Vec lam = (cs && warm_lambda && warm_lambda->size() == cs->size())
                ? warm_lambda->cwiseMax(0.0)
                : (cs ? Vec::Zero(cs->size()) : Vec());

  // per completed stage: B Q^j - src^j moments, and the scalar flux term
  std::vector<Vec> stage_rhs;
  std::vector<double> stage_flux;
  Vec Ustage = Un;

  try {
    for (int i = 0; i < tab.stages; ++i) {
      double stage_time = t + tab.c[i] * tau;
      Vec hist = Vec::Zero(ns);
      double flux_hist = 0.0;
      for (int j = 0; j < i; ++j) {
        hist += tau * tab.a(i, j) * stage_rhs[j];
        flux_hist += tab.a(i, j) * stage_flux[j];
      }
      DirkStageProblem stage(assembler, Un, hist, mass_ref, flux_hist, tau,
                             tab.a(i, i), stage_time);
      KktResult res;
      if (cs) {
        res = semismooth_newton(stage, *cs, Ustage, 0.0, lam, opts);
        lam = res.lambda;
      } else {
        res = plain_newton(stage, Ustage, opts);
      }
      if (hard_iteration_limit > 0 && res.iterations > hard_iteration_limit)
        throw StepRejected("stage " + std::to_string(i) + " took " +
                           std::to_string(res.iterations) +
                           " Newton iterations");
      Ustage = res.U;
      out.newton_total += res.iterations;
      out.newton_max = std::max(out.newton_max, res.iterations);
      out.active_count = res.active_count;
      out.max_lambda = std::max(out.max_lambda, res.max_lambda);

      // refresh the chain at the converged state for the stage history
      stage.residual(Ustage);
      Vec srcm = assembler.source_moments(stage_time);
      stage_rhs.push_back(ops.B * stage.last_Q() - srcm);
      stage_flux.push_back(
          (has_flux ? ops.boundary_q_weights.dot(stage.last_Q()) : 0.0) +
          assembler.source_integral(stage_time));
    }
  } catch (const NonConvergence& e) {
    throw StepRejected(e.what());
  } catch (const SingularSystem& e) {
    throw StepRejected(e.what());
  } catch (const InadmissibleState& e) {
    throw StepRejected(e.what());
  }

  out.U = Ustage;
  out.lambda = lam;
  // b-weighted update; identical to the last stage for a_si = b_i
  Vec acc = Vec::Zero(ns);
  for (int i = 0; i < tab.stages; ++i) acc += tab.b[i] * stage_rhs[i];
  out.U_bweighted = Un - tau * acc.cwiseQuotient(ops.mass_diag);
  return out;
}

}  // namespace ldg
