#pragma once

#include "ldg/kkt.hpp"

namespace ldg {

/// Lower-triangular, stiffly accurate DIRK tableau (a_si = b_i).
struct ButcherTableau {
  int stages = 1;
  int order = 1;
  Mat a;
  Vec b;
  Vec c;  // c_i = sum_j a_ij
};

/// order 1: backward Euler; order 2: two-stage SDIRK with gamma = 1 - sqrt2/2;
/// orders 3, 4: stiffly accurate SDIRK schemes (3-stage and 5-stage).
ButcherTableau tableau(int order);

/// tau = alpha*h restart policy: halve on rejection, grow by 1.2 up to
/// tau_max on acceptance.
class TimeController {
 public:
  TimeController(double tau0, double tau_min, double tau_max,
                 double growth = 1.2, double shrink = 0.5)
      : tau_(tau0), tau_min_(tau_min), tau_max_(tau_max), growth_(growth),
        shrink_(shrink) {}

  double tau() const { return tau_; }
  int rejections() const { return rejections_; }

  void on_accept() { tau_ = std::min(growth_ * tau_, tau_max_); }
  /// Returns false once tau_min would be breached.
  bool on_reject() {
    ++rejections_;
    tau_ *= shrink_;
    return tau_ >= tau_min_;
  }

 private:
  double tau_, tau_min_, tau_max_, growth_, shrink_;
  int rejections_ = 0;
};

struct StepResult {
  Vec U;
  Vec U_bweighted;    // b-weighted update, equals U for stiffly accurate runs
  Vec lambda;         // last-stage multipliers, for warm starts
  int newton_total = 0;
  int newton_max = 0;
  int active_count = 0;
  double max_lambda = 0.0;
};

struct StepRejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Advance one time step of size tau from state Un at time t, solving the
/// stage KKT systems sequentially. Throws StepRejected if any stage Newton
/// solve fails or leaves the admissible region; Un is never mutated.
StepResult advance_step(const LdgAssembler& assembler, const ConstraintSet* cs,
                        const Vec& Un, double t, double tau,
                        const ButcherTableau& tab, const NewtonOptions& opts,
                        const Vec* warm_lambda = nullptr,
                        int hard_iteration_limit = 0);

}  // namespace ldg
