#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ldg/mesh.hpp"

namespace ldg {

using SpaceFn = std::function<double(const double*)>;
using SpaceTimeFn = std::function<double(const double*, double)>;
using ScalarFn = std::function<double(double)>;

/// Problem definition for u_t = div(f(u) grad(phi(x) + H'(u))) (+ source).
/// All callables are pure; the struct is immutable after construction.
struct ProblemSpec {
  std::string name;
  int dim = 1;
  std::array<double, 2> lower{0.0, 0.0};
  std::array<double, 2> upper{1.0, 1.0};
  BoundaryKind boundary = BoundaryKind::ZeroFlux;
  double u_min = 1e-10;

  ScalarFn f, f_prime;
  ScalarFn H, H_prime, H_second;
  SpaceFn phi;
  SpaceFn u0;
  SpaceTimeFn exact;   // null unless a manufactured/exact solution exists
  SpaceTimeFn source;  // null when the PDE is source-free

  /// Open admissible range of u for evaluating f, H', H''. Models with a
  /// logarithmic entropy have admissible_lo = 0 (strict); purely polynomial
  /// models admit all of R.
  double admissible_lo = -std::numeric_limits<double>::infinity();
  double admissible_hi = std::numeric_limits<double>::infinity();

  bool has_exact() const { return static_cast<bool>(exact); }
  bool has_source() const { return static_cast<bool>(source); }
  void check_admissible(double u, int element, int point) const {
    if (!(u > admissible_lo && u < admissible_hi))
      throw InadmissibleState(element, point, u);
  }
};

/// One of the named experiment configurations.
struct ExperimentPreset {
  std::string name;
  ProblemSpec spec;
  std::array<int, 2> mesh_counts{100, 1};
  int degree = 2;
  int dirk_order = 3;
  double alpha = 0.1;    // tau = alpha * h
  double t_final = 1.0;
  double mass = 1.0;     // boson initial mass parameter, unused elsewhere
};

/// Known names: accuracy1d, porous1d, porous2d, doublewell1d, fermion2d,
/// boson1d. boson1d takes the initial mass as a parameter.
ExperimentPreset preset(const std::string& name, double boson_mass = 1.0);

std::vector<std::string> preset_names();

/// Generic 1D problem with polynomial mobility and entropy derivative,
/// f(u) = sum f_coeffs[i] u^i and H'(u) = sum hp_coeffs[i] u^i, phi = 0,
/// zero-flux boundary. H is integrated termwise with H(0) = 0.
ProblemSpec make_polynomial_problem(const std::vector<double>& f_coeffs,
                                    const std::vector<double>& hp_coeffs,
                                    std::array<double, 2> bounds,
                                    SpaceFn u0);

/// Entropy density u*phi(x) + H(u).
double entropy_density(const ProblemSpec& spec, double u, const double* x);

}  // namespace ldg
