#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>

namespace ldg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// State evaluation hit a value outside the admissible range of the model
/// (e.g. log of a non-positive argument). Carries the offending element and
/// quadrature point for diagnostics.
class InadmissibleState : public std::runtime_error {
 public:
  InadmissibleState(int element, int point, double value)
      : std::runtime_error("inadmissible state u=" + std::to_string(value) +
                           " in element " + std::to_string(element) +
                           " at point " + std::to_string(point)),
        element(element), point(point), value(value) {}
  int element;
  int point;
  double value;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(int iterations, double residual)
      : std::runtime_error("Newton did not converge in " +
                           std::to_string(iterations) +
                           " iterations, |F| = " + std::to_string(residual)),
        iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

class SingularSystem : public std::runtime_error {
 public:
  explicit SingularSystem(int active_count)
      : std::runtime_error("singular KKT system, " +
                           std::to_string(active_count) +
                           " active constraints"),
        active_count(active_count) {}
  int active_count;
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ldg
