#pragma once

#include <array>

#include "ldg/quadrature.hpp"

namespace ldg {

/// Values and reference-coordinate gradients of all local basis functions at
/// a point set: values(q, j) = phi_j(x_q), grads[a](q, j) = d phi_j / d xi_a.
struct BasisTable {
  Mat values;
  std::array<Mat, 2> grads;
};

/// Tensor-product Legendre basis of degree k per axis on [-1,1]^dim,
/// unnormalized (P_l(1) = 1). Local index j = j0 + (k+1)*j1.
class Basis {
 public:
  Basis(int degree, int dim);

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  int size() const { return size_; }          // (k+1)^dim
  int size_1d() const { return degree_ + 1; }

  /// 1D factors of the reference mass matrix diagonal: int P_l^2 = 2/(2l+1).
  double mass_factor_1d(int l) const { return 2.0 / (2.0 * l + 1.0); }

  std::array<int, 2> local_coords(int j) const;

  double value(int j, const double* ref) const;
  double deriv(int j, int axis, const double* ref) const;

  /// Evaluate all basis functions at the given reference points (rows of a
  /// npts x dim matrix). Points must lie in [-1,1]^dim.
  BasisTable eval(const Mat& ref_points) const;
  BasisTable eval(const TensorRule& rule) const { return eval(rule.points); }

 private:
  int degree_, dim_, size_;
};

}  // namespace ldg
