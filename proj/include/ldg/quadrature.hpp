#pragma once

#include "ldg/common.hpp"

namespace ldg {

enum class QuadKind { Gauss, GaussLobatto };

/// One-dimensional quadrature rule on the reference interval [-1,1].
struct QuadratureRule {
  QuadKind kind;
  Vec points;
  Vec weights;
  int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre rule with n points, exact for degree 2n-1.
QuadratureRule gauss_rule(int n);

/// Gauss-Lobatto rule with n >= 2 points, includes the endpoints,
/// exact for degree 2n-3.
QuadratureRule gauss_lobatto_rule(int n);

/// Legendre polynomial P_l and its derivative at x, unnormalized (P_l(1)=1).
double legendre(int l, double x);
double legendre_deriv(int l, double x);

/// Tensor product of a 1D rule over dim axes. Points are stored as rows of
/// a (n^dim x dim) matrix, x-index running fastest.
struct TensorRule {
  Mat points;   // npts x dim
  Vec weights;  // npts
  int size() const { return static_cast<int>(weights.size()); }
};

TensorRule tensor_rule(const QuadratureRule& rule1d, int dim);

}  // namespace ldg
