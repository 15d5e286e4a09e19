#include "ldg/quadrature.hpp"

#include <cmath>

namespace ldg {

double legendre(int l, double x) {
  double pm1 = 1.0, p = x;
  if (l == 0) return 1.0;
  for (int n = 1; n < l; ++n) {
    double pn1 = ((2.0 * n + 1.0) * x * p - n * pm1) / (n + 1.0);
    pm1 = p;
    p = pn1;
  }
  return p;
}

double legendre_deriv(int l, double x) {
  if (l == 0) return 0.0;
  // (x^2-1) P_l' = l (x P_l - P_{l-1})
  double denom = x * x - 1.0;
  if (std::abs(denom) < 1e-10) {
    // endpoint values: P_l'(±1) = (±1)^{l-1} l(l+1)/2
    double sign = (x > 0.0) ? 1.0 : ((l % 2 == 1) ? 1.0 : -1.0);
    return sign * 0.5 * l * (l + 1.0);
  }
  return l * (x * legendre(l, x) - legendre(l - 1, x)) / denom;
}

QuadratureRule gauss_rule(int n) {
  if (n < 1) throw ConfigError("gauss_rule requires n >= 1");
  QuadratureRule rule{QuadKind::Gauss, Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev initial guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double dx = legendre(n, x) / legendre_deriv(n, x);
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double dp = legendre_deriv(n, x);
    rule.points[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;  // enforce exact symmetry
  return rule;
}

QuadratureRule gauss_lobatto_rule(int n) {
  if (n < 2) throw ConfigError("gauss_lobatto_rule requires n >= 2");
  QuadratureRule rule{QuadKind::GaussLobatto, Vec(n), Vec(n)};
  rule.points[0] = -1.0;
  rule.points[n - 1] = 1.0;
  // interior points are the zeros of P_{n-1}'
  for (int i = 1; i < n - 1; ++i) {
    double x = std::cos(M_PI * i / (n - 1.0));
    for (int it = 0; it < 100; ++it) {
      // Newton on P_{n-1}'; second derivative from the Legendre ODE
      // (1-x^2) P'' - 2x P' + l(l+1) P = 0
      int l = n - 1;
      double d1 = legendre_deriv(l, x);
      double d2 = (2.0 * x * d1 - l * (l + 1.0) * legendre(l, x)) /
                  (1.0 - x * x);
      double dx = d1 / d2;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.points[n - 1 - i] = x;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  for (int i = 0; i < n; ++i) {
    double p = legendre(n - 1, rule.points[i]);
    rule.weights[i] = 2.0 / (n * (n - 1.0) * p * p);
  }
  return rule;
}

TensorRule tensor_rule(const QuadratureRule& rule1d, int dim) {
  int n = rule1d.size();
  int npts = 1;
  for (int a = 0; a < dim; ++a) npts *= n;
  TensorRule out;
  out.points.resize(npts, dim);
  out.weights.resize(npts);
  for (int q = 0; q < npts; ++q) {
    int rem = q;
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      int ia = rem % n;
      rem /= n;
      out.points(q, a) = rule1d.points[ia];
      w *= rule1d.weights[ia];
    }
    out.weights[q] = w;
  }
  return out;
}

}  // namespace ldg
