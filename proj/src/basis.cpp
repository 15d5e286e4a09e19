#include "ldg/basis.hpp"

#include <cmath>

namespace ldg {

Basis::Basis(int degree, int dim) : degree_(degree), dim_(dim) {
  if (degree < 0) throw ConfigError("basis degree must be >= 0");
  if (dim != 1 && dim != 2) throw ConfigError("basis dimension must be 1 or 2");
  size_ = (degree + 1);
  if (dim == 2) size_ *= (degree + 1);
}

std::array<int, 2> Basis::local_coords(int j) const {
  int n1 = size_1d();
  return {j % n1, j / n1};
}

double Basis::value(int j, const double* ref) const {
  auto lc = local_coords(j);
  double v = legendre(lc[0], ref[0]);
  if (dim_ == 2) v *= legendre(lc[1], ref[1]);
  return v;
}

double Basis::deriv(int j, int axis, const double* ref) const {
  auto lc = local_coords(j);
  if (dim_ == 1) return legendre_deriv(lc[0], ref[0]);
  if (axis == 0) return legendre_deriv(lc[0], ref[0]) * legendre(lc[1], ref[1]);
  return legendre(lc[0], ref[0]) * legendre_deriv(lc[1], ref[1]);
}

BasisTable Basis::eval(const Mat& ref_points) const {
  int npts = static_cast<int>(ref_points.rows());
  BasisTable table;
  table.values.resize(npts, size_);
  for (int a = 0; a < dim_; ++a) table.grads[a].resize(npts, size_);
  for (int q = 0; q < npts; ++q) {
    double ref[2] = {ref_points(q, 0), dim_ == 2 ? ref_points(q, 1) : 0.0};
    for (int a = 0; a < dim_; ++a)
      if (ref[a] < -1.0 - 1e-12 || ref[a] > 1.0 + 1e-12)
        throw ConfigError("basis evaluation point outside reference element");
    for (int j = 0; j < size_; ++j) {
      table.values(q, j) = value(j, ref);
      for (int a = 0; a < dim_; ++a) table.grads[a](q, j) = deriv(j, a, ref);
    }
  }
  return table;
}

}  // namespace ldg
