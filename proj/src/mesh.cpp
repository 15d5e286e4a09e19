#include "ldg/mesh.hpp"

#include <algorithm>

namespace ldg {

Mesh::Mesh(int dim, std::array<double, 2> lower, std::array<double, 2> upper,
           std::array<int, 2> counts, BoundaryKind boundary)
    : dim_(dim), lower_(lower), upper_(upper), counts_(counts),
      boundary_(boundary) {
  if (dim != 1 && dim != 2) throw ConfigError("mesh dimension must be 1 or 2");
  if (dim == 1) counts_[1] = 1;
  for (int a = 0; a < dim_; ++a) {
    if (counts_[a] < 1) throw ConfigError("element count must be positive");
    if (!(upper_[a] > lower_[a])) throw ConfigError("inverted domain bounds");
    h_[a] = (upper_[a] - lower_[a]) / counts_[a];
  }
  if (dim_ == 1) h_[1] = 1.0;

  bool periodic = boundary_ == BoundaryKind::Periodic;
  for (int axis = 0; axis < dim_; ++axis) {
    int n = counts_[axis];
    int nt = (dim_ == 2) ? counts_[1 - axis] : 1;
    for (int t = 0; t < nt; ++t) {
      auto elem = [&](int i) {
        return (axis == 0) ? element_index(i, t) : element_index(t, i);
      };
      for (int i = 0; i <= n; ++i) {
        Face f;
        f.axis = axis;
        if (i == 0) {
          if (periodic) continue;  // merged with the i==n face below
          f.minus = -1;
          f.plus = elem(0);
          f.boundary = true;
          ++boundary_faces_;
        } else if (i == n) {
          f.minus = elem(n - 1);
          if (periodic) {
            f.plus = elem(0);
            ++interior_faces_;
          } else {
            f.plus = -1;
            f.boundary = true;
            ++boundary_faces_;
          }
        } else {
          f.minus = elem(i - 1);
          f.plus = elem(i);
          ++interior_faces_;
        }
        faces_.push_back(f);
      }
    }
  }
}

double Mesh::min_h() const {
  double m = h_[0];
  if (dim_ == 2) m = std::min(m, h_[1]);
  return m;
}

double Mesh::element_measure() const {
  return (dim_ == 2) ? h_[0] * h_[1] : h_[0];
}

double Mesh::domain_measure() const {
  double m = upper_[0] - lower_[0];
  if (dim_ == 2) m *= upper_[1] - lower_[1];
  return m;
}

int Mesh::num_elements() const {
  return (dim_ == 2) ? counts_[0] * counts_[1] : counts_[0];
}

std::array<int, 2> Mesh::element_coords(int e) const {
  return {e % counts_[0], e / counts_[0]};
}

std::array<double, 2> Mesh::center(int e) const {
  auto c = element_coords(e);
  std::array<double, 2> x{0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = lower_[a] + (c[a] + 0.5) * h_[a];
  return x;
}

std::array<double, 2> Mesh::to_physical(int e, const double* ref) const {
  auto c = center(e);
  std::array<double, 2> x{0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = c[a] + 0.5 * h_[a] * ref[a];
  return x;
}

Mesh build_mesh(int dim, std::array<double, 2> lower, std::array<double, 2> upper,
                std::array<int, 2> counts, BoundaryKind boundary) {
  return Mesh(dim, lower, upper, counts, boundary);
}

}  // namespace ldg
