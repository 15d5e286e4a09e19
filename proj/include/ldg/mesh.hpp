#pragma once

#include <array>
#include <vector>

#include "ldg/common.hpp"

namespace ldg {

enum class BoundaryKind { ZeroFlux, Periodic, Dirichlet };

/// A face normal to one axis. `minus` is the element on the lower-coordinate
/// side, `plus` the one on the upper side; -1 marks the outside of the domain.
struct Face {
  int axis = 0;
  int minus = -1;
  int plus = -1;
  bool boundary = false;
};

/// Uniform tensor-product mesh of line segments (1D) or axis-aligned
/// rectangles (2D). Immutable after construction.
class Mesh {
 public:
  Mesh(int dim, std::array<double, 2> lower, std::array<double, 2> upper,
       std::array<int, 2> counts, BoundaryKind boundary);

  int dim() const { return dim_; }
  BoundaryKind boundary() const { return boundary_; }
  int count(int axis) const { return counts_[axis]; }
  double lower(int axis) const { return lower_[axis]; }
  double upper(int axis) const { return upper_[axis]; }
  double h(int axis) const { return h_[axis]; }
  double min_h() const;
  double element_measure() const;
  double domain_measure() const;

  int num_elements() const;
  int element_index(int ix, int iy = 0) const { return ix + counts_[0] * iy; }
  std::array<int, 2> element_coords(int e) const;
  /// Center of element e.
  std::array<double, 2> center(int e) const;
  /// Reference-to-physical map for element e.
  std::array<double, 2> to_physical(int e, const double* ref) const;

  const std::vector<Face>& faces() const { return faces_; }
  int num_interior_faces() const { return interior_faces_; }
  int num_boundary_faces() const { return boundary_faces_; }

 private:
  int dim_;
  std::array<double, 2> lower_, upper_;
  std::array<int, 2> counts_;
  std::array<double, 2> h_;
  BoundaryKind boundary_;
  std::vector<Face> faces_;
  int interior_faces_ = 0;
  int boundary_faces_ = 0;
};

Mesh build_mesh(int dim, std::array<double, 2> lower, std::array<double, 2> upper,
                std::array<int, 2> counts, BoundaryKind boundary);

}  // namespace ldg
