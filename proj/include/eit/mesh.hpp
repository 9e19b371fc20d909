#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace eit {

using MultiIndex = std::array<int, 3>;  // unused trailing axes are 0

// Axis-aligned square/cube grid of HC elements on [0, side_l]^dim.
// Elements and HC parameters are ordered lexicographically with x fastest;
// the parameter grid carries one extra layer beyond each face, giving
// (n_e + 2)^dim parameters in total.
struct StructuredMesh {
  int dim = 0;
  int n_e = 0;
  double side_l = 0.0;
  double h = 0.0;

  int params_per_axis() const { return n_e + 2; }
  std::size_t element_count() const;
  std::size_t param_count() const;

  std::size_t element_id(const MultiIndex& e) const;
  MultiIndex element_at(std::size_t id) const;
  bool element_in_grid(const MultiIndex& e) const;

  std::size_t param_id(const MultiIndex& p) const;

  /// Global parameter id of local tensor index (a,b,c) of element e.
  std::size_t element_param(const MultiIndex& e, const MultiIndex& local) const;

  double volume() const;  // |Omega| = side_l^dim
};

/// Build a mesh; rejects dim not in {2,3}, n_e < 3, side_l <= 0.
StructuredMesh build_mesh(int dim, int n_e, double side_l);

// Union of whole elements forming the inclusion D, with conductivity
// contrast k and the minimum element-layer distance to the boundary.
struct InclusionMask {
  std::vector<std::size_t> elements;  // sorted element ids
  double k = 1.0;
  int d0_elems = 0;
  std::size_t size() const { return elements.size(); }
  double volume(const StructuredMesh& mesh) const;
  double volume_fraction(const StructuredMesh& mesh) const;
};

/// Minimum element-layer (Chebyshev) distance from the member elements to
/// the boundary; errors on an empty set.
int inclusion_d0(const StructuredMesh& mesh, const std::vector<std::size_t>& elements);

/// Element-layer distance from the member elements to one face of the cube
/// (axis, side); side 0 = low face, 1 = high face.
int inclusion_face_distance(const StructuredMesh& mesh, const std::vector<std::size_t>& elements,
                            int axis, int side);

InclusionMask make_inclusion(const StructuredMesh& mesh, std::vector<std::size_t> elements,
                             double k);

// One face of an element lying on the domain boundary.
struct BoundaryFace {
  std::size_t element = 0;
  int axis = 0;  // outward normal axis
  int side = 0;  // 0: normal -e_axis, 1: normal +e_axis
  std::array<double, 3> centroid{};
  double normal_sign() const { return side == 0 ? -1.0 : 1.0; }
};

/// All boundary faces of the mesh: exactly 2*dim*n_e^(dim-1) of them.
std::vector<BoundaryFace> boundary_faces(const StructuredMesh& mesh);

/// Face id of a boundary face within the face grid of one cube face:
/// lexicographic in the tangential element indices.  Used by electrode
/// layouts to address face elements.
std::size_t face_grid_id(const StructuredMesh& mesh, const BoundaryFace& f);

}  // namespace eit
