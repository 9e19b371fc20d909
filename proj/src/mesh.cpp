#include "eit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eit {

std::size_t StructuredMesh::element_count() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(n_e);
  return n;
}

std::size_t StructuredMesh::param_count() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(params_per_axis());
  return n;
}

std::size_t StructuredMesh::element_id(const MultiIndex& e) const {
  std::size_t id = 0;
  for (int a = dim - 1; a >= 0; --a) id = id * n_e + static_cast<std::size_t>(e[a]);
  return id;
}

MultiIndex StructuredMesh::element_at(std::size_t id) const {
  MultiIndex e{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    e[a] = static_cast<int>(id % n_e);
    id /= n_e;
  }
  return e;
}

bool StructuredMesh::element_in_grid(const MultiIndex& e) const {
  for (int a = 0; a < dim; ++a)
    if (e[a] < 0 || e[a] >= n_e) return false;
  return true;
}

std::size_t StructuredMesh::param_id(const MultiIndex& p) const {
  const int pp = params_per_axis();
  std::size_t id = 0;
  for (int a = dim - 1; a >= 0; --a) id = id * pp + static_cast<std::size_t>(p[a]);
  return id;
}

std::size_t StructuredMesh::element_param(const MultiIndex& e, const MultiIndex& local) const {
  MultiIndex p{0, 0, 0};
  for (int a = 0; a < dim; ++a) p[a] = e[a] + local[a];
  return param_id(p);
}

double StructuredMesh::volume() const { return std::pow(side_l, dim); }

StructuredMesh build_mesh(int dim, int n_e, double side_l) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("mesh dim must be 2 or 3");
  if (n_e < 3) throw std::invalid_argument("mesh needs at least 3 elements per axis");
  if (!(side_l > 0.0)) throw std::invalid_argument("mesh side length must be positive");
  StructuredMesh m;
  m.dim = dim;
  m.n_e = n_e;
  m.side_l = side_l;
  m.h = side_l / n_e;
  return m;
}

double InclusionMask::volume(const StructuredMesh& mesh) const {
  return static_cast<double>(elements.size()) * std::pow(mesh.h, mesh.dim);
}

double InclusionMask::volume_fraction(const StructuredMesh& mesh) const {
  return volume(mesh) / mesh.volume();
}

int inclusion_d0(const StructuredMesh& mesh, const std::vector<std::size_t>& elements) {
  if (elements.empty()) throw std::invalid_argument("empty inclusion has no d0");
  int d0 = mesh.n_e;
  for (std::size_t id : elements) {
    if (id >= mesh.element_count()) throw std::invalid_argument("inclusion element outside grid");
    const MultiIndex e = mesh.element_at(id);
    for (int a = 0; a < mesh.dim; ++a) d0 = std::min({d0, e[a], mesh.n_e - 1 - e[a]});
  }
  return d0;
}

int inclusion_face_distance(const StructuredMesh& mesh, const std::vector<std::size_t>& elements,
                            int axis, int side) {
  if (elements.empty()) throw std::invalid_argument("empty inclusion has no face distance");
  if (axis < 0 || axis >= mesh.dim) throw std::invalid_argument("face axis outside mesh dimension");
  int d = mesh.n_e;
  for (std::size_t id : elements) {
    const MultiIndex e = mesh.element_at(id);
    d = std::min(d, side == 0 ? e[axis] : mesh.n_e - 1 - e[axis]);
  }
  return d;
}

InclusionMask make_inclusion(const StructuredMesh& mesh, std::vector<std::size_t> elements,
                             double k) {
  if (!(k > 0.0)) throw std::invalid_argument("conductivity contrast k must be positive");
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  InclusionMask mask;
  mask.d0_elems = inclusion_d0(mesh, elements);  // also validates ids and non-emptiness
  mask.elements = std::move(elements);
  mask.k = k;
  return mask;
}

std::vector<BoundaryFace> boundary_faces(const StructuredMesh& mesh) {
  std::vector<BoundaryFace> faces;
  const std::size_t per_face = mesh.element_count() / mesh.n_e;
  faces.reserve(2 * mesh.dim * per_face);
  for (std::size_t id = 0; id < mesh.element_count(); ++id) {
    const MultiIndex e = mesh.element_at(id);
    for (int a = 0; a < mesh.dim; ++a)
      for (int side = 0; side < 2; ++side) {
        if ((side == 0 && e[a] != 0) || (side == 1 && e[a] != mesh.n_e - 1)) continue;
        BoundaryFace f;
        f.element = id;
        f.axis = a;
        f.side = side;
        for (int t = 0; t < mesh.dim; ++t)
          f.centroid[t] = t == a ? (side == 0 ? 0.0 : mesh.side_l) : (e[t] + 0.5) * mesh.h;
        faces.push_back(f);
      }
  }
  return faces;
}

std::size_t face_grid_id(const StructuredMesh& mesh, const BoundaryFace& f) {
  const MultiIndex e = mesh.element_at(f.element);
  std::size_t id = 0;
  for (int a = mesh.dim - 1; a >= 0; --a) {
    if (a == f.axis) continue;
    id = id * mesh.n_e + static_cast<std::size_t>(e[a]);
  }
  return id;
}

}  // namespace eit
