#pragma once

#include <vector>

#include "eit/band_matrix.hpp"
#include "eit/excitation.hpp"
#include "eit/hc_basis.hpp"
#include "eit/mesh.hpp"

namespace eit {

/// Half-bandwidth (diagonal included) of the assembled system under the
/// shared lexicographic parameter ordering.
std::size_t system_half_bandwidth(const StructuredMesh& mesh);

/// Conductivity-1 element stiffness K_e = int (grad N)^T grad N over the
/// element, nloc x nloc row-major.  The conductivity factor is applied at
/// assembly time.
std::vector<double> element_stiffness(const StructuredMesh& mesh, const MultiIndex& element,
                                      const QuadratureRule& quad);

// The distinct element matrices of a structured mesh: one per tuple of
// axis variants (at most 3^dim).  Shared read-only by all solves on the mesh.
class ElementMatrixCache {
 public:
  ElementMatrixCache(const StructuredMesh& mesh, const QuadratureRule& quad);

  int variant_code(const MultiIndex& e) const;
  const std::vector<double>& stiffness(const MultiIndex& e) const;
  int nloc() const { return nloc_; }

 private:
  StructuredMesh mesh_;
  int nloc_ = 0;
  std::vector<std::vector<double>> by_code_;
};

/// Assemble the homogeneous (sigma = 1) banded stiffness matrix.
BandedSymmetricMatrix assemble_homogeneous(const StructuredMesh& mesh,
                                           const ElementMatrixCache& cache);

/// Add the inclusion contrast: K += (k-1) * sum_{e in D} scatter(K_e).
/// Warns on stderr when the inclusion touches the boundary (d0 = 0).
void add_inclusion(BandedSymmetricMatrix& K, const StructuredMesh& mesh,
                   const ElementMatrixCache& cache, const InclusionMask& inclusion);

/// Boundary load p from face integrals of phi against the basis traces;
/// checks the compatibility condition |oint phi| <= 1e-10 * ||phi||_L2.
std::vector<double> assemble_neumann_load(const StructuredMesh& mesh, const NeumannSpec& spec,
                                          int face_points_per_axis = 6);

struct AssembledSystem {
  BandedSymmetricMatrix K;
  std::vector<double> load;
};

/// Full assembly for the standard model; pass nullptr for the homogeneous
/// problem.
AssembledSystem assemble_global(const StructuredMesh& mesh, const InclusionMask* inclusion,
                                const NeumannSpec& spec, const QuadratureRule& quad);

// Complete electrode model block system
//   [ K_ww   -K_wU ] [ w ]   [ 0 ]
//   [ -K_wU^T K_UU ] [ U ] = [ I ]
// with K_ww = bulk stiffness + sum_l (1/z_l) * electrode face mass,
// K_wU columns (1/z_l) * int_{e_l} N^T and K_UU = diag(|e_l| / z_l).
struct CemSystem {
  StructuredMesh mesh;
  BandedSymmetricMatrix K_ww;
  std::vector<std::vector<double>> coupling;  // K_wU columns, dense length m
  std::vector<double> kuu_diag;
  std::size_t L = 0;
};

CemSystem assemble_cem(const StructuredMesh& mesh, const ElementMatrixCache& cache,
                       const InclusionMask* inclusion, const ElectrodeLayout& layout);

/// sigma-weighted energy w^T K w accumulated element by element; avoids
/// keeping a second band copy for energy and residual checks.
double element_energy(const StructuredMesh& mesh, const ElementMatrixCache& cache,
                      const InclusionMask* inclusion, const std::vector<double>& w);

/// y = K(D) x accumulated element by element (true matrix, no gauge pin).
std::vector<double> element_apply(const StructuredMesh& mesh, const ElementMatrixCache& cache,
                                  const InclusionMask* inclusion, const std::vector<double>& x);

}  // namespace eit
