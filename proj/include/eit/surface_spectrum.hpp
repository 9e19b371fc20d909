#pragma once

#include <cstddef>
#include <vector>

#include "eit/excitation.hpp"
#include "eit/mesh.hpp"

namespace eit {

/// Eigen decomposition of a dense symmetric matrix (row-major, order n):
/// Householder tridiagonalization followed by implicit QL with shifts.
/// Returns ascending eigenvalues and the matching orthonormal columns.
struct SymmetricEigen {
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<double> vectors;  // column v at vectors[i * n + v], i = row
};
SymmetricEigen symmetric_eigen(std::vector<double> a, std::size_t n);

// Generalized eigenbasis of (boundary Laplace-Beltrami stiffness, boundary
// mass) built with piecewise-linear/bilinear elements on the face grid of
// the closed surface dOmega.  Fractional Sobolev norms of a boundary
// density phi follow from the expansion of its load vector g_i = oint phi
// psi_i:  ||phi||^2_{H^s} = sum_i (1 + lambda_i)^s d_i^2 with d = V^T g.
class BoundarySpectrum {
 public:
  explicit BoundarySpectrum(const StructuredMesh& mesh);

  std::size_t node_count() const { return n_; }
  const std::vector<double>& eigenvalues() const { return lambda_; }
  std::vector<double> eigenvector(std::size_t v) const;       // M-orthonormal
  std::vector<double> mass_apply(const std::vector<double>& x) const;

  std::vector<double> load(const NeumannSpec& spec) const;
  std::vector<double> expand(const std::vector<double>& g) const;  // d = V^T g
  double fractional_norm_sq(const std::vector<double>& d, double s) const;
  double frequency_of_load(const std::vector<double>& g) const;

  /// F[phi] = ||phi||_{H^{-1/2}} / ||phi||_{H^{-1}}; errors when phi = 0.
  double frequency(const NeumannSpec& spec) const;

 private:
  StructuredMesh mesh_;
  std::size_t n_ = 0;
  std::vector<double> lambda_;
  std::vector<double> vectors_;      // M-orthonormal columns
  std::vector<double> mass_;         // P1 surface mass matrix, dense
  std::vector<std::size_t> node_of_grid_;  // full grid point -> surface node id
  std::vector<double> node_pos_;     // 3 * n_

  void build_2d(std::vector<double>& S, std::vector<double>& M);
  void build_3d(std::vector<double>& S, std::vector<double>& M);
};

/// Convenience wrapper building the spectrum for one evaluation.
double frequency(const StructuredMesh& mesh, const NeumannSpec& spec);

}  // namespace eit
