#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace eit {

struct StructuredMesh;

// One-dimensional High-Continuity quadratic shape functions on the
// reference coordinate xi in [-1/2, 1/2].  Interior elements carry the
// plain quadratic-spline triple; elements touching the domain boundary
// on an axis use modified triples whose end parameter is the function
// value on the boundary itself.
enum class AxisVariant : std::uint8_t { Interior = 0, Left = 1, Right = 2 };

/// Value of shape function i (1-based, i in {1,2,3}) at xi.
double shape_value(AxisVariant variant, int i, double xi);

/// d/dxi of shape function i at xi.
double shape_deriv(AxisVariant variant, int i, double xi);

/// 1-D reference stiffness factor: K1[i][j] = int_{-1/2}^{1/2} phi_i' phi_j'.
std::array<std::array<double, 3>, 3> axis_stiffness_1d(AxisVariant variant);

/// 1-D reference mass factor: M1[i][j] = int_{-1/2}^{1/2} phi_i phi_j.
std::array<std::array<double, 3>, 3> axis_mass_1d(AxisVariant variant);

// Tensor-product Gauss-Legendre rule on [-1/2,1/2]^dim.  Weights sum to 1
// (the reference measure); 3 points per axis are exact for the degree-4
// stiffness integrand.
struct QuadratureRule {
  int dim = 0;
  int points_per_axis = 0;
  std::vector<double> nodes_1d;    // on [-1/2, 1/2]
  std::vector<double> weights_1d;  // sum to 1

  std::size_t size() const;                          // points_per_axis^dim
  std::array<double, 3> point(std::size_t q) const;  // unused axes = 0
  double weight(std::size_t q) const;
};

/// Gauss-Legendre rule, tensorized; rejects points_per_axis < 3.
QuadratureRule make_quadrature(int dim, int points_per_axis);

// Basis row N_e and physical gradient rows grad N_e evaluated at a point of
// the reference cube.  nloc = 3^dim (9 in 2-D, 27 in 3-D); local ordering is
// lexicographic with the x index fastest, matching the global parameter
// ordering.
struct BasisEval {
  int dim = 0;
  int nloc = 0;
  std::array<double, 27> value{};
  std::array<std::array<double, 27>, 3> grad{};  // grad[axis][local]
};

/// Axis variant used by an element at position `elem_axis_index` along an
/// axis with n_e elements.
AxisVariant axis_variant(int elem_axis_index, int n_e);

/// Evaluate N_e and grad N_e for an element of `mesh` at reference point xi.
/// Boundary variants are selected per axis; gradients carry the 1/h factor.
BasisEval eval_tensor_basis(const StructuredMesh& mesh,
                            const std::array<int, 3>& element,
                            const std::array<double, 3>& xi);

}  // namespace eit
