#include "eit/hc_basis.hpp"

#include <cmath>
#include <stdexcept>

#include "eit/mesh.hpp"

namespace eit {

namespace {

// Coefficient triples (c0 + c1*xi + c2*xi^2) for the three shape functions
// of each variant.
constexpr double kCoef[3][3][3] = {
    // interior
    {{1.0 / 8.0, -0.5, 0.5}, {3.0 / 4.0, 0.0, -1.0}, {1.0 / 8.0, 0.5, 0.5}},
    // left boundary (xi = -1/2 lies on the domain boundary)
    {{1.0 / 4.0, -1.0, 1.0}, {5.0 / 8.0, 0.5, -1.5}, {1.0 / 8.0, 0.5, 0.5}},
    // right boundary (xi = +1/2 lies on the domain boundary)
    {{1.0 / 8.0, -0.5, 0.5}, {5.0 / 8.0, -0.5, -1.5}, {1.0 / 4.0, 1.0, 1.0}},
};

void check_index(int i) {
  if (i < 1 || i > 3) throw std::invalid_argument("shape function index must be 1, 2 or 3");
}

}  // namespace

double shape_value(AxisVariant variant, int i, double xi) {
  check_index(i);
  const double* c = kCoef[static_cast<int>(variant)][i - 1];
  return c[0] + xi * (c[1] + xi * c[2]);
}

double shape_deriv(AxisVariant variant, int i, double xi) {
  check_index(i);
  const double* c = kCoef[static_cast<int>(variant)][i - 1];
  return c[1] + 2.0 * xi * c[2];
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_p.
void gauss_legendre(int p, std::vector<double>& x, std::vector<double>& w) {
  x.assign(p, 0.0);
  w.assign(p, 0.0);
  for (int i = 0; i < (p + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (p + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < p; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = p * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[p - 1 - i] = z;
    w[i] = w[p - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

std::array<std::array<double, 3>, 3> axis_factor(AxisVariant v, bool derivatives) {
  // 5-point Gauss is exact for the degree <= 4 integrands here.
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  std::array<std::array<double, 3>, 3> out{};
  for (int q = 0; q < 5; ++q) {
    const double xi = 0.5 * x[q];
    const double wt = 0.5 * w[q];
    double f[3];
    for (int i = 0; i < 3; ++i)
      f[i] = derivatives ? shape_deriv(v, i + 1, xi) : shape_value(v, i + 1, xi);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out[i][j] += wt * f[i] * f[j];
  }
  return out;
}

}  // namespace

std::array<std::array<double, 3>, 3> axis_stiffness_1d(AxisVariant v) {
  return axis_factor(v, true);
}

std::array<std::array<double, 3>, 3> axis_mass_1d(AxisVariant v) {
  return axis_factor(v, false);
}

std::size_t QuadratureRule::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points_per_axis);
  return n;
}

std::array<double, 3> QuadratureRule::point(std::size_t q) const {
  std::array<double, 3> p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    p[a] = nodes_1d[q % points_per_axis];
    q /= points_per_axis;
  }
  return p;
}

double QuadratureRule::weight(std::size_t q) const {
  double w = 1.0;
  for (int a = 0; a < dim; ++a) {
    w *= weights_1d[q % points_per_axis];
    q /= points_per_axis;
  }
  return w;
}

QuadratureRule make_quadrature(int dim, int points_per_axis) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("quadrature dim must be 1, 2 or 3");
  if (points_per_axis < 3)
    throw std::invalid_argument("points_per_axis < 3: stiffness integrand is degree 4 per axis");
  QuadratureRule rule;
  rule.dim = dim;
  rule.points_per_axis = points_per_axis;
  std::vector<double> x, w;
  gauss_legendre(points_per_axis, x, w);
  rule.nodes_1d.resize(points_per_axis);
  rule.weights_1d.resize(points_per_axis);
  for (int i = 0; i < points_per_axis; ++i) {
    rule.nodes_1d[i] = 0.5 * x[i];    // map [-1,1] -> [-1/2,1/2]
    rule.weights_1d[i] = 0.5 * w[i];  // weights sum to 1
  }
  return rule;
}

AxisVariant axis_variant(int elem_axis_index, int n_e) {
  if (elem_axis_index == 0) return AxisVariant::Left;
  if (elem_axis_index == n_e - 1) return AxisVariant::Right;
  return AxisVariant::Interior;
}

BasisEval eval_tensor_basis(const StructuredMesh& mesh, const std::array<int, 3>& element,
                            const std::array<double, 3>& xi) {
  BasisEval out;
  out.dim = mesh.dim;
  out.nloc = mesh.dim == 2 ? 9 : 27;

  double val[3][3];   // val[axis][i]
  double der[3][3];   // d/dxi, scaled to physical units below
  for (int a = 0; a < mesh.dim; ++a) {
    const AxisVariant v = axis_variant(element[a], mesh.n_e);
    for (int i = 0; i < 3; ++i) {
      val[a][i] = shape_value(v, i + 1, xi[a]);
      der[a][i] = shape_deriv(v, i + 1, xi[a]) / mesh.h;
    }
  }

  const int nz = mesh.dim == 3 ? 3 : 1;
  int loc = 0;
  for (int c = 0; c < nz; ++c)
    for (int b = 0; b < 3; ++b)
      for (int a = 0; a < 3; ++a, ++loc) {
        const double vz = mesh.dim == 3 ? val[2][c] : 1.0;
        out.value[loc] = val[0][a] * val[1][b] * vz;
        out.grad[0][loc] = der[0][a] * val[1][b] * vz;
        out.grad[1][loc] = val[0][a] * der[1][b] * vz;
        if (mesh.dim == 3) out.grad[2][loc] = val[0][a] * val[1][b] * der[2][c];
      }
  return out;
}

}  // namespace eit
