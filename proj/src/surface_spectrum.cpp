#include "eit/surface_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "eit/errors.hpp"
#include "eit/hc_basis.hpp"

namespace eit {

namespace {

void tred2(std::vector<double>& a, std::size_t n, std::vector<double>& d, std::vector<double>& e) {
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(A(i, k));
      if (scale == 0.0) {
        e[i] = A(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          A(i, k) /= scale;
          h += A(i, k) * A(i, k);
        }
        double f = A(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        A(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          A(j, i) = A(i, j) / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += A(j, k) * A(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) g += A(k, j) * A(i, k);
          e[j] = g / h;
          f += e[j] * A(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = A(i, j);
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) A(j, k) -= f * e[k] + g * A(i, k);
        }
      }
    } else {
      e[i] = A(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      for (std::size_t j = 0; j < i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < i; ++k) g += A(i, k) * A(k, j);
        for (std::size_t k = 0; k < i; ++k) A(k, j) -= g * A(k, i);
      }
    }
    d[i] = A(i, i);
    A(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) A(j, i) = A(i, j) = 0.0;
  }
}

void tqli(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, std::size_t n) {
  auto Z = [&](std::size_t i, std::size_t j) -> double& { return z[i * n + j]; };
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-15 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw std::runtime_error("tqli: too many iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = Z(k, i + 1);
            Z(k, i + 1) = s * Z(k, i) + c * f;
            Z(k, i) = c * Z(k, i) - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(std::vector<double> a, std::size_t n) {
  if (n == 0 || a.size() != n * n) throw std::invalid_argument("symmetric_eigen: bad dimensions");
  SymmetricEigen out;
  out.n = n;
  std::vector<double> d, e;
  if (n == 1) {
    out.values = {a[0]};
    out.vectors = {1.0};
    return out;
  }
  tred2(a, n, d, e);
  tqli(d, e, a, n);
  // sort ascending, permuting columns
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t v = 0; v < n; ++v) {
    out.values[v] = d[perm[v]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + v] = a[i * n + perm[v]];
  }
  return out;
}

namespace {

// dense lower Cholesky in place
void dense_cholesky(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t t = 0; t < j; ++t) d -= a[j * n + t] * a[j * n + t];
    if (!(d > 0.0)) throw std::runtime_error("boundary mass matrix not positive definite");
    d = std::sqrt(d);
    a[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t t = 0; t < j; ++t) s -= a[i * n + t] * a[j * n + t];
      a[i * n + j] = s / d;
    }
  }
}

void forward_solve_inplace(const std::vector<double>& L, std::size_t n, double* x) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t t = 0; t < i; ++t) s -= L[i * n + t] * x[t];
    x[i] = s / L[i * n + i];
  }
}

void backward_solve_inplace(const std::vector<double>& L, std::size_t n, double* x) {
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t t = ii + 1; t < n; ++t) s -= L[t * n + ii] * x[t];
    x[ii] = s / L[ii * n + ii];
  }
}

}  // namespace

void BoundarySpectrum::build_2d(std::vector<double>& S, std::vector<double>& M) {
  const double h = mesh_.h;
  for (const BoundaryFace& f : boundary_faces(mesh_)) {
    const MultiIndex e = mesh_.element_at(f.element);
    const int t = f.axis == 0 ? 1 : 0;  // tangential axis of the edge
    MultiIndex p0{0, 0, 0}, p1{0, 0, 0};
    p0[f.axis] = p1[f.axis] = f.side == 0 ? 0 : mesh_.n_e;
    p0[t] = e[t];
    p1[t] = e[t] + 1;
    const std::size_t grid_dim = static_cast<std::size_t>(mesh_.n_e + 1);
    const std::size_t g0 = p0[0] + grid_dim * p0[1];
    const std::size_t g1 = p1[0] + grid_dim * p1[1];
    const std::size_t a = node_of_grid_[g0], b = node_of_grid_[g1];
    S[a * n_ + a] += 1.0 / h;
    S[b * n_ + b] += 1.0 / h;
    S[a * n_ + b] -= 1.0 / h;
    S[b * n_ + a] -= 1.0 / h;
    M[a * n_ + a] += h / 3.0;
    M[b * n_ + b] += h / 3.0;
    M[a * n_ + b] += h / 6.0;
    M[b * n_ + a] += h / 6.0;
  }
}

void BoundarySpectrum::build_3d(std::vector<double>& S, std::vector<double>& M) {
  const double h = mesh_.h;
  // bilinear quad on an h x h flat face, node order (00, 10, 11, 01)
  static const double ks[4][4] = {{4, -1, -2, -1}, {-1, 4, -1, -2}, {-2, -1, 4, -1}, {-1, -2, -1, 4}};
  static const double km[4][4] = {{4, 2, 1, 2}, {2, 4, 2, 1}, {1, 2, 4, 2}, {2, 1, 2, 4}};
  const std::size_t grid_dim = static_cast<std::size_t>(mesh_.n_e + 1);
  for (const BoundaryFace& f : boundary_faces(mesh_)) {
    const MultiIndex e = mesh_.element_at(f.element);
    int t1 = -1, t2 = -1;
    for (int a = 0; a < 3; ++a) {
      if (a == f.axis) continue;
      (t1 < 0 ? t1 : t2) = a;
    }
    std::size_t nodes[4];
    const int corner[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (int c = 0; c < 4; ++c) {
      MultiIndex p{0, 0, 0};
      p[f.axis] = f.side == 0 ? 0 : mesh_.n_e;
      p[t1] = e[t1] + corner[c][0];
      p[t2] = e[t2] + corner[c][1];
      nodes[c] = node_of_grid_[p[0] + grid_dim * (p[1] + grid_dim * p[2])];
    }
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        S[nodes[a] * n_ + nodes[b]] += ks[a][b] / 6.0;
        M[nodes[a] * n_ + nodes[b]] += km[a][b] * h * h / 36.0;
      }
  }
}

BoundarySpectrum::BoundarySpectrum(const StructuredMesh& mesh) : mesh_(mesh) {
  const std::size_t grid_dim = static_cast<std::size_t>(mesh.n_e + 1);
  std::size_t grid_total = 1;
  for (int a = 0; a < mesh.dim; ++a) grid_total *= grid_dim;
  node_of_grid_.assign(grid_total, static_cast<std::size_t>(-1));

  for (std::size_t g = 0; g < grid_total; ++g) {
    std::size_t rest = g;
    bool on_boundary = false;
    std::array<int, 3> p{0, 0, 0};
    for (int a = 0; a < mesh.dim; ++a) {
      p[a] = static_cast<int>(rest % grid_dim);
      rest /= grid_dim;
      if (p[a] == 0 || p[a] == mesh.n_e) on_boundary = true;
    }
    if (!on_boundary) continue;
    node_of_grid_[g] = n_++;
    for (int a = 0; a < mesh.dim; ++a) node_pos_.push_back(p[a] * mesh.h);
    if (mesh.dim == 2) node_pos_.push_back(0.0);
  }

  std::vector<double> S(n_ * n_, 0.0), M(n_ * n_, 0.0);
  if (mesh.dim == 2)
    build_2d(S, M);
  else
    build_3d(S, M);
  mass_ = M;

  // generalized problem S v = lambda M v via M = L L^T
  std::vector<double> L = M;
  dense_cholesky(L, n_);
  // C = L^{-1} S L^{-T}
  std::vector<double> C(n_ * n_);
  {
    std::vector<double> col(n_);
    // T1 = L^{-1} S (column by column of S, which is symmetric)
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i = 0; i < n_; ++i) col[i] = S[i * n_ + j];
      forward_solve_inplace(L, n_, col.data());
      for (std::size_t i = 0; i < n_; ++i) C[i * n_ + j] = col[i];
    }
    // C = T1 L^{-T}: solve L (C^T col) = (T1 row)
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) col[j] = C[i * n_ + j];
      forward_solve_inplace(L, n_, col.data());
      for (std::size_t j = 0; j < n_; ++j) C[i * n_ + j] = col[j];
    }
  }
  SymmetricEigen eig = symmetric_eigen(std::move(C), n_);
  lambda_ = std::move(eig.values);
  for (double& l : lambda_) l = std::max(l, 0.0);  // clip eigenvalue roundoff
  // map back: v = L^{-T} y
  vectors_.assign(n_ * n_, 0.0);
  std::vector<double> col(n_);
  for (std::size_t v = 0; v < n_; ++v) {
    for (std::size_t i = 0; i < n_; ++i) col[i] = eig.vectors[i * n_ + v];
    backward_solve_inplace(L, n_, col.data());
    for (std::size_t i = 0; i < n_; ++i) vectors_[i * n_ + v] = col[i];
  }
}

std::vector<double> BoundarySpectrum::load(const NeumannSpec& spec) const {
  validate_spec(spec, mesh_);
  std::vector<double> g(n_, 0.0);
  const QuadratureRule rule = make_quadrature(mesh_.dim - 1, 6);
  const double ds = std::pow(mesh_.h, mesh_.dim - 1);
  const std::size_t grid_dim = static_cast<std::size_t>(mesh_.n_e + 1);

  for (const BoundaryFace& f : boundary_faces(mesh_)) {
    const MultiIndex e = mesh_.element_at(f.element);
    if (mesh_.dim == 2) {
      const int t = f.axis == 0 ? 1 : 0;
      std::size_t nodes[2];
      for (int c = 0; c < 2; ++c) {
        MultiIndex p{0, 0, 0};
        p[f.axis] = f.side == 0 ? 0 : mesh_.n_e;
        p[t] = e[t] + c;
        nodes[c] = node_of_grid_[p[0] + grid_dim * p[1]];
      }
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double xi = rule.point(q)[0];
        std::array<double, 3> x{0.0, 0.0, 0.0};
        x[f.axis] = f.side == 0 ? 0.0 : mesh_.side_l;
        x[t] = (e[t] + 0.5 + xi) * mesh_.h;
        const double phi = neumann_value(spec, mesh_, f, x);
        const double wq = rule.weight(q) * ds;
        g[nodes[0]] += wq * phi * (0.5 - xi);
        g[nodes[1]] += wq * phi * (0.5 + xi);
      }
    } else {
      int t1 = -1, t2 = -1;
      for (int a = 0; a < 3; ++a) {
        if (a == f.axis) continue;
        (t1 < 0 ? t1 : t2) = a;
      }
      std::size_t nodes[4];
      const int corner[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
      for (int c = 0; c < 4; ++c) {
        MultiIndex p{0, 0, 0};
        p[f.axis] = f.side == 0 ? 0 : mesh_.n_e;
        p[t1] = e[t1] + corner[c][0];
        p[t2] = e[t2] + corner[c][1];
        nodes[c] = node_of_grid_[p[0] + grid_dim * (p[1] + grid_dim * p[2])];
      }
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const std::array<double, 3> tq = rule.point(q);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        x[f.axis] = f.side == 0 ? 0.0 : mesh_.side_l;
        x[t1] = (e[t1] + 0.5 + tq[0]) * mesh_.h;
        x[t2] = (e[t2] + 0.5 + tq[1]) * mesh_.h;
        const double phi = neumann_value(spec, mesh_, f, x);
        const double wq = rule.weight(q) * ds;
        const double psi[4] = {(0.5 - tq[0]) * (0.5 - tq[1]), (0.5 + tq[0]) * (0.5 - tq[1]),
                               (0.5 + tq[0]) * (0.5 + tq[1]), (0.5 - tq[0]) * (0.5 + tq[1])};
        for (int c = 0; c < 4; ++c) g[nodes[c]] += wq * phi * psi[c];
      }
    }
  }
  return g;
}

std::vector<double> BoundarySpectrum::eigenvector(std::size_t v) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = vectors_[i * n_ + v];
  return out;
}

std::vector<double> BoundarySpectrum::mass_apply(const std::vector<double>& x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += mass_[i * n_ + j] * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<double> BoundarySpectrum::expand(const std::vector<double>& g) const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t v = 0; v < n_; ++v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += vectors_[i * n_ + v] * g[i];
    d[v] = s;
  }
  return d;
}

double BoundarySpectrum::fractional_norm_sq(const std::vector<double>& d, double s) const {
  double acc = 0.0;
  for (std::size_t v = 0; v < n_; ++v) acc += std::pow(1.0 + lambda_[v], s) * d[v] * d[v];
  return acc;
}

double BoundarySpectrum::frequency_of_load(const std::vector<double>& g) const {
  double gn = 0.0;
  for (double x : g) gn += x * x;
  if (gn == 0.0) throw ConfigError("frequency undefined for phi = 0");
  const std::vector<double> d = expand(g);
  const double h12 = fractional_norm_sq(d, -0.5);
  const double h1 = fractional_norm_sq(d, -1.0);
  return std::sqrt(h12 / h1);
}

double BoundarySpectrum::frequency(const NeumannSpec& spec) const {
  return frequency_of_load(load(spec));
}

double frequency(const StructuredMesh& mesh, const NeumannSpec& spec) {
  return BoundarySpectrum(mesh).frequency(spec);
}

}  // namespace eit
