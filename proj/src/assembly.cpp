#include "eit/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "eit/errors.hpp"

namespace eit {

std::size_t system_half_bandwidth(const StructuredMesh& mesh) {
  const std::size_t p = static_cast<std::size_t>(mesh.params_per_axis());
  std::size_t span = 0, stride = 1;
  for (int a = 0; a < mesh.dim; ++a) {
    span += 2 * stride;
    stride *= p;
  }
  return span + 1;  // 2-D: 2p+3, 3-D: 2p^2+2p+3
}

std::vector<double> element_stiffness(const StructuredMesh& mesh, const MultiIndex& element,
                                      const QuadratureRule& quad) {
  if (!mesh.element_in_grid(element)) throw std::invalid_argument("element outside grid");
  const int nloc = mesh.dim == 2 ? 9 : 27;
  std::vector<double> K(static_cast<std::size_t>(nloc) * nloc, 0.0);
  const double measure = std::pow(mesh.h, mesh.dim);  // gradients already carry 1/h
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const BasisEval basis = eval_tensor_basis(mesh, element, quad.point(q));
    const double wq = quad.weight(q) * measure;
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b <= a; ++b) {
        double g = 0.0;
        for (int ax = 0; ax < mesh.dim; ++ax) g += basis.grad[ax][a] * basis.grad[ax][b];
        K[a * nloc + b] += wq * g;
      }
  }
  for (int a = 0; a < nloc; ++a)
    for (int b = a + 1; b < nloc; ++b) K[a * nloc + b] = K[b * nloc + a];
  return K;
}

ElementMatrixCache::ElementMatrixCache(const StructuredMesh& mesh, const QuadratureRule& quad)
    : mesh_(mesh), nloc_(mesh.dim == 2 ? 9 : 27) {
  const int codes = mesh.dim == 2 ? 9 : 27;
  by_code_.resize(codes);
  // representative element index per axis variant
  auto rep = [&](int v) { return v == 1 ? 0 : (v == 2 ? mesh.n_e - 1 : 1); };
  for (int code = 0; code < codes; ++code) {
    int c = code;
    MultiIndex e{0, 0, 0};
    bool valid = true;
    for (int a = 0; a < mesh.dim; ++a) {
      const int v = c % 3;
      c /= 3;
      e[a] = rep(v);
      if (v == 0 && mesh.n_e < 3) valid = false;
    }
    if (valid) by_code_[code] = element_stiffness(mesh, e, quad);
  }
}

int ElementMatrixCache::variant_code(const MultiIndex& e) const {
  int code = 0, base = 1;
  for (int a = 0; a < mesh_.dim; ++a) {
    code += static_cast<int>(axis_variant(e[a], mesh_.n_e)) * base;
    base *= 3;
  }
  return code;
}

const std::vector<double>& ElementMatrixCache::stiffness(const MultiIndex& e) const {
  return by_code_[variant_code(e)];
}

namespace {

void scatter_element(BandedSymmetricMatrix& K, const StructuredMesh& mesh,
                     const std::vector<double>& Ke, const MultiIndex& e, double factor) {
  const int nloc = mesh.dim == 2 ? 9 : 27;
  std::size_t gids[27];
  int loc = 0;
  const int nz = mesh.dim == 3 ? 3 : 1;
  for (int c = 0; c < nz; ++c)
    for (int b = 0; b < 3; ++b)
      for (int a = 0; a < 3; ++a, ++loc) gids[loc] = mesh.element_param(e, {a, b, c});
  for (int a = 0; a < nloc; ++a)
    for (int b = 0; b < nloc; ++b)
      if (gids[a] >= gids[b]) K.add(gids[a], gids[b], factor * Ke[a * nloc + b]);
}

}  // namespace

BandedSymmetricMatrix assemble_homogeneous(const StructuredMesh& mesh,
                                           const ElementMatrixCache& cache) {
  BandedSymmetricMatrix K(mesh.param_count(), system_half_bandwidth(mesh));
  for (std::size_t id = 0; id < mesh.element_count(); ++id) {
    const MultiIndex e = mesh.element_at(id);
    scatter_element(K, mesh, cache.stiffness(e), e, 1.0);
  }
  return K;
}

void add_inclusion(BandedSymmetricMatrix& K, const StructuredMesh& mesh,
                   const ElementMatrixCache& cache, const InclusionMask& inclusion) {
  if (inclusion.k == 1.0 || inclusion.elements.empty()) return;
  if (inclusion.d0_elems == 0)
    std::fprintf(stderr, "warning: inclusion touches the boundary (d0 = 0)\n");
  const double factor = inclusion.k - 1.0;
  for (std::size_t id : inclusion.elements) {
    const MultiIndex e = mesh.element_at(id);
    scatter_element(K, mesh, cache.stiffness(e), e, factor);
  }
}

std::vector<double> assemble_neumann_load(const StructuredMesh& mesh, const NeumannSpec& spec,
                                          int face_points_per_axis) {
  validate_spec(spec, mesh);
  std::vector<double> p(mesh.param_count(), 0.0);
  const QuadratureRule face_rule = make_quadrature(mesh.dim - 1, face_points_per_axis);
  const double ds = std::pow(mesh.h, mesh.dim - 1);
  const int nloc = mesh.dim == 2 ? 9 : 27;

  double flux = 0.0, l2 = 0.0;
  for (const BoundaryFace& f : boundary_faces(mesh)) {
    const MultiIndex e = mesh.element_at(f.element);
    std::size_t gids[27];
    int loc = 0;
    const int nz = mesh.dim == 3 ? 3 : 1;
    for (int c = 0; c < nz; ++c)
      for (int b = 0; b < 3; ++b)
        for (int a = 0; a < 3; ++a, ++loc) gids[loc] = mesh.element_param(e, {a, b, c});

    for (std::size_t q = 0; q < face_rule.size(); ++q) {
      const std::array<double, 3> tq = face_rule.point(q);
      std::array<double, 3> xi{0.0, 0.0, 0.0};
      std::array<double, 3> x{0.0, 0.0, 0.0};
      int t = 0;
      for (int a = 0; a < mesh.dim; ++a) {
        if (a == f.axis) {
          xi[a] = f.side == 0 ? -0.5 : 0.5;
          x[a] = f.side == 0 ? 0.0 : mesh.side_l;
        } else {
          xi[a] = tq[t++];
          x[a] = (e[a] + 0.5 + xi[a]) * mesh.h;
        }
      }
      const double phi = neumann_value(spec, mesh, f, x);
      const double wq = face_rule.weight(q) * ds;
      flux += wq * phi;
      l2 += wq * phi * phi;
      if (phi == 0.0) continue;
      const BasisEval basis = eval_tensor_basis(mesh, e, xi);
      for (int a = 0; a < nloc; ++a) p[gids[a]] += wq * phi * basis.value[a];
    }
  }
  const double norm = std::sqrt(l2);
  if (norm == 0.0) throw ConfigError("Neumann data is identically zero");
  if (std::abs(flux) > 1e-10 * norm)
    throw ConfigError("incompatible Neumann data: nonzero net flux");
  return p;
}

AssembledSystem assemble_global(const StructuredMesh& mesh, const InclusionMask* inclusion,
                                const NeumannSpec& spec, const QuadratureRule& quad) {
  const ElementMatrixCache cache(mesh, quad);
  AssembledSystem sys{assemble_homogeneous(mesh, cache), assemble_neumann_load(mesh, spec)};
  if (inclusion) add_inclusion(sys.K, mesh, cache, *inclusion);
  return sys;
}

CemSystem assemble_cem(const StructuredMesh& mesh, const ElementMatrixCache& cache,
                       const InclusionMask* inclusion, const ElectrodeLayout& layout) {
  validate_layout(layout, mesh);
  CemSystem sys{mesh, assemble_homogeneous(mesh, cache), {}, {}, layout.electrodes.size()};
  if (inclusion) add_inclusion(sys.K_ww, mesh, cache, *inclusion);

  const QuadratureRule face_rule = make_quadrature(mesh.dim - 1, 3);
  const double ds = std::pow(mesh.h, mesh.dim - 1);
  const int nloc = mesh.dim == 2 ? 9 : 27;

  sys.coupling.assign(sys.L, std::vector<double>(mesh.param_count(), 0.0));
  sys.kuu_diag.resize(sys.L);
  for (std::size_t l = 0; l < sys.L; ++l) {
    const Electrode& el = layout.electrodes[l];
    const double invz = 1.0 / el.z;
    sys.kuu_diag[l] = layout.area(mesh, l) * invz;
    for (const BoundaryFace& f : el.faces) {
      const MultiIndex e = mesh.element_at(f.element);
      std::size_t gids[27];
      int loc = 0;
      const int nz = mesh.dim == 3 ? 3 : 1;
      for (int c = 0; c < nz; ++c)
        for (int b = 0; b < 3; ++b)
          for (int a = 0; a < 3; ++a, ++loc) gids[loc] = mesh.element_param(e, {a, b, c});

      double mass[27 * 27] = {};
      double trace[27] = {};
      for (std::size_t q = 0; q < face_rule.size(); ++q) {
        const std::array<double, 3> tq = face_rule.point(q);
        std::array<double, 3> xi{0.0, 0.0, 0.0};
        int t = 0;
        for (int a = 0; a < mesh.dim; ++a)
          xi[a] = a == f.axis ? (f.side == 0 ? -0.5 : 0.5) : tq[t++];
        const double wq = face_rule.weight(q) * ds;
        const BasisEval basis = eval_tensor_basis(mesh, e, xi);
        for (int a = 0; a < nloc; ++a) {
          trace[a] += wq * basis.value[a];
          for (int b = 0; b <= a; ++b) mass[a * nloc + b] += wq * basis.value[a] * basis.value[b];
        }
      }
      for (int a = 0; a < nloc; ++a) {
        sys.coupling[l][gids[a]] += invz * trace[a];
        for (int b = 0; b <= a; ++b) sys.K_ww.add(gids[a], gids[b], invz * mass[a * nloc + b]);
      }
    }
  }
  return sys;
}

double element_energy(const StructuredMesh& mesh, const ElementMatrixCache& cache,
                      const InclusionMask* inclusion, const std::vector<double>& w) {
  const int nloc = cache.nloc();
  std::vector<char> in_d(inclusion ? mesh.element_count() : 0, 0);
  if (inclusion)
    for (std::size_t id : inclusion->elements) in_d[id] = 1;
  double energy = 0.0;
  for (std::size_t id = 0; id < mesh.element_count(); ++id) {
    const MultiIndex e = mesh.element_at(id);
    const std::vector<double>& Ke = cache.stiffness(e);
    const double sigma = (inclusion && in_d[id]) ? inclusion->k : 1.0;
    double we[27];
    int loc = 0;
    const int nz = mesh.dim == 3 ? 3 : 1;
    for (int c = 0; c < nz; ++c)
      for (int b = 0; b < 3; ++b)
        for (int a = 0; a < 3; ++a, ++loc) we[loc] = w[mesh.element_param(e, {a, b, c})];
    double acc = 0.0;
    for (int a = 0; a < nloc; ++a) {
      double row = 0.0;
      for (int b = 0; b < nloc; ++b) row += Ke[a * nloc + b] * we[b];
      acc += we[a] * row;
    }
    energy += sigma * acc;
  }
  return energy;
}

std::vector<double> element_apply(const StructuredMesh& mesh, const ElementMatrixCache& cache,
                                  const InclusionMask* inclusion, const std::vector<double>& x) {
  const int nloc = cache.nloc();
  std::vector<char> in_d(inclusion ? mesh.element_count() : 0, 0);
  if (inclusion)
    for (std::size_t id : inclusion->elements) in_d[id] = 1;
  std::vector<double> y(mesh.param_count(), 0.0);
  for (std::size_t id = 0; id < mesh.element_count(); ++id) {
    const MultiIndex e = mesh.element_at(id);
    const std::vector<double>& Ke = cache.stiffness(e);
    const double sigma = (inclusion && in_d[id]) ? inclusion->k : 1.0;
    std::size_t gids[27];
    double xe[27];
    int loc = 0;
    const int nz = mesh.dim == 3 ? 3 : 1;
    for (int c = 0; c < nz; ++c)
      for (int b = 0; b < 3; ++b)
        for (int a = 0; a < 3; ++a, ++loc) {
          gids[loc] = mesh.element_param(e, {a, b, c});
          xe[loc] = x[gids[loc]];
        }
    for (int a = 0; a < nloc; ++a) {
      double row = 0.0;
      for (int b = 0; b < nloc; ++b) row += Ke[a * nloc + b] * xe[b];
      y[gids[a]] += sigma * row;
    }
  }
  return y;
}

}  // namespace eit
