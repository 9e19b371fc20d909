#include "eit/forward.hpp"

#include <algorithm>
#include <cmath>

#include "eit/errors.hpp"

namespace eit {

namespace {

constexpr double kPowerDualityTol = 1e-9;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Contact-layer power sum_l (1/z_l) int_{e_l} (u - U^l)^2, integrated by
// face quadrature; independent of the assembled coupling blocks.
double contact_energy(const StructuredMesh& mesh, const ElectrodeLayout& layout,
                      const std::vector<double>& w, const std::vector<double>& U) {
  const QuadratureRule rule = make_quadrature(mesh.dim - 1, 3);
  const double ds = std::pow(mesh.h, mesh.dim - 1);
  const int nloc = mesh.dim == 2 ? 9 : 27;
  double total = 0.0;
  for (std::size_t l = 0; l < layout.electrodes.size(); ++l) {
    double acc = 0.0;
    for (const BoundaryFace& f : layout.electrodes[l].faces) {
      const MultiIndex e = mesh.element_at(f.element);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const std::array<double, 3> tq = rule.point(q);
        std::array<double, 3> xi{0.0, 0.0, 0.0};
        int t = 0;
        for (int a = 0; a < mesh.dim; ++a)
          xi[a] = a == f.axis ? (f.side == 0 ? -0.5 : 0.5) : tq[t++];
        const BasisEval basis = eval_tensor_basis(mesh, e, xi);
        double u = 0.0;
        int loc = 0;
        const int nz = mesh.dim == 3 ? 3 : 1;
        for (int c = 0; c < nz; ++c)
          for (int b = 0; b < 3; ++b)
            for (int a = 0; a < 3; ++a, ++loc)
              u += basis.value[loc] * w[mesh.element_param(e, {a, b, c})];
        const double d = u - U[l];
        acc += rule.weight(q) * ds * d * d;
      }
    }
    total += acc / layout.electrodes[l].z;
  }
  return total;
}

}  // namespace

ForwardContext::ForwardContext(const StructuredMesh& mesh, int quad_points)
    : mesh_(mesh),
      cache_(mesh, make_quadrature(mesh.dim, quad_points)),
      K_hom_(assemble_homogeneous(mesh, cache_)) {}

ForwardSolve ForwardContext::solve_neumann_power(const NeumannSpec& spec,
                                                 const InclusionMask* inclusion) {
  const std::vector<double> p = assemble_neumann_load(mesh_, spec);
  BandedSymmetricMatrix K = K_hom_;
  if (inclusion) add_inclusion(K, mesh_, cache_, *inclusion);
  const InclusionMask* d = inclusion;
  ApplyFn apply = [this, d](const std::vector<double>& x) {
    return element_apply(mesh_, cache_, d, x);
  };
  NeumannSolution ns = solve_neumann(std::move(K), p, apply);

  ForwardSolve out;
  out.power = dot(p, ns.w);
  out.energy = element_energy(mesh_, cache_, inclusion, ns.w);
  out.w = std::move(ns.w);
  out.stats = ns.stats;
  const double scale = std::max({std::abs(out.power), std::abs(out.energy), 1e-300});
  if (std::abs(out.power - out.energy) > kPowerDualityTol * scale)
    throw SolverError("power duality violated: oint(u phi) != int sigma |grad u|^2",
                      std::abs(out.power - out.energy) / scale);
  return out;
}

ForwardSolve ForwardContext::solve_cem_power(const ElectrodeLayout& layout,
                                             const InclusionMask* inclusion) {
  CemSystem sys = assemble_cem(mesh_, cache_, inclusion, layout);
  CemSolution cs = solve_cem(sys, layout.current);

  ForwardSolve out;
  out.power = dot(layout.current, cs.U);
  out.energy = element_energy(mesh_, cache_, inclusion, cs.w) +
               contact_energy(mesh_, layout, cs.w, cs.U);
  out.w = std::move(cs.w);
  out.U = std::move(cs.U);
  out.stats = cs.stats;
  const double scale = std::max({std::abs(out.power), std::abs(out.energy), 1e-300});
  if (std::abs(out.power - out.energy) > kPowerDualityTol * scale)
    throw SolverError("CEM power identity violated", std::abs(out.power - out.energy) / scale);
  return out;
}

const ForwardSolve& ForwardContext::homogeneous(const NeumannSpec& spec) {
  const std::string key = "neumann/" + spec.descriptor();
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return *it->second;
  }
  auto solved = std::make_shared<ForwardSolve>(solve_neumann_power(spec, nullptr));
  std::lock_guard<std::mutex> lock(memo_mutex_);
  auto [it, inserted] = memo_.emplace(key, std::move(solved));
  return *it->second;
}

const ForwardSolve& ForwardContext::homogeneous_cem(const ElectrodeLayout& layout) {
  const std::string key = "cem/" + layout.descriptor();
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return *it->second;
  }
  auto solved = std::make_shared<ForwardSolve>(solve_cem_power(layout, nullptr));
  std::lock_guard<std::mutex> lock(memo_mutex_);
  auto [it, inserted] = memo_.emplace(key, std::move(solved));
  return *it->second;
}

namespace {

SolveRecord make_record(const StructuredMesh& mesh, const InclusionMask& inclusion, double W0,
                        double W, const std::string& model, const RunPairOptions& opts) {
  SolveRecord rec;
  rec.test_id = opts.test_id;
  rec.model = model;
  rec.dim = mesh.dim;
  rec.n_e = mesh.n_e;
  rec.k = inclusion.k;
  rec.d0_elems = inclusion.d0_elems;
  const int face = opts.d03_face < 0 ? 2 * mesh.dim - 1 : opts.d03_face;
  rec.d03_elems = inclusion_face_distance(mesh, inclusion.elements, face / 2, face % 2);
  rec.n_elements = inclusion.size();
  rec.volume_fraction = inclusion.volume_fraction(mesh);
  rec.W0 = W0;
  rec.W = W;
  rec.gap = std::abs(W - W0) / W0;
  rec.seed = opts.seed;
  return rec;
}

}  // namespace

SolveRecord run_pair(ForwardContext& ctx, const NeumannSpec& spec, const InclusionMask& inclusion,
                     const RunPairOptions& opts) {
  if (inclusion.elements.empty()) throw ConfigError("run_pair needs a nonempty inclusion");
  const double W0 = ctx.homogeneous(spec).power;
  const ForwardSolve fs = ctx.solve_neumann_power(spec, &inclusion);
  return make_record(ctx.mesh(), inclusion, W0, fs.power, "neumann", opts);
}

SolveRecord run_pair_cem(ForwardContext& ctx, const ElectrodeLayout& layout,
                         const InclusionMask& inclusion, const RunPairOptions& opts) {
  if (inclusion.elements.empty()) throw ConfigError("run_pair needs a nonempty inclusion");
  const double W0 = ctx.homogeneous_cem(layout).power;
  const ForwardSolve fs = ctx.solve_cem_power(layout, &inclusion);
  return make_record(ctx.mesh(), inclusion, W0, fs.power, "cem", opts);
}

namespace {

void locate(const StructuredMesh& mesh, const std::array<double, 3>& x, MultiIndex& e,
            std::array<double, 3>& xi) {
  e = {0, 0, 0};
  xi = {0.0, 0.0, 0.0};
  for (int a = 0; a < mesh.dim; ++a) {
    int idx = static_cast<int>(std::floor(x[a] / mesh.h));
    idx = std::clamp(idx, 0, mesh.n_e - 1);
    e[a] = idx;
    xi[a] = x[a] / mesh.h - (idx + 0.5);
  }
}

}  // namespace

double field_value(const StructuredMesh& mesh, const std::vector<double>& w,
                   const std::array<double, 3>& x) {
  MultiIndex e;
  std::array<double, 3> xi;
  locate(mesh, x, e, xi);
  const BasisEval basis = eval_tensor_basis(mesh, e, xi);
  double u = 0.0;
  int loc = 0;
  const int nz = mesh.dim == 3 ? 3 : 1;
  for (int c = 0; c < nz; ++c)
    for (int b = 0; b < 3; ++b)
      for (int a = 0; a < 3; ++a, ++loc) u += basis.value[loc] * w[mesh.element_param(e, {a, b, c})];
  return u;
}

std::array<double, 3> field_gradient(const StructuredMesh& mesh, const std::vector<double>& w,
                                     const std::array<double, 3>& x) {
  MultiIndex e;
  std::array<double, 3> xi;
  locate(mesh, x, e, xi);
  const BasisEval basis = eval_tensor_basis(mesh, e, xi);
  std::array<double, 3> g{0.0, 0.0, 0.0};
  int loc = 0;
  const int nz = mesh.dim == 3 ? 3 : 1;
  for (int c = 0; c < nz; ++c)
    for (int b = 0; b < 3; ++b)
      for (int a = 0; a < 3; ++a, ++loc) {
        const double wv = w[mesh.element_param(e, {a, b, c})];
        for (int ax = 0; ax < mesh.dim; ++ax) g[ax] += basis.grad[ax][loc] * wv;
      }
  return g;
}

std::vector<std::array<double, 3>> critical_points(ForwardContext& ctx, const NeumannSpec& spec) {
  if (spec.kind != NeumannKind::Cosine || spec.n < 1)
    throw ConfigError("critical points exist only for oscillating data (cosine, n >= 1)");
  const StructuredMesh& mesh = ctx.mesh();
  const ForwardSolve& hom = ctx.homogeneous(spec);

  const int n = mesh.n_e;
  std::vector<double> mag(mesh.element_count());
  for (std::size_t id = 0; id < mesh.element_count(); ++id) {
    const MultiIndex e = mesh.element_at(id);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < mesh.dim; ++a) x[a] = (e[a] + 0.5) * mesh.h;
    const std::array<double, 3> g = field_gradient(mesh, hom.w, x);
    double m2 = 0.0;
    for (int a = 0; a < mesh.dim; ++a) m2 += g[a] * g[a];
    mag[id] = std::sqrt(m2);
  }

  std::vector<std::array<double, 3>> minima;
  for (std::size_t id = 0; id < mesh.element_count(); ++id) {
    const MultiIndex e = mesh.element_at(id);
    bool le_all = true, lt_some = false;
    for (int a = 0; a < mesh.dim && le_all; ++a)
      for (int s = -1; s <= 1; s += 2) {
        MultiIndex nb = e;
        nb[a] += s;
        if (!mesh.element_in_grid(nb)) continue;
        const double v = mag[mesh.element_id(nb)];
        if (mag[id] > v) {
          le_all = false;
          break;
        }
        if (mag[id] < v) lt_some = true;
      }
    if (le_all && lt_some) {
      std::array<double, 3> x{0.0, 0.0, 0.0};
      for (int a = 0; a < mesh.dim; ++a) x[a] = (e[a] + 0.5) * mesh.h;
      minima.push_back(x);
    }
  }
  return minima;
}

std::vector<std::array<double, 2>> analytic_critical_lines(int n, double side_l) {
  if (n < 1) throw ConfigError("critical lines exist only for n >= 1");
  std::vector<std::array<double, 2>> lines;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      lines.push_back({side_l / n * (0.5 + i), side_l / n * (0.5 + j)});
  return lines;
}

}  // namespace eit
