#include "eit/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "eit/errors.hpp"

namespace eit {

std::string NeumannSpec::descriptor() const {
  std::ostringstream os;
  switch (kind) {
    case NeumannKind::UniformOpposite:
      os << "uniform:axis=" << axis << ":amp=" << amplitude;
      break;
    case NeumannKind::Cosine:
      os << "cos:n=" << n << ":axis=" << axis << ":amp=" << amplitude << (odd ? ":odd" : ":even");
      break;
    case NeumannKind::TwoPatch:
      os << "patch";
      for (const auto& p : patches)
        os << ":f" << p.face << "[" << p.lo[0] << "," << p.lo[1] << "-" << p.hi[0] << ","
           << p.hi[1] << "]x" << p.amplitude;
      break;
  }
  return os.str();
}

NeumannSpec uniform_spec(double amplitude, int axis) {
  NeumannSpec s;
  s.kind = NeumannKind::UniformOpposite;
  s.amplitude = amplitude;
  s.axis = axis;
  return s;
}

NeumannSpec cosine_spec(int n, double amplitude, bool odd, int axis) {
  NeumannSpec s;
  s.kind = NeumannKind::Cosine;
  s.n = n;
  s.amplitude = amplitude;
  s.odd = odd || n == 0;  // n = 0 needs opposite signs for compatibility
  s.axis = axis;
  return s;
}

NeumannSpec two_patch_spec(std::vector<PatchSpec> patches) {
  NeumannSpec s;
  s.kind = NeumannKind::TwoPatch;
  s.patches = std::move(patches);
  return s;
}

NeumannSpec default_two_patch(const StructuredMesh& mesh, int axis) {
  if (axis < 0) axis = mesh.dim - 1;
  const int w = (mesh.n_e + 2) / 3;  // ceil(n_e/3)
  const int lo = (mesh.n_e - w) / 2;
  const int hi = lo + w - 1;
  PatchSpec top, bottom;
  top.face = axis * 2 + 1;
  bottom.face = axis * 2;
  top.lo = bottom.lo = {lo, mesh.dim == 3 ? lo : 0};
  top.hi = bottom.hi = {hi, mesh.dim == 3 ? hi : 0};
  top.amplitude = 1.0;
  bottom.amplitude = -1.0;
  return two_patch_spec({top, bottom});
}

int resolve_axis(const NeumannSpec& spec, const StructuredMesh& mesh) {
  const int axis = spec.axis < 0 ? mesh.dim - 1 : spec.axis;
  if (axis >= mesh.dim) throw ConfigError("excitation axis outside mesh dimension");
  return axis;
}

double neumann_value(const NeumannSpec& spec, const StructuredMesh& mesh, const BoundaryFace& face,
                     const std::array<double, 3>& x) {
  switch (spec.kind) {
    case NeumannKind::UniformOpposite: {
      const int axis = resolve_axis(spec, mesh);
      if (face.axis != axis) return 0.0;
      return face.side == 1 ? spec.amplitude : -spec.amplitude;
    }
    case NeumannKind::Cosine: {
      const int axis = resolve_axis(spec, mesh);
      if (face.axis != axis) return 0.0;
      if (spec.n == 0) return face.side == 1 ? spec.amplitude : -spec.amplitude;
      const int tangent = axis == 0 ? 1 : 0;
      const double profile = std::cos(spec.n * M_PI * x[tangent] / mesh.side_l);
      if (spec.odd) return spec.amplitude * profile * (face.side == 1 ? 1.0 : -1.0);
      return spec.amplitude * profile;
    }
    case NeumannKind::TwoPatch: {
      const MultiIndex e = mesh.element_at(face.element);
      double v = 0.0;
      for (const auto& p : spec.patches) {
        if (p.face != face.axis * 2 + face.side) continue;
        int t = 0;
        bool inside = true;
        for (int a = 0; a < mesh.dim; ++a) {
          if (a == face.axis) continue;
          if (e[a] < p.lo[t] || e[a] > p.hi[t]) inside = false;
          ++t;
        }
        if (inside) v += p.amplitude;
      }
      return v;
    }
  }
  return 0.0;
}

void validate_spec(const NeumannSpec& spec, const StructuredMesh& mesh) {
  resolve_axis(spec, mesh);
  if (spec.kind == NeumannKind::Cosine) {
    if (spec.n < 0) throw ConfigError("cosine order n must be nonnegative");
    if (spec.n > 2)
      std::fprintf(stderr, "warning: cosine order n = %d is outside the studied range 0..2\n",
                   spec.n);
  }
  if (spec.kind == NeumannKind::TwoPatch) {
    if (spec.patches.size() < 2) throw ConfigError("two-patch excitation needs at least 2 patches");
    double net = 0.0, scale = 0.0;
    for (const auto& p : spec.patches) {
      if (p.face < 0 || p.face >= 2 * mesh.dim) throw ConfigError("patch face id out of range");
      const int tang = mesh.dim - 1;
      for (int t = 0; t < tang; ++t)
        if (p.lo[t] < 0 || p.hi[t] < p.lo[t] || p.hi[t] >= mesh.n_e)
          throw ConfigError("patch index range outside face grid");
      double area = 1.0;
      for (int t = 0; t < tang; ++t) area *= (p.hi[t] - p.lo[t] + 1) * mesh.h;
      net += p.amplitude * area;
      scale += std::abs(p.amplitude) * area;
    }
    if (scale == 0.0) throw ConfigError("two-patch excitation has zero amplitude");
    if (std::abs(net) > 1e-12 * scale)
      throw ConfigError("two-patch excitation violates charge balance");
  }
}

std::string ElectrodeLayout::descriptor() const {
  std::ostringstream os;
  os << "cem:L=" << electrodes.size();
  for (std::size_t l = 0; l < electrodes.size(); ++l)
    os << ":e" << l << "(n=" << electrodes[l].faces.size() << ",z=" << electrodes[l].z
       << ",I=" << current[l] << ")";
  return os.str();
}

double ElectrodeLayout::area(const StructuredMesh& mesh, std::size_t l) const {
  return static_cast<double>(electrodes[l].faces.size()) * std::pow(mesh.h, mesh.dim - 1);
}

std::vector<BoundaryFace> face_rectangle(const StructuredMesh& mesh, int face,
                                         std::array<int, 2> lo, std::array<int, 2> hi) {
  if (face < 0 || face >= 2 * mesh.dim) throw ConfigError("face id out of range");
  const int axis = face / 2;
  const int side = face % 2;
  std::vector<BoundaryFace> out;
  for (const BoundaryFace& f : boundary_faces(mesh)) {
    if (f.axis != axis || f.side != side) continue;
    const MultiIndex e = mesh.element_at(f.element);
    int t = 0;
    bool inside = true;
    for (int a = 0; a < mesh.dim; ++a) {
      if (a == axis) continue;
      if (e[a] < lo[t] || e[a] > hi[t]) inside = false;
      ++t;
    }
    if (inside) out.push_back(f);
  }
  if (out.empty()) throw ConfigError("electrode rectangle selects no faces");
  return out;
}

void validate_layout(const ElectrodeLayout& layout, const StructuredMesh& mesh) {
  const std::size_t L = layout.electrodes.size();
  if (L == 0) throw ConfigError("no electrodes: current cannot be injected");
  if (layout.current.size() != L) throw ConfigError("current pattern size differs from electrode count");
  double net = 0.0, scale = 0.0;
  for (double i : layout.current) {
    net += i;
    scale = std::max(scale, std::abs(i));
  }
  if (std::abs(net) > 1e-12 * std::max(1.0, scale))
    throw ConfigError("current pattern violates charge conservation");

  std::set<std::pair<int, std::size_t>> seen;  // (face id, face-grid id)
  for (const auto& el : layout.electrodes) {
    if (!(el.z > 0.0)) throw ConfigError("surface impedance must be positive");
    if (el.faces.empty()) throw ConfigError("electrode has no faces");
    for (const auto& f : el.faces)
      if (!seen.insert({f.axis * 2 + f.side, face_grid_id(mesh, f)}).second)
        throw ConfigError("electrodes overlap");
  }
  // delta_1 surrogate: electrodes sharing a cube face must be separated by
  // at least one element layer.
  for (std::size_t a = 0; a < L; ++a)
    for (std::size_t b = a + 1; b < L; ++b)
      for (const auto& fa : layout.electrodes[a].faces)
        for (const auto& fb : layout.electrodes[b].faces) {
          if (fa.axis != fb.axis || fa.side != fb.side) continue;
          const MultiIndex ea = mesh.element_at(fa.element);
          const MultiIndex eb = mesh.element_at(fb.element);
          int cheb = 0;
          for (int t = 0; t < mesh.dim; ++t)
            if (t != fa.axis) cheb = std::max(cheb, std::abs(ea[t] - eb[t]));
          if (cheb < 2) throw ConfigError("electrodes on one face must be at least one element apart");
        }
}

ElectrodeLayout full_face_layout(const StructuredMesh& mesh, double z, double amplitude,
                                 int axis) {
  const int n = mesh.n_e;
  const std::array<int, 2> lo{0, 0};
  const std::array<int, 2> hi{n - 1, mesh.dim == 3 ? n - 1 : 0};
  ElectrodeLayout layout;
  layout.electrodes.push_back({face_rectangle(mesh, axis * 2 + 1, lo, hi), z});
  layout.electrodes.push_back({face_rectangle(mesh, axis * 2, lo, hi), z});
  layout.current = {amplitude, -amplitude};
  return layout;
}

}  // namespace eit
