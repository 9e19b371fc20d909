#pragma once

#include <array>
#include <string>
#include <vector>

#include "eit/mesh.hpp"

namespace eit {

// Applied current density phi on the domain boundary for the standard
// Neumann model.  All kinds satisfy the compatibility condition
// \oint phi = 0 by construction.
//
//  - UniformOpposite (T1): +amplitude on the high face of `axis`,
//    -amplitude on the low face.
//  - TwoPatch (T2): rectangular patches of constant current on faces; patch
//    amplitudes must balance.
//  - Cosine: amplitude * cos(n pi x / l) on both faces normal to `axis`
//    (even profile), or with opposite signs on the two faces when `odd` is
//    set.  n = 0 degenerates to T1 and is always odd.
enum class NeumannKind { UniformOpposite, TwoPatch, Cosine };

struct PatchSpec {
  int face = 0;                 // face id: axis*2 + side
  std::array<int, 2> lo{0, 0};  // element index range on the face, inclusive
  std::array<int, 2> hi{0, 0};
  double amplitude = 0.0;
};

struct NeumannSpec {
  NeumannKind kind = NeumannKind::UniformOpposite;
  int axis = -1;  // default: last axis of the mesh
  double amplitude = 1.0;
  int n = 0;        // cosine order
  bool odd = false; // cosine z-symmetry; n = 0 is forced odd
  std::vector<PatchSpec> patches;

  /// Cache/CSV key describing the excitation.
  std::string descriptor() const;
};

NeumannSpec uniform_spec(double amplitude = 1.0, int axis = -1);
NeumannSpec cosine_spec(int n, double amplitude = 1.0, bool odd = false, int axis = -1);
NeumannSpec two_patch_spec(std::vector<PatchSpec> patches);
/// Default T2 geometry: balanced patches centered on the two faces normal
/// to `axis`, ceil(n_e/3) elements wide.
NeumannSpec default_two_patch(const StructuredMesh& mesh, int axis = -1);

/// Resolve the flux axis (handles axis = -1 default).
int resolve_axis(const NeumannSpec& spec, const StructuredMesh& mesh);

/// Point value of phi on a boundary face at physical position x.
double neumann_value(const NeumannSpec& spec, const StructuredMesh& mesh, const BoundaryFace& face,
                     const std::array<double, 3>& x);

/// Validate spec against mesh (patch ranges, cosine order); throws ConfigError.
void validate_spec(const NeumannSpec& spec, const StructuredMesh& mesh);

// Electrode layout for the complete electrode model: each electrode is a
// set of whole boundary faces with a surface impedance z_l; the current
// pattern I must sum to zero.
struct Electrode {
  std::vector<BoundaryFace> faces;
  double z = 0.0;
};

struct ElectrodeLayout {
  std::vector<Electrode> electrodes;
  std::vector<double> current;

  std::string descriptor() const;
  double area(const StructuredMesh& mesh, std::size_t l) const;
};

/// Rectangle of face elements on cube face `face`, inclusive index ranges.
std::vector<BoundaryFace> face_rectangle(const StructuredMesh& mesh, int face,
                                         std::array<int, 2> lo, std::array<int, 2> hi);

/// Validate: nonempty, disjoint with at least one element of gap on shared
/// faces, z > 0, current pattern balanced.  Throws ConfigError.
void validate_layout(const ElectrodeLayout& layout, const StructuredMesh& mesh);

/// Two full-face electrodes on opposite faces of `axis` with impedance z
/// and current pattern (amplitude, -amplitude).
ElectrodeLayout full_face_layout(const StructuredMesh& mesh, double z, double amplitude = 1.0,
                                 int axis = 0);

}  // namespace eit
