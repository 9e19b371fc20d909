#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "eit/assembly.hpp"
#include "eit/excitation.hpp"
#include "eit/linsolve.hpp"
#include "eit/records.hpp"

namespace eit {

struct ForwardSolve {
  double power = 0.0;   // W = oint u phi  (Neumann) or sum I_l U^l (CEM)
  double energy = 0.0;  // independent route: int sigma |grad u|^2 (+ contact terms)
  std::vector<double> w;
  std::vector<double> U;  // CEM voltages, empty for the standard model
  SolveStats stats;
};

// Per-mesh forward-solve state: cached element matrices, the homogeneous
// stiffness matrix, and memoized inclusion-free solves keyed by excitation.
// Immutable after warmup; safe to share across solver threads.
class ForwardContext {
 public:
  explicit ForwardContext(const StructuredMesh& mesh, int quad_points = 3);

  const StructuredMesh& mesh() const { return mesh_; }
  const ElementMatrixCache& cache() const { return cache_; }
  const BandedSymmetricMatrix& homogeneous_matrix() const { return K_hom_; }

  /// Homogeneous forward solve (memoized per excitation descriptor).
  const ForwardSolve& homogeneous(const NeumannSpec& spec);
  const ForwardSolve& homogeneous_cem(const ElectrodeLayout& layout);

  /// Power W with the given inclusion (nullptr = homogeneous, uncached).
  ForwardSolve solve_neumann_power(const NeumannSpec& spec, const InclusionMask* inclusion);
  ForwardSolve solve_cem_power(const ElectrodeLayout& layout, const InclusionMask* inclusion);

 private:
  StructuredMesh mesh_;
  ElementMatrixCache cache_;
  BandedSymmetricMatrix K_hom_;
  std::map<std::string, std::shared_ptr<ForwardSolve>> memo_;
  std::mutex memo_mutex_;
};

struct RunPairOptions {
  std::string test_id = "adhoc";
  std::uint64_t seed = 0;
  int d03_face = -1;  // face used for the d03 column; -1 = high face of last axis
};

/// Paired solve producing the record consumed by the bounds analysis.
/// sign law: k > 1 gives W < W0, k < 1 gives W > W0.
SolveRecord run_pair(ForwardContext& ctx, const NeumannSpec& spec, const InclusionMask& inclusion,
                     const RunPairOptions& opts = {});
SolveRecord run_pair_cem(ForwardContext& ctx, const ElectrodeLayout& layout,
                         const InclusionMask& inclusion, const RunPairOptions& opts = {});

/// Evaluate the interpolated field / gradient at a physical point.
double field_value(const StructuredMesh& mesh, const std::vector<double>& w,
                   const std::array<double, 3>& x);
std::array<double, 3> field_gradient(const StructuredMesh& mesh, const std::vector<double>& w,
                                     const std::array<double, 3>& x);

/// Local minima of |grad u_0| on the uniform element-center probe grid for
/// an oscillating (cosine, n >= 1) excitation.
std::vector<std::array<double, 3>> critical_points(ForwardContext& ctx, const NeumannSpec& spec);

/// Critical lines (x, z) of the oscillating problems as printed:
/// x = (l/n)(1/2 + i), z = (l/n)(1/2 + j), i,j = 0..n-1.
std::vector<std::array<double, 2>> analytic_critical_lines(int n, double side_l);

}  // namespace eit
