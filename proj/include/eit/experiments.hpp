#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eit/excitation.hpp"
#include "eit/forward.hpp"
#include "eit/mesh.hpp"
#include "eit/records.hpp"

namespace eit {

enum class GeneratorKind { BlockSweep, ConnectedExhaustive, ConnectedSampled };

// Batch description: mesh, excitation, contrast list and inclusion
// generator settings.  A fixed seed makes the produced record list (and
// its CSV bytes) reproducible.
struct SweepPlan {
  std::string test_id = "sweep";
  int dim = 3;
  int n_e = 7;
  double side_l = 1.0;
  std::optional<NeumannSpec> neumann;
  // CEM: electrode rectangles (face, lo, hi), one surface impedance, currents
  struct CemPlan {
    struct Rect {
      int face = 0;
      std::array<int, 2> lo{0, 0};
      std::array<int, 2> hi{0, 0};
    };
    std::vector<Rect> electrodes;
    double z = 0.0;
    std::vector<double> current;
  };
  std::optional<CemPlan> cem;

  std::vector<double> k_values;
  GeneratorKind generator = GeneratorKind::BlockSweep;
  int size_min = 1;  // block side or connected element count n_i
  int size_max = 1;
  int d0_min = 1;
  int d03_min = 0;    // 0 = no per-face constraint
  int d03_face = -1;  // -1 = high face of the last axis
  double volume_cap = 0.06;
  bool centered_only = false;      // blocks: only the centered position per side
  bool octant_restricted = false;  // connected: seed element inside one octant
  std::size_t sample_count = 64;   // connected-sampled: shapes per size
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = hardware concurrency
};

/// All axis-aligned side^dim blocks with inclusion_d0 >= d0_min,
/// deterministic lexicographic order.
std::vector<std::vector<std::size_t>> gen_blocks(const StructuredMesh& mesh, int side,
                                                 int d0_min, bool centered_only = false);

/// Face-connected element sets of size n_i honoring d0_min.  Exhaustive mode
/// enumerates each set exactly once; sampled mode grows random shapes from a
/// seeded RNG and deduplicates by exact element set.  The growth samples a
/// uniformly random frontier cell at each step, which is NOT a uniform
/// distribution over connected shapes: elongated shapes are under-weighted
/// relative to compact ones.  The optional octant restriction constrains the
/// seed (minimal) element.
std::vector<std::vector<std::size_t>> gen_connected(const StructuredMesh& mesh, int n_i,
                                                    int d0_min, bool exhaustive,
                                                    std::uint64_t seed, std::size_t sample_count,
                                                    bool octant_restricted = false);

/// Materialize the plan's inclusion list (generator + d03/volume filters).
std::vector<std::vector<std::size_t>> plan_inclusions(const SweepPlan& plan,
                                                      const StructuredMesh& mesh);

ElectrodeLayout plan_layout(const SweepPlan& plan, const StructuredMesh& mesh);

/// One record per (k, inclusion); homogeneous solves cached; solve failures
/// recorded with status "solver_error" and skipped unless they exceed 1% of
/// the batch.  Deterministic output order for a fixed plan.
std::vector<SolveRecord> run_sweep(const SweepPlan& plan);

}  // namespace eit
