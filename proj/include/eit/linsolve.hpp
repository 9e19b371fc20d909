#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "eit/assembly.hpp"
#include "eit/band_matrix.hpp"

namespace eit {

// Cost model of the direct band solver, with the printed formulas kept
// verbatim: decomposition m(b-1) multiplications and m b (b-1) additions,
// back substitution m b multiplications.
struct FlopModel {
  std::uint64_t decomposition_multiplications = 0;
  std::uint64_t decomposition_additions = 0;
  std::uint64_t solve_multiplications = 0;
};

FlopModel flop_model(std::uint64_t m, std::uint64_t b);

struct SolveStats {
  std::size_t order = 0;
  std::size_t half_bandwidth = 0;
  FlopModel model;
  double residual = 0.0;  // actual post-solve ||K w - p|| / ||p||
  double seconds = 0.0;
};

struct NeumannSolution {
  std::vector<double> w;  // zero-mean representative
  SolveStats stats;
};

using ApplyFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Solve the singular pure-Neumann system K w = p.  The constant nullspace
/// is handled by pinning parameter 0 during factorization and re-centering
/// the solution to zero mean.  `apply` evaluates the untouched K for the
/// residual check; when absent a band copy is kept internally.
/// Throws SolverError when the relative residual exceeds 1e-10.
NeumannSolution solve_neumann(BandedSymmetricMatrix K, const std::vector<double>& p,
                              const ApplyFn& apply = {});

struct CemSolution {
  std::vector<double> w;
  std::vector<double> U;
  SolveStats stats;
};

/// Solve the CEM block system by eliminating w: K_ww is factored once, the
/// small Schur complement on U (singular, constant nullspace) is pinned and
/// solved densely, and the final (w, U) pair is gauged to zero-mean w.
CemSolution solve_cem(const CemSystem& sys, const std::vector<double>& current);

}  // namespace eit
