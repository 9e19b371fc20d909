#include "eit/linsolve.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "eit/errors.hpp"

namespace eit {

namespace {

constexpr double kResidualTol = 1e-10;

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void recenter(std::vector<double>& w) {
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / w.size();
  for (double& x : w) x -= mean;
}

}  // namespace

FlopModel flop_model(std::uint64_t m, std::uint64_t b) {
  return {m * (b - 1), m * b * (b - 1), m * b};
}

NeumannSolution solve_neumann(BandedSymmetricMatrix K, const std::vector<double>& p,
                              const ApplyFn& apply) {
  const std::size_t m = K.order();
  if (p.size() != m) throw std::invalid_argument("load size differs from system order");

  const double pnorm = norm2(p);
  const double psum = std::accumulate(p.begin(), p.end(), 0.0);
  if (pnorm > 0.0 && std::abs(psum) > 1e-10 * pnorm)
    throw SolverError("load is not orthogonal to the constant nullspace", std::abs(psum) / pnorm);

  NeumannSolution sol;
  sol.stats.order = m;
  sol.stats.half_bandwidth = K.half_bandwidth();
  sol.stats.model = flop_model(m, K.half_bandwidth());

  ApplyFn residual_apply = apply;
  BandedSymmetricMatrix pristine;
  if (!residual_apply) {
    pristine = K;
    residual_apply = [&pristine](const std::vector<double>& x) { return pristine.multiply(x); };
  }

  const auto t0 = std::chrono::steady_clock::now();
  K.pin(0);
  if (!K.cholesky_in_place())
    throw SolverError("band Cholesky hit a nonpositive pivot");
  sol.w = p;
  sol.w[0] = 0.0;
  K.solve_in_place(sol.w);
  recenter(sol.w);
  sol.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<double> r = residual_apply(sol.w);
  for (std::size_t i = 0; i < m; ++i) r[i] -= p[i];
  sol.stats.residual = pnorm > 0.0 ? norm2(r) / pnorm : norm2(r);
  if (sol.stats.residual > kResidualTol)
    throw SolverError("Neumann solve residual above tolerance", sol.stats.residual);
  return sol;
}

CemSolution solve_cem(const CemSystem& sys, const std::vector<double>& current) {
  const std::size_t L = sys.L;
  const std::size_t m = sys.K_ww.order();
  if (current.size() != L) throw std::invalid_argument("current pattern size differs from L");

  double isum = 0.0, iscale = 0.0;
  for (double i : current) {
    isum += i;
    iscale = std::max(iscale, std::abs(i));
  }
  if (std::abs(isum) > 1e-12 * std::max(1.0, iscale))
    throw SolverError("current pattern violates charge conservation");

  CemSolution sol;
  sol.stats.order = m + L;
  sol.stats.half_bandwidth = sys.K_ww.half_bandwidth();
  sol.stats.model = flop_model(m, sys.K_ww.half_bandwidth());

  const auto t0 = std::chrono::steady_clock::now();
  BandedSymmetricMatrix F = sys.K_ww;  // K_ww is SPD, no pinning needed
  if (!F.cholesky_in_place()) throw SolverError("CEM bulk matrix is not positive definite");

  // X = K_ww^{-1} K_wU, column by column
  std::vector<std::vector<double>> X(L);
  for (std::size_t l = 0; l < L; ++l) {
    X[l] = sys.coupling[l];
    F.solve_in_place(X[l]);
  }

  // Schur complement S = K_UU - K_wU^T X; singular with the constant
  // nullspace, solved with U_{L-1} pinned to zero.
  std::vector<double> S(L * L, 0.0);
  for (std::size_t a = 0; a < L; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += sys.coupling[a][i] * X[b][i];
      S[a * L + b] = S[b * L + a] = (a == b ? sys.kuu_diag[a] : 0.0) - dot;
    }

  // dense Cholesky of the leading (L-1) block of S, U_{L-1} pinned
  std::vector<double> A(S);
  if (L > 1) {
    const std::size_t n = L - 1;
    for (std::size_t j = 0; j < n; ++j) {
      double d = A[j * L + j];
      for (std::size_t t = 0; t < j; ++t) d -= A[j * L + t] * A[j * L + t];
      if (!(d > 0.0)) throw SolverError("CEM Schur complement is not positive definite");
      d = std::sqrt(d);
      A[j * L + j] = d;
      for (std::size_t i = j + 1; i < n; ++i) {
        double s = A[i * L + j];
        for (std::size_t t = 0; t < j; ++t) s -= A[i * L + t] * A[j * L + t];
        A[i * L + j] = s / d;
      }
    }
  }

  // block solve for an arbitrary right-hand side (rw, rU):
  //   S U = rU + K_wU^T F^{-1} rw,   w = F^{-1} (rw + K_wU U)
  auto block_solve = [&](const std::vector<double>& rw, const std::vector<double>& rU,
                         std::vector<double>& w, std::vector<double>& U) {
    std::vector<double> y = rw;
    F.solve_in_place(y);
    std::vector<double> g(L, 0.0);
    double gsum = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += sys.coupling[l][i] * y[i];
      g[l] = rU[l] + dot;
      gsum += g[l];
    }
    // project onto the compatible range; S is singular with the constant
    // nullspace and the pinned solve drops one equation
    for (double& v : g) v -= gsum / static_cast<double>(L);
    U.assign(L, 0.0);
    const std::size_t n = L - 1;
    for (std::size_t i = 0; i < n; ++i) {
      double s = g[i];
      for (std::size_t t = 0; t < i; ++t) s -= A[i * L + t] * U[t];
      U[i] = s / A[i * L + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = U[ii];
      for (std::size_t t = ii + 1; t < n; ++t) s -= A[t * L + ii] * U[t];
      U[ii] = s / A[ii * L + ii];
    }
    w.assign(m, 0.0);
    for (std::size_t l = 0; l < L; ++l)
      if (U[l] != 0.0)
        for (std::size_t i = 0; i < m; ++i) w[i] += sys.coupling[l][i] * U[l];
    for (std::size_t i = 0; i < m; ++i) w[i] += rw[i];
    F.solve_in_place(w);
  };

  // residual of the full block system against (rw, rU) = (0, I)
  auto block_residual = [&](const std::vector<double>& w, const std::vector<double>& U,
                            std::vector<double>& rw, std::vector<double>& rU) {
    rw = sys.K_ww.multiply(w);
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t i = 0; i < m; ++i) rw[i] -= sys.coupling[l][i] * U[l];
    for (double& v : rw) v = -v;
    rU.assign(L, 0.0);
    for (std::size_t l = 0; l < L; ++l) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += sys.coupling[l][i] * w[i];
      rU[l] = current[l] - (-dot + sys.kuu_diag[l] * U[l]);
    }
  };

  // gauge: zero-mean potential parameters, same shift on the voltages;
  // keeping ||w|| small also keeps the refinement residuals accurate when
  // the solution floats at the z scale
  auto recenter = [&] {
    const double mean = std::accumulate(sol.w.begin(), sol.w.end(), 0.0) / m;
    for (double& x : sol.w) x -= mean;
    for (double& u : sol.U) u -= mean;
  };

  block_solve(std::vector<double>(m, 0.0), current, sol.w, sol.U);
  recenter();

  // iterative refinement: the Schur entries cancel to O(1/z), so a couple
  // of passes recover the digits lost for large surface impedances
  const double inorm = std::max(norm2(current), 1e-300);
  std::vector<double> rw, rU, dw, dU;
  double res = 0.0;
  for (int pass = 0; pass < 4; ++pass) {
    block_residual(sol.w, sol.U, rw, rU);
    double rr = 0.0;
    for (double v : rw) rr += v * v;
    for (double v : rU) rr += v * v;
    res = std::sqrt(rr) / inorm;
    if (res <= 1e-13 || pass == 3) break;
    block_solve(rw, rU, dw, dU);
    for (std::size_t i = 0; i < m; ++i) sol.w[i] += dw[i];
    for (std::size_t l = 0; l < L; ++l) sol.U[l] += dU[l];
    recenter();
  }
  sol.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  sol.stats.residual = res;
  if (sol.stats.residual > kResidualTol)
    throw SolverError("CEM solve residual above tolerance", sol.stats.residual);
  return sol;
}

}  // namespace eit
