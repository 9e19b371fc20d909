#include "eit/band_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace eit {

namespace {

// All kernels address operands through base[ld*col + row]; for band storage
// ld = b-1 and row/col are absolute indices, which keeps every in-band entry
// at a unique address and unit row stride within a column.

constexpr int kMR = 8;
constexpr int kNR = 4;

// C(mr x nr) -= A(mr x kk) * B(nr x kk)^T, fixed-size hot tile.
inline void micro_fixed(double* __restrict cp, std::size_t ldc, const double* __restrict ap,
                        std::size_t lda, const double* __restrict bp, std::size_t ldb, int kk) {
  double acc[kNR][kMR] = {};
  for (int t = 0; t < kk; ++t) {
    const double* __restrict a = ap + lda * t;
    const double* __restrict b = bp + ldb * t;
    for (int j = 0; j < kNR; ++j) {
      const double bj = b[j];
      for (int i = 0; i < kMR; ++i) acc[j][i] += a[i] * bj;
    }
  }
  for (int j = 0; j < kNR; ++j) {
    double* __restrict c = cp + ldc * j;
    for (int i = 0; i < kMR; ++i) c[i] -= acc[j][i];
  }
}

// Generic edge tile; when mask_lower, only entries with global row >= col
// are written (diagonal-crossing tiles of a symmetric update).
inline void micro_edge(double* cp, std::size_t ldc, const double* ap, std::size_t lda,
                       const double* bp, std::size_t ldb, int mr, int nr, int kk, bool mask_lower,
                       std::ptrdiff_t row_minus_col) {
  for (int j = 0; j < nr; ++j)
    for (int i = 0; i < mr; ++i) {
      if (mask_lower && row_minus_col + i - j < 0) continue;
      double s = 0.0;
      for (int t = 0; t < kk; ++t) s += ap[lda * t + i] * bp[ldb * t + j];
      cp[ldc * j + i] -= s;
    }
}

// C(nr_rows x nr_cols at (r0,c0)) -= A(rows at ar0) * B(cols at br0)^T over
// kk inner columns starting at k-index 0 of the passed pointers.  When
// `sym` the update is restricted to the lower triangle (r0/c0 give the
// global offsets used for the diagonal test).
void gemm_nt(double* cbase, std::size_t ldc, const double* abase, std::size_t lda,
             const double* bbase, std::size_t ldb, std::size_t rows, std::size_t cols, int kk,
             bool sym, std::ptrdiff_t row_minus_col) {
  for (std::size_t j = 0; j < cols; j += kNR) {
    const int nr = static_cast<int>(std::min<std::size_t>(kNR, cols - j));
    for (std::size_t i = 0; i < rows; i += kMR) {
      const int mr = static_cast<int>(std::min<std::size_t>(kMR, rows - i));
      const std::ptrdiff_t rc = row_minus_col + static_cast<std::ptrdiff_t>(i) -
                                static_cast<std::ptrdiff_t>(j);
      if (sym && rc + mr - 1 < 0) continue;  // tile entirely above the diagonal
      const bool crossing = sym && rc < nr - 1;
      double* c = cbase + ldc * j + i;
      const double* a = abase + i;
      const double* b = bbase + j;
      if (mr == kMR && nr == kNR && !crossing)
        micro_fixed(c, ldc, a, lda, b, ldb, kk);
      else
        micro_edge(c, ldc, a, lda, b, ldb, mr, nr, kk, crossing, rc);
    }
  }
}

// Unblocked Cholesky of the ib x ib diagonal block at (k,k) in band storage.
bool potf2_band(double* base, std::size_t q, std::size_t k, int ib) {
  for (int j = 0; j < ib; ++j) {
    double d = base[q * (k + j) + (k + j)];
    for (int t = 0; t < j; ++t) {
      const double l = base[q * (k + t) + (k + j)];
      d -= l * l;
    }
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    base[q * (k + j) + (k + j)] = d;
    const double inv = 1.0 / d;
    for (int i = j + 1; i < ib; ++i) {
      double s = base[q * (k + j) + (k + i)];
      for (int t = 0; t < j; ++t)
        s -= base[q * (k + t) + (k + i)] * base[q * (k + t) + (k + j)];
      base[q * (k + j) + (k + i)] = s * inv;
    }
  }
  return true;
}

// X <- X * L^{-T} for the lower-triangular ib x ib block L at (k,k);
// X is nrows x ib with X(:,c) at xbase + ldx*c.
void trsm_rlt(double* xbase, std::size_t ldx, const double* lbase, std::size_t ldl, std::size_t k,
              int ib, std::size_t nrows) {
  for (int c = 0; c < ib; ++c) {
    double* __restrict xc = xbase + ldx * c;
    for (int t = 0; t < c; ++t) {
      const double l = lbase[ldl * (k + t) + (k + c)];  // L(k+c, k+t)
      const double* __restrict xt = xbase + ldx * t;
      for (std::size_t r = 0; r < nrows; ++r) xc[r] -= l * xt[r];
    }
    const double inv = 1.0 / lbase[ldl * (k + c) + (k + c)];
    for (std::size_t r = 0; r < nrows; ++r) xc[r] *= inv;
  }
}

}  // namespace

BandedSymmetricMatrix::BandedSymmetricMatrix(std::size_t order, std::size_t half_bandwidth)
    : m_(order), b_(std::min(half_bandwidth, order)) {
  if (order == 0 || half_bandwidth == 0)
    throw std::invalid_argument("band matrix needs positive order and bandwidth");
  a_.assign(b_ * m_ + 1, 0.0);
}

double& BandedSymmetricMatrix::at(std::size_t i, std::size_t j) {
  return a_[(b_ - 1) * j + i];
}

double BandedSymmetricMatrix::get(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (i - j >= b_) return 0.0;
  return a_[(b_ - 1) * j + i];
}

void BandedSymmetricMatrix::add(std::size_t i, std::size_t j, double v) {
  if (i < j) std::swap(i, j);
  if (i - j >= b_) throw std::out_of_range("entry outside band");
  a_[(b_ - 1) * j + i] += v;
}

std::vector<double> BandedSymmetricMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(m_, 0.0);
  const std::size_t q = b_ - 1;
  for (std::size_t j = 0; j < m_; ++j) {
    const std::size_t hi = std::min(m_ - 1, j + q);
    const double xj = x[j];
    double diagless = 0.0;
    y[j] += a_[q * j + j] * xj;
    for (std::size_t i = j + 1; i <= hi; ++i) {
      const double v = a_[q * j + i];
      y[i] += v * xj;
      diagless += v * x[i];
    }
    y[j] += diagless;
  }
  return y;
}

void BandedSymmetricMatrix::pin(std::size_t idx) {
  const std::size_t q = b_ - 1;
  const std::size_t hi = std::min(m_ - 1, idx + q);
  for (std::size_t i = idx + 1; i <= hi; ++i) a_[q * idx + i] = 0.0;
  const std::size_t lo = idx > q ? idx - q : 0;
  for (std::size_t c = lo; c < idx; ++c) a_[q * c + idx] = 0.0;
}

bool BandedSymmetricMatrix::cholesky_in_place() {
  double* base = a_.data();
  const std::size_t q = b_ - 1;

  if (q == 0) {
    for (std::size_t j = 0; j < m_; ++j) {
      if (!(base[j] > 0.0)) return false;
      base[j] = std::sqrt(base[j]);
    }
    return true;
  }

  const std::size_t nb = std::min<std::size_t>(64, q);
  if (q < 16 || m_ <= nb) {
    // Narrow band: plain right-looking loop.
    for (std::size_t j = 0; j < m_; ++j) {
      double d = base[q * j + j];
      if (!(d > 0.0)) return false;
      d = std::sqrt(d);
      base[q * j + j] = d;
      const std::size_t hi = std::min(m_ - 1, j + q);
      const double inv = 1.0 / d;
      for (std::size_t i = j + 1; i <= hi; ++i) base[q * j + i] *= inv;
      for (std::size_t c = j + 1; c <= hi; ++c) {
        const double l = base[q * j + c];
        if (l == 0.0) continue;
        double* __restrict col = base + q * c;
        const double* __restrict lj = base + q * j;
        for (std::size_t i = c; i <= hi; ++i) col[i] -= l * lj[i];
      }
    }
    return true;
  }

  std::vector<double> work(nb * nb);
  for (std::size_t k = 0; k < m_; k += nb) {
    const int ib = static_cast<int>(std::min(nb, m_ - k));
    if (!potf2_band(base, q, k, ib)) return false;
    if (k + ib >= m_) break;

    const std::size_t i2 = std::min(q - ib, m_ - k - ib);       // full rows k+ib .. k+q-1
    const std::size_t i3 = (m_ > k + q) ? std::min<std::size_t>(ib, m_ - k - q) : 0;

    if (i2 > 0) {
      double* a21 = base + q * k + (k + ib);
      trsm_rlt(a21, q, base, q, k, ib, i2);
      // A22 -= A21 A21^T (lower triangle)
      gemm_nt(base + q * (k + ib) + (k + ib), q, a21, q, a21, q, i2, i2, ib, true, 0);
    }
    if (i3 > 0) {
      // A31 is the upper-triangular corner crossing the band edge: rows
      // k+q .. k+q+i3-1, cols k .. k+ib-1, entry (r,c) present iff r <= c.
      double* a31 = base + q * k + (k + q);
      for (int c = 0; c < ib; ++c)
        for (std::size_t r = 0; r < i3; ++r)
          work[nb * c + r] = (r <= static_cast<std::size_t>(c)) ? a31[q * c + r] : 0.0;
      trsm_rlt(work.data(), nb, base, q, k, ib, i3);
      if (i2 > 0) {
        // A32 -= W * A21^T
        gemm_nt(base + q * (k + ib) + (k + q), q, work.data(), nb, base + q * k + (k + ib), q,
                i3, i2, ib, false, 0);
      }
      // A33 -= W W^T (lower triangle)
      gemm_nt(base + q * (k + q) + (k + q), q, work.data(), nb, work.data(), nb, i3, i3, ib,
              true, 0);
      for (int c = 0; c < ib; ++c)
        for (std::size_t r = 0; r < i3 && r <= static_cast<std::size_t>(c); ++r)
          a31[q * c + r] = work[nb * c + r];
    }
  }
  return true;
}

void BandedSymmetricMatrix::solve_in_place(std::vector<double>& rhs) const {
  const double* base = a_.data();
  const std::size_t q = b_ - 1;
  // L y = rhs
  for (std::size_t j = 0; j < m_; ++j) {
    const double xj = rhs[j] / base[q * j + j];
    rhs[j] = xj;
    const std::size_t hi = std::min(m_ - 1, j + q);
    const double* __restrict col = base + q * j;
    for (std::size_t i = j + 1; i <= hi; ++i) rhs[i] -= col[i] * xj;
  }
  // L^T x = y
  for (std::size_t jj = m_; jj-- > 0;) {
    const std::size_t hi = std::min(m_ - 1, jj + q);
    const double* __restrict col = base + q * jj;
    double s = rhs[jj];
    for (std::size_t i = jj + 1; i <= hi; ++i) s -= col[i] * rhs[i];
    rhs[jj] = s / base[q * jj + jj];
  }
}

}  // namespace eit
