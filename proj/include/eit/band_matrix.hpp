#pragma once

#include <cstddef>
#include <vector>

namespace eit {

// Symmetric matrix in packed lower-band storage.  half_bandwidth b counts
// the diagonal, so entries (i,j) with 0 <= i-j <= b-1 are stored; column j
// occupies a contiguous run, entry (i,j) sits at data[(b-1)*j + i].
class BandedSymmetricMatrix {
 public:
  BandedSymmetricMatrix() = default;
  BandedSymmetricMatrix(std::size_t order, std::size_t half_bandwidth);

  std::size_t order() const { return m_; }
  std::size_t half_bandwidth() const { return b_; }

  double& at(std::size_t i, std::size_t j);          // requires j <= i < j + b
  double get(std::size_t i, std::size_t j) const;    // any (i,j); 0 outside band
  void add(std::size_t i, std::size_t j, double v);  // symmetric add, i/j in any order

  /// y = A x using the symmetric band.
  std::vector<double> multiply(const std::vector<double>& x) const;

  /// Zero the off-diagonal entries of one row/column, keeping the diagonal.
  /// Used to pin a parameter when the matrix has the constant nullspace.
  void pin(std::size_t idx);

  /// In-place lower Cholesky A = L L^T.  Returns false if a nonpositive
  /// pivot is met.  Blocked right-looking factorization in the style of
  /// LAPACK dpbtrf; falls back to an unblocked loop for narrow bands.
  bool cholesky_in_place();

  /// Solve L L^T x = rhs in place after cholesky_in_place().
  void solve_in_place(std::vector<double>& rhs) const;

  const std::vector<double>& data() const { return a_; }

 private:
  std::size_t m_ = 0;
  std::size_t b_ = 0;
  std::vector<double> a_;
};

}  // namespace eit
