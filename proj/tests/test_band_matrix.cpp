#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "eit/band_matrix.hpp"

using namespace eit;

namespace {

// dense reference solver used as the oracle
struct Dense {
  std::size_t n;
  std::vector<double> a;
  explicit Dense(std::size_t n) : n(n), a(n * n, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double get(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  std::vector<double> solve(std::vector<double> b) const {
    std::vector<double> lu = a;
    std::vector<std::size_t> piv(n);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(lu[r * n + c]) > std::abs(lu[p * n + c])) p = r;
      piv[c] = p;
      if (p != c) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu[c * n + j], lu[p * n + j]);
        std::swap(b[c], b[p]);
      }
      for (std::size_t r = c + 1; r < n; ++r) {
        const double f = lu[r * n + c] / lu[c * n + c];
        lu[r * n + c] = f;
        for (std::size_t j = c + 1; j < n; ++j) lu[r * n + j] -= f * lu[c * n + j];
      }
    }
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0; c < r; ++c) b[r] -= lu[r * n + c] * b[c];
    for (std::size_t rr = n; rr-- > 0;) {
      for (std::size_t c = rr + 1; c < n; ++c) b[rr] -= lu[rr * n + c] * b[c];
      b[rr] /= lu[rr * n + rr];
    }
    return b;
  }
};

BandedSymmetricMatrix random_spd_band(std::size_t m, std::size_t b, std::mt19937_64& rng,
                                      Dense* dense_out) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  BandedSymmetricMatrix K(m, b);
  Dense D(m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = j; i < std::min(m, j + b); ++i) {
      const double v = dist(rng);
      K.add(i, j, v);
      D.at(i, j) += v;
      if (i != j) D.at(j, i) += v;
    }
  // diagonal dominance makes the matrix comfortably SPD
  const double shift = 2.0 * static_cast<double>(b);
  for (std::size_t i = 0; i < m; ++i) {
    K.add(i, i, shift);
    D.at(i, i) += shift;
  }
  if (dense_out) *dense_out = D;
  return K;
}

}  // namespace

TEST_CASE("banded Cholesky matches a dense reference across bandwidths") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (const auto [m, b] : {std::pair<std::size_t, std::size_t>{1, 1},
                            {7, 1},
                            {10, 2},
                            {20, 5},
                            {50, 17},  // narrow unblocked path
                            {120, 20},
                            {200, 37},  // blocked path with corner blocks
                            {200, 90},
                            {150, 150}}) {
    Dense D(m);
    BandedSymmetricMatrix K = random_spd_band(m, b, rng, &D);
    std::vector<double> rhs(m);
    for (double& x : rhs) x = dist(rng);

    BandedSymmetricMatrix F = K;
    REQUIRE(F.cholesky_in_place());
    std::vector<double> x = rhs;
    F.solve_in_place(x);
    const std::vector<double> ref = D.solve(rhs);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      num += (x[i] - ref[i]) * (x[i] - ref[i]);
      den += ref[i] * ref[i];
    }
    CHECK(std::sqrt(num) <= 1e-9 * std::sqrt(std::max(den, 1e-30)));

    // multiply agrees with the dense product
    std::vector<double> y = K.multiply(rhs);
    for (std::size_t i = 0; i < m; ++i) {
      double yi = 0.0;
      for (std::size_t j = 0; j < m; ++j) yi += D.get(i, j) * rhs[j];
      CHECK(std::abs(y[i] - yi) <= 1e-11 * (std::abs(yi) + 1.0));
    }
  }
}

TEST_CASE("factorization is deterministic and detects indefiniteness") {
  std::mt19937_64 rng(3);
  BandedSymmetricMatrix K = random_spd_band(80, 19, rng, nullptr);
  BandedSymmetricMatrix F1 = K, F2 = K;
  REQUIRE(F1.cholesky_in_place());
  REQUIRE(F2.cholesky_in_place());
  CHECK(std::memcmp(F1.data().data(), F2.data().data(), F1.data().size() * sizeof(double)) == 0);

  BandedSymmetricMatrix neg(5, 2);
  for (std::size_t i = 0; i < 5; ++i) neg.add(i, i, -1.0);
  CHECK_FALSE(neg.cholesky_in_place());
}

TEST_CASE("pinning clears one row/column but keeps the diagonal") {
  std::mt19937_64 rng(9);
  BandedSymmetricMatrix K = random_spd_band(12, 4, rng, nullptr);
  const double diag = K.get(0, 0);
  K.pin(0);
  CHECK(K.get(0, 0) == diag);
  for (std::size_t i = 1; i < 12; ++i) {
    CHECK(K.get(i, 0) == 0.0);
    CHECK(K.get(0, i) == 0.0);
  }
  K.pin(5);
  CHECK(K.get(5, 4) == 0.0);
  CHECK(K.get(7, 5) == 0.0);
  CHECK(K.get(5, 5) != 0.0);
}

TEST_CASE("out-of-band access") {
  BandedSymmetricMatrix K(10, 3);
  K.add(4, 2, 1.5);
  CHECK(K.get(4, 2) == 1.5);
  CHECK(K.get(2, 4) == 1.5);
  CHECK(K.get(9, 0) == 0.0);
  CHECK_THROWS(K.add(9, 0, 1.0));
}
