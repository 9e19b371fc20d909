#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "eit/errors.hpp"
#include "eit/surface_spectrum.hpp"

using namespace eit;

TEST_CASE("dense symmetric eigensolver on a known matrix") {
  // [[2,1],[1,2]] has eigenvalues 1, 3
  const SymmetricEigen e = symmetric_eigen({2.0, 1.0, 1.0, 2.0}, 2);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("dense symmetric eigensolver properties on random matrices") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t n : {5, 23, 80}) {
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a[i * n + j] = a[j * n + i] = dist(rng);
    const std::vector<double> a0 = a;
    const SymmetricEigen e = symmetric_eigen(a, n);
    double norm = 0.0;
    for (double v : a0) norm = std::max(norm, std::abs(v));
    for (std::size_t v = 0; v < n; ++v) {
      // residual ||A x - lambda x||
      for (std::size_t i = 0; i < n; ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < n; ++j) ax += a0[i * n + j] * e.vectors[j * n + v];
        CHECK(std::abs(ax - e.values[v] * e.vectors[i * n + v]) <= 1e-9 * n * norm);
      }
      // orthonormality
      for (std::size_t u = 0; u <= v; ++u) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += e.vectors[i * n + v] * e.vectors[i * n + u];
        CHECK(std::abs(d - (u == v ? 1.0 : 0.0)) <= 1e-10);
      }
      if (v > 0) CHECK(e.values[v] >= e.values[v - 1]);
    }
  }
}

TEST_CASE("boundary spectrum basics") {
  for (int dim : {2, 3}) {
    const StructuredMesh mesh = build_mesh(dim, 6, 1.0);
    const BoundarySpectrum spec(mesh);
    const std::size_t expected =
        dim == 2 ? 4u * 6u : 6u * 36u + 2u;  // closed surface node counts
    CHECK(spec.node_count() == expected);
    // Laplace-Beltrami on a closed surface: one zero eigenvalue, rest positive
    CHECK(spec.eigenvalues().front() <= 1e-8);
    CHECK(spec.eigenvalues()[1] > 1e-6);
    // M-orthonormality of the generalized eigenvectors
    for (std::size_t v : {std::size_t{0}, std::size_t{3}}) {
      const std::vector<double> x = spec.eigenvector(v);
      const std::vector<double> Mx = spec.mass_apply(x);
      double d = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d += x[i] * Mx[i];
      CHECK(d == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("single eigenmode has frequency (1+lambda)^(1/4)") {
  const StructuredMesh mesh = build_mesh(2, 8, 1.0);
  const BoundarySpectrum spec(mesh);
  for (std::size_t v : {std::size_t{2}, std::size_t{7}, std::size_t{15}}) {
    // the load of the density phi = v is g = M v
    const std::vector<double> g = spec.mass_apply(spec.eigenvector(v));
    const double F = spec.frequency_of_load(g);
    CHECK(F == doctest::Approx(std::pow(1.0 + spec.eigenvalues()[v], 0.25)).epsilon(1e-9));
  }
}

TEST_CASE("frequency is scale invariant and rejects zero data") {
  const StructuredMesh mesh = build_mesh(3, 6, 1.0);
  const BoundarySpectrum spec(mesh);
  const double f1 = spec.frequency(cosine_spec(1));
  const double f2 = spec.frequency(cosine_spec(1, 41.0));
  CHECK(std::abs(f1 - f2) <= 1e-12 * f1);
  CHECK(spec.frequency_of_load(spec.load(cosine_spec(1, -3.0))) ==
        doctest::Approx(f1).epsilon(1e-12));
  CHECK_THROWS_AS(spec.frequency_of_load(std::vector<double>(spec.node_count(), 0.0)),
                  ConfigError);
}

TEST_CASE("frequency grows with the oscillation order") {
  const StructuredMesh mesh = build_mesh(3, 12, 1.0);
  const BoundarySpectrum spec(mesh);
  const double f0 = spec.frequency(cosine_spec(0));
  const double f1 = spec.frequency(cosine_spec(1));
  const double f2 = spec.frequency(cosine_spec(2));
  CHECK(f0 >= 1.0 - 1e-9);
  CHECK(f0 < f1);
  CHECK(f1 < f2);
}
