#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "eit/assembly.hpp"
#include "eit/errors.hpp"
#include "eit/surface_spectrum.hpp"

using namespace eit;

TEST_CASE("assembled system size matches the printed 20^3 figures") {
  const StructuredMesh m3 = build_mesh(3, 20, 1.0);
  CHECK(m3.param_count() == 10648);
  CHECK(system_half_bandwidth(m3) == 1015);
  const StructuredMesh m2 = build_mesh(2, 21, 1.0);
  CHECK(system_half_bandwidth(m2) == 49);  // 2*23 + 3
}

TEST_CASE("element stiffness: symmetry, constants in the nullspace") {
  for (int dim : {2, 3}) {
    const StructuredMesh mesh = build_mesh(dim, 5, 1.0);
    const QuadratureRule quad = make_quadrature(dim, 3);
    const int nloc = dim == 2 ? 9 : 27;
    for (const MultiIndex e :
         {MultiIndex{2, 2, 2}, MultiIndex{0, 2, 1}, MultiIndex{4, 0, 0}, MultiIndex{0, 0, 0}}) {
      MultiIndex el = e;
      if (dim == 2) el[2] = 0;
      const std::vector<double> K = element_stiffness(mesh, el, quad);
      double scale = 0.0;
      for (double v : K) scale = std::max(scale, std::abs(v));
      for (int a = 0; a < nloc; ++a) {
        double row = 0.0;
        for (int b = 0; b < nloc; ++b) {
          row += K[a * nloc + b];
          CHECK(std::abs(K[a * nloc + b] - K[b * nloc + a]) <= 1e-14 * scale);
        }
        CHECK(std::abs(row) <= 1e-14 * scale * nloc);
      }
    }
  }
}

TEST_CASE("element stiffness equals the tensor composition of 1-D factors") {
  // independent route: K = sum_axes h^(dim-2) * (x-factor) ox (y-factor) [ox z]
  const StructuredMesh mesh = build_mesh(2, 5, 1.3);
  const QuadratureRule quad = make_quadrature(2, 3);
  for (const MultiIndex e : {MultiIndex{2, 2, 0}, MultiIndex{0, 4, 0}}) {
    const std::vector<double> K = element_stiffness(mesh, e, quad);
    const auto vx = axis_variant(e[0], mesh.n_e);
    const auto vy = axis_variant(e[1], mesh.n_e);
    const auto Kx = axis_stiffness_1d(vx), Mx = axis_mass_1d(vx);
    const auto Ky = axis_stiffness_1d(vy), My = axis_mass_1d(vy);
    for (int a = 0; a < 9; ++a)
      for (int b = 0; b < 9; ++b) {
        const int ax = a % 3, ay = a / 3, bx = b % 3, by = b / 3;
        const double expected = Kx[ax][bx] * My[ay][by] + Mx[ax][bx] * Ky[ay][by];
        CHECK(K[a * 9 + b] == doctest::Approx(expected).epsilon(1e-13));
      }
  }
  const StructuredMesh m3 = build_mesh(3, 4, 2.0);
  const QuadratureRule q3 = make_quadrature(3, 3);
  const MultiIndex e{1, 0, 3};
  const std::vector<double> K = element_stiffness(m3, e, q3);
  const auto Kx = axis_stiffness_1d(axis_variant(1, 4)), MxF = axis_mass_1d(axis_variant(1, 4));
  const auto Ky = axis_stiffness_1d(axis_variant(0, 4)), MyF = axis_mass_1d(axis_variant(0, 4));
  const auto Kz = axis_stiffness_1d(axis_variant(3, 4)), MzF = axis_mass_1d(axis_variant(3, 4));
  for (int a = 0; a < 27; ++a)
    for (int b = 0; b < 27; ++b) {
      const int ax = a % 3, ay = (a / 3) % 3, az = a / 9;
      const int bx = b % 3, by = (b / 3) % 3, bz = b / 9;
      const double expected = m3.h * (Kx[ax][bx] * MyF[ay][by] * MzF[az][bz] +
                                      MxF[ax][bx] * Ky[ay][by] * MzF[az][bz] +
                                      MxF[ax][bx] * MyF[ay][by] * Kz[az][bz]);
      CHECK(K[a * 27 + b] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("global homogeneous matrix: symmetric PSD with exactly the constant nullspace") {
  for (int dim : {2, 3}) {
    const StructuredMesh mesh = build_mesh(dim, 3, 1.0);
    const ElementMatrixCache cache(mesh, make_quadrature(dim, 3));
    const BandedSymmetricMatrix K = assemble_homogeneous(mesh, cache);
    const std::size_t n = mesh.param_count();

    std::vector<double> ones(n, 1.0);
    const std::vector<double> K1 = K.multiply(ones);
    for (double v : K1) CHECK(std::abs(v) <= 1e-13);

    // rank check through the dense spectrum
    std::vector<double> dense(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dense[i * n + j] = K.get(i, j);
    const SymmetricEigen eig = symmetric_eigen(dense, n);
    int zero_count = 0;
    for (double l : eig.values) {
      CHECK(l >= -1e-11);
      if (std::abs(l) < 1e-10) ++zero_count;
    }
    CHECK(zero_count == 1);
  }
}

TEST_CASE("incremental inclusion update equals from-scratch assembly") {
  std::mt19937_64 rng(77);
  for (int dim : {2, 3}) {
    const StructuredMesh mesh = build_mesh(dim, 5, 1.0);
    const QuadratureRule quad = make_quadrature(dim, 3);
    const ElementMatrixCache cache(mesh, quad);
    const BandedSymmetricMatrix K_hom = assemble_homogeneous(mesh, cache);

    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::size_t> elems;
      const int count = 1 + static_cast<int>(rng() % 5);
      for (int i = 0; i < count; ++i) elems.push_back(rng() % mesh.element_count());
      const double k = trial % 2 == 0 ? 10.0 : 0.1;
      const InclusionMask inc = make_inclusion(mesh, elems, k);

      BandedSymmetricMatrix K_inc = K_hom;
      add_inclusion(K_inc, mesh, cache, inc);

      // from-scratch oracle with per-element conductivity
      std::vector<char> in_d(mesh.element_count(), 0);
      for (std::size_t id : inc.elements) in_d[id] = 1;
      BandedSymmetricMatrix K_ref(mesh.param_count(), system_half_bandwidth(mesh));
      const int nloc = cache.nloc();
      for (std::size_t id = 0; id < mesh.element_count(); ++id) {
        const MultiIndex e = mesh.element_at(id);
        const std::vector<double> Ke = element_stiffness(mesh, e, quad);
        const double sigma = in_d[id] ? k : 1.0;
        std::vector<std::size_t> g(nloc);
        int loc = 0;
        const int nz = dim == 3 ? 3 : 1;
        for (int c = 0; c < nz; ++c)
          for (int b = 0; b < 3; ++b)
            for (int a = 0; a < 3; ++a, ++loc) g[loc] = mesh.element_param(e, {a, b, c});
        for (int a = 0; a < nloc; ++a)
          for (int b = 0; b < nloc; ++b)
            if (g[a] >= g[b]) K_ref.add(g[a], g[b], sigma * Ke[a * nloc + b]);
      }
      double scale = 0.0;
      for (double v : K_ref.data()) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < K_ref.data().size(); ++i)
        CHECK(std::abs(K_inc.data()[i] - K_ref.data()[i]) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("empty or unit-contrast inclusions leave the matrix unchanged") {
  const StructuredMesh mesh = build_mesh(2, 5, 1.0);
  const ElementMatrixCache cache(mesh, make_quadrature(2, 3));
  const BandedSymmetricMatrix K_hom = assemble_homogeneous(mesh, cache);

  BandedSymmetricMatrix K = K_hom;
  const InclusionMask unit = make_inclusion(mesh, {6, 7}, 1.0);
  add_inclusion(K, mesh, cache, unit);
  CHECK(K.data() == K_hom.data());
}

TEST_CASE("Neumann loads vanish away from the excited faces") {
  const StructuredMesh mesh = build_mesh(2, 6, 1.0);
  const std::vector<double> p = assemble_neumann_load(mesh, uniform_spec());
  double total = 0.0;
  for (double v : p) total += v;
  CHECK(std::abs(total) <= 1e-14);
  // interior parameter rows receive nothing
  const int pp = mesh.params_per_axis();
  for (int j = 2; j < pp - 2; ++j)
    for (int i = 0; i < pp; ++i) CHECK(p[mesh.param_id({i, j, 0})] == 0.0);
  CHECK_THROWS_AS(assemble_neumann_load(mesh, two_patch_spec({PatchSpec{3, {1, 0}, {2, 0}, 1.0},
                                                              PatchSpec{2, {1, 0}, {2, 0}, -0.5}})),
                  ConfigError);
}

TEST_CASE("CEM block assembly on full opposite faces") {
  const StructuredMesh mesh = build_mesh(3, 5, 1.0);
  const ElementMatrixCache cache(mesh, make_quadrature(3, 3));
  const double z = 0.2;
  const ElectrodeLayout layout = full_face_layout(mesh, z);
  const CemSystem sys = assemble_cem(mesh, cache, nullptr, layout);

  CHECK(sys.L == 2);
  CHECK(sys.kuu_diag[0] == doctest::Approx(1.0 / z).epsilon(1e-14));  // |e_l| = 1 on a unit cube
  CHECK(sys.kuu_diag[1] == doctest::Approx(1.0 / z).epsilon(1e-14));
  // column sums of the couplings recover |e_l| / z
  for (std::size_t l = 0; l < 2; ++l) {
    double s = 0.0;
    for (double v : sys.coupling[l]) s += v;
    CHECK(s == doctest::Approx(1.0 / z).epsilon(1e-13));
  }
  // K_ww 1 = sum_l coupling_l: block row sums of the full matrix vanish,
  // i.e. the full block matrix keeps the constant nullspace
  std::vector<double> ones(mesh.param_count(), 1.0);
  const std::vector<double> K1 = sys.K_ww.multiply(ones);
  for (std::size_t i = 0; i < K1.size(); ++i)
    CHECK(std::abs(K1[i] - sys.coupling[0][i] - sys.coupling[1][i]) <= 1e-13);
}

TEST_CASE("CEM layout validation") {
  const StructuredMesh mesh = build_mesh(3, 5, 1.0);
  ElectrodeLayout empty;
  CHECK_THROWS_AS(validate_layout(empty, mesh), ConfigError);

  ElectrodeLayout bad_z = full_face_layout(mesh, 0.1);
  bad_z.electrodes[0].z = 0.0;
  CHECK_THROWS_AS(validate_layout(bad_z, mesh), ConfigError);

  ElectrodeLayout unbalanced = full_face_layout(mesh, 0.1);
  unbalanced.current = {1.0, -0.5};
  CHECK_THROWS_AS(validate_layout(unbalanced, mesh), ConfigError);

  // overlapping electrodes on one face
  ElectrodeLayout overlap;
  overlap.electrodes.push_back({face_rectangle(mesh, 5, {0, 0}, {2, 2}), 0.1});
  overlap.electrodes.push_back({face_rectangle(mesh, 5, {2, 2}, {4, 4}), 0.1});
  overlap.current = {1.0, -1.0};
  CHECK_THROWS_AS(validate_layout(overlap, mesh), ConfigError);

  // adjacent electrodes without the one-element gap
  ElectrodeLayout touching;
  touching.electrodes.push_back({face_rectangle(mesh, 5, {0, 0}, {1, 4}), 0.1});
  touching.electrodes.push_back({face_rectangle(mesh, 5, {2, 0}, {4, 4}), 0.1});
  touching.current = {1.0, -1.0};
  CHECK_THROWS_AS(validate_layout(touching, mesh), ConfigError);

  // one element of gap is fine
  ElectrodeLayout gap;
  gap.electrodes.push_back({face_rectangle(mesh, 5, {0, 0}, {1, 4}), 0.1});
  gap.electrodes.push_back({face_rectangle(mesh, 5, {3, 0}, {4, 4}), 0.1});
  gap.current = {1.0, -1.0};
  CHECK_NOTHROW(validate_layout(gap, mesh));
}

TEST_CASE("element energy route matches the band quadratic form") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const StructuredMesh mesh = build_mesh(2, 5, 1.0);
  const ElementMatrixCache cache(mesh, make_quadrature(2, 3));
  const InclusionMask inc = make_inclusion(mesh, {6, 7, 12}, 10.0);

  BandedSymmetricMatrix K = assemble_homogeneous(mesh, cache);
  add_inclusion(K, mesh, cache, inc);

  std::vector<double> w(mesh.param_count());
  for (double& x : w) x = dist(rng);

  const std::vector<double> Kw = K.multiply(w);
  double quad_form = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) quad_form += w[i] * Kw[i];
  CHECK(element_energy(mesh, cache, &inc, w) == doctest::Approx(quad_form).epsilon(1e-12));

  const std::vector<double> Kw2 = element_apply(mesh, cache, &inc, w);
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(Kw2[i] == doctest::Approx(Kw[i]).epsilon(1e-11));
}
