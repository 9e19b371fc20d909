// Paper-scale integration scenarios: the 2-D square sweeps on the 21x21
// mesh, the default two-patch test, and the CEM electrode geometries.

#include <doctest.h>

#include <cmath>
#include <map>

#include "eit/bounds.hpp"
#include "eit/experiments.hpp"
#include "eit/forward.hpp"

using namespace eit;

TEST_CASE("2-D square-inclusion sweep: sign law and line containment") {
  // all square inclusions with side 1..5 on the 21x21 mesh, both contrasts
  SweepPlan plan;
  plan.test_id = "T1";
  plan.dim = 2;
  plan.n_e = 21;
  plan.neumann = uniform_spec();
  plan.k_values = {0.1, 10.0};
  plan.generator = GeneratorKind::BlockSweep;
  plan.size_min = 1;
  plan.size_max = 5;
  plan.d0_min = 1;
  plan.volume_cap = 0.06;
  plan.seed = 4;

  const std::vector<SolveRecord> records = run_sweep(plan);
  std::size_t expected = 0;
  const StructuredMesh mesh = build_mesh(2, 21, 1.0);
  for (int s = 1; s <= 5; ++s) expected += gen_blocks(mesh, s, 1).size();
  REQUIRE(records.size() == 2 * expected);

  const BoundsLine line_hi = theoretical_line_uniform(10.0);
  const BoundsLine line_lo = theoretical_line_uniform(0.1);
  std::map<int, std::size_t> per_d0;
  for (const SolveRecord& r : records) {
    REQUIRE(r.status == "ok");
    if (r.k > 1.0)
      CHECK(r.W < r.W0);
    else
      CHECK(r.W > r.W0);
    CHECK(r.volume_fraction <= 0.06);
    const BoundsCheck chk = check_bounds(r, r.k > 1.0 ? line_hi : line_lo, {}, 0.05);
    CHECK(chk.pass);
    ++per_d0[r.d0_elems];
  }
  // the sweep spans several boundary distances, as in the d0 study
  CHECK(per_d0.size() >= 5);

  // empirical constants are no worse than the theoretical C1 = 1
  std::vector<SolveRecord> k10;
  for (const SolveRecord& r : records)
    if (r.k == 10.0) k10.push_back(r);
  const EmpiricalConstants ec = empirical_constants(k10, 10.0);
  CHECK(ec.C1 >= 1.0);
  CHECK(ec.C2 <= 1.0);

  // the fat-inclusion exponent fits the ensemble at roughly 1
  const PowerLawFit fit = powerlaw_fit(k10);
  CHECK(fit.exponent > 0.5);
  CHECK(fit.exponent < 1.5);
}

TEST_CASE("default two-patch test produces a usable ensemble") {
  const StructuredMesh mesh = build_mesh(2, 15, 1.0);
  const NeumannSpec t2 = default_two_patch(mesh);
  REQUIRE(t2.patches.size() == 2);

  SweepPlan plan;
  plan.test_id = "T2";
  plan.dim = 2;
  plan.n_e = 15;
  plan.neumann = t2;
  plan.k_values = {0.1, 10.0};
  plan.generator = GeneratorKind::ConnectedExhaustive;
  plan.size_min = 1;
  plan.size_max = 2;
  plan.d0_min = 2;
  const std::vector<SolveRecord> records = run_sweep(plan);
  REQUIRE(!records.empty());
  for (const SolveRecord& r : records) {
    REQUIRE(r.status == "ok");
    CHECK(r.d0_elems >= 2);
    if (r.k > 1.0)
      CHECK(r.W < r.W0);
    else
      CHECK(r.W > r.W0);
  }
}

TEST_CASE("CEM test T2: full face against a small centered electrode") {
  const StructuredMesh mesh = build_mesh(3, 9, 1.0);
  ForwardContext ctx(mesh);
  const double z = 0.2;
  const int c = mesh.n_e / 2;

  for (int half : {0, 1}) {  // 1x1 and 3x3 small electrodes
    ElectrodeLayout layout;
    layout.electrodes.push_back(
        {face_rectangle(mesh, 4, {0, 0}, {mesh.n_e - 1, mesh.n_e - 1}), z});  // z = 0 face
    layout.electrodes.push_back(
        {face_rectangle(mesh, 5, {c - half, c - half}, {c + half, c + half}), z});
    layout.current = {1.0, -1.0};
    validate_layout(layout, mesh);

    const double W0 = ctx.homogeneous_cem(layout).power;
    CHECK(W0 > 0.0);

    const InclusionMask inc =
        make_inclusion(mesh, {mesh.element_id({c, c, c}), mesh.element_id({c, c, c - 1})}, 10.0);
    RunPairOptions opts;
    opts.test_id = half == 0 ? "cem-T2-1x1" : "cem-T2-3x3";
    opts.d03_face = 5;  // distance to the small-electrode face
    const SolveRecord rec = run_pair_cem(ctx, layout, inc, opts);
    CHECK(rec.W < rec.W0);
    CHECK(rec.gap > 0.0);
    CHECK(rec.d03_elems == mesh.n_e - 1 - c);
  }
}

TEST_CASE("CEM test T3: two small electrodes on one face") {
  const StructuredMesh mesh = build_mesh(3, 9, 1.0);
  ForwardContext ctx(mesh);
  // symmetric about the face middle lines, separated by three elements
  const int lo = (mesh.n_e - 5) / 2;      // left electrode column
  const int hi = lo + 4;                  // right electrode column
  const int mid = mesh.n_e / 2;
  ElectrodeLayout layout;
  layout.electrodes.push_back({face_rectangle(mesh, 5, {lo, mid}, {lo, mid}), 0.2});
  layout.electrodes.push_back({face_rectangle(mesh, 5, {hi, mid}, {hi, mid}), 0.2});
  layout.current = {1.0, -1.0};
  validate_layout(layout, mesh);

  const double W0 = ctx.homogeneous_cem(layout).power;
  CHECK(W0 > 0.0);

  const InclusionMask inc = make_inclusion(mesh, {mesh.element_id({mid, mid, mid})}, 0.1);
  const SolveRecord rec = run_pair_cem(ctx, layout, inc);
  CHECK(rec.W > rec.W0);
}

TEST_CASE("discrete energy agrees with direct quadrature of the functional") {
  // J(w) = 1/2 w^T K w - w^T p versus Gauss-point evaluation of
  // 1/2 int sigma |grad u_h|^2 - oint phi u_h
  const StructuredMesh mesh = build_mesh(2, 9, 1.0);
  ForwardContext ctx(mesh);
  const NeumannSpec spec = uniform_spec();
  const InclusionMask inc = make_inclusion(mesh, {mesh.element_id({4, 4, 0})}, 10.0);
  const ForwardSolve fs = ctx.solve_neumann_power(spec, &inc);
  const std::vector<double> p = assemble_neumann_load(mesh, spec);

  double wp = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) wp += fs.w[i] * p[i];
  const double j_matrix = 0.5 * fs.energy - wp;  // energy = w^T K w

  // bulk term by independent Gauss-point evaluation of the gradient field
  const QuadratureRule quad = make_quadrature(2, 3);
  std::vector<char> in_d(mesh.element_count(), 0);
  for (std::size_t id : inc.elements) in_d[id] = 1;
  double bulk = 0.0;
  for (std::size_t id = 0; id < mesh.element_count(); ++id) {
    const MultiIndex e = mesh.element_at(id);
    const double sigma = in_d[id] ? inc.k : 1.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const std::array<double, 3> xi = quad.point(q);
      std::array<double, 3> x{0.0, 0.0, 0.0};
      for (int a = 0; a < 2; ++a) x[a] = (e[a] + 0.5 + xi[a]) * mesh.h;
      const std::array<double, 3> g = field_gradient(mesh, fs.w, x);
      bulk += quad.weight(q) * mesh.h * mesh.h * sigma * (g[0] * g[0] + g[1] * g[1]);
    }
  }
  // boundary term by face quadrature of phi u_h
  const QuadratureRule face_rule = make_quadrature(1, 6);
  double load_term = 0.0;
  for (const BoundaryFace& f : boundary_faces(mesh)) {
    const MultiIndex e = mesh.element_at(f.element);
    const int t = f.axis == 0 ? 1 : 0;
    for (std::size_t q = 0; q < face_rule.size(); ++q) {
      std::array<double, 3> x{0.0, 0.0, 0.0};
      x[f.axis] = f.side == 0 ? 0.0 : mesh.side_l;
      x[t] = (e[t] + 0.5 + face_rule.point(q)[0]) * mesh.h;
      const double phi = neumann_value(spec, mesh, f, x);
      if (phi == 0.0) continue;
      // evaluate the trace from inside the owning element
      std::array<double, 3> x_in = x;
      x_in[f.axis] = f.side == 0 ? 1e-12 : mesh.side_l - 1e-12;
      load_term += face_rule.weight(q) * mesh.h * phi * field_value(mesh, fs.w, x_in);
    }
  }
  const double j_quad = 0.5 * bulk - load_term;
  CHECK(std::abs(j_matrix - j_quad) <= 1e-10 * std::max(1.0, std::abs(j_matrix)));
}
