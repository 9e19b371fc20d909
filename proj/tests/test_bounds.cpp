#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "eit/bounds.hpp"
#include "eit/errors.hpp"

using namespace eit;

namespace {

SolveRecord fake(double gap, double v, double k) {
  SolveRecord r;
  r.test_id = "fake";
  r.model = "neumann";
  r.k = k;
  r.volume_fraction = v;
  r.gap = gap;
  r.W0 = 1.0;
  r.W = k > 1.0 ? 1.0 - gap : 1.0 + gap;
  return r;
}

}  // namespace

TEST_CASE("uniform theoretical line") {
  const BoundsLine hi = theoretical_line_uniform(10.0);
  CHECK(hi.lower_coef == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(hi.upper_coef == doctest::Approx(10.0 / 9.0).epsilon(1e-14));
  const BoundsLine lo = theoretical_line_uniform(0.1);
  CHECK(lo.lower_coef == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(lo.upper_coef == doctest::Approx(10.0 / 9.0).epsilon(1e-14));
  const BoundsLine two = theoretical_line_uniform(2.0);
  CHECK(two.lower_coef == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(two.upper_coef == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(theoretical_line_uniform(1.0), ConfigError);
  CHECK_THROWS_AS(theoretical_line_uniform(-1.0), ConfigError);
}

TEST_CASE("cosine theoretical lines match independent evaluation") {
  // frozen from a high-precision evaluation of the printed formulas
  const BoundsLine l1 = theoretical_line_cosine(10.0, 1);
  CHECK(l1.lower_coef == doctest::Approx(0.03243762839771643).epsilon(1e-12));
  CHECK(l1.upper_coef == doctest::Approx(496.6190601195582).epsilon(1e-12));
  const BoundsLine l2 = theoretical_line_cosine(0.1, 2);
  CHECK(l2.lower_coef == doctest::Approx(0.017617958399439766).epsilon(1e-12));
  CHECK_THROWS_AS(theoretical_line_cosine(10.0, 3), ConfigError);
  CHECK_THROWS_AS(theoretical_line_cosine(10.0, 0), ConfigError);

  // near-vertical upper line: exceeds the uniform slope by far more than 100x
  CHECK(l1.upper_coef / theoretical_line_uniform(10.0).upper_coef > 100.0);
}

TEST_CASE("CEM line scales the uniform one by (l+2z)/l") {
  const BoundsLine cem = theoretical_line_cem_uniform(10.0, 1.0, 0.2);
  CHECK(cem.lower_coef == doctest::Approx(1.4 / 9.0).epsilon(1e-14));
  CHECK(cem.upper_coef == doctest::Approx(14.0 / 9.0).epsilon(1e-14));
  const BoundsLine same = theoretical_line_cem_uniform(0.1, 1.0, 0.2);
  CHECK(same.lower_coef == doctest::Approx(cem.lower_coef).epsilon(1e-14));
  const BoundsLine z0 = theoretical_line_cem_uniform(10.0, 1.0, 0.0);
  CHECK(z0.lower_coef == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(z0.upper_coef == doctest::Approx(10.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("containment check with margins") {
  const BoundsLine line = theoretical_line_uniform(10.0);
  // inside: v/gap = 0.5 in (1/9, 10/9)
  const BoundsCheck inside = check_bounds(fake(0.01, 0.005, 10.0), line);
  CHECK(inside.pass);
  CHECK(inside.lower_margin > 0.0);
  CHECK(inside.upper_margin > 0.0);
  // above the upper line
  const BoundsCheck above = check_bounds(fake(0.001, 0.5, 10.0), line);
  CHECK_FALSE(above.pass);
  CHECK(above.upper_margin < 0.0);
  // degenerate zero record
  const BoundsCheck zero = check_bounds(fake(0.0, 0.0, 10.0), line);
  CHECK(zero.pass);
  CHECK(zero.lower_margin == 0.0);
  CHECK(zero.upper_margin == 0.0);
  // regime mismatch
  CHECK_THROWS_AS(check_bounds(fake(0.01, 0.005, 0.1), line), ConfigError);
  // slack saves a slight violation
  const SolveRecord slight = fake(0.01, 0.00109, 10.0);  // just below lower line gap/9
  CHECK_FALSE(check_bounds(slight, line).pass);
  CHECK(check_bounds(slight, line, {}, 0.05).pass);
}

TEST_CASE("empirical constants: single record lines pass through the point") {
  const SolveRecord r = fake(0.02, 0.01, 10.0);
  const EmpiricalConstants ec = empirical_constants({r}, 10.0);
  CHECK(ec.samples == 1);
  const BoundsLine line = empirical_line(ec);
  const BoundsCheck chk = check_bounds(r, line);
  CHECK(chk.pass);
  CHECK(std::abs(chk.lower_margin) <= 1e-12);
  CHECK(std::abs(chk.upper_margin) <= 1e-12);
}

TEST_CASE("empirical constants contain the generating ensemble and scale") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(0.2, 1.0);
  std::vector<SolveRecord> records;
  for (int i = 0; i < 40; ++i)
    records.push_back(fake(0.01 * dist(rng), 0.005 * dist(rng), 0.1));
  const EmpiricalConstants ec = empirical_constants(records, 0.1);
  const BoundsLine line = empirical_line(ec);
  for (const SolveRecord& r : records) CHECK(check_bounds(r, line).pass);

  // doubling every gap halves both constants (homogeneity of min/max)
  std::vector<SolveRecord> doubled = records;
  for (SolveRecord& r : doubled) r.gap *= 2.0;
  const EmpiricalConstants ec2 = empirical_constants(doubled, 0.1);
  CHECK(ec2.C1 == doctest::Approx(ec.C1 / 2.0).epsilon(1e-12));
  CHECK(ec2.C2 == doctest::Approx(ec.C2 / 2.0).epsilon(1e-12));

  CHECK_THROWS_AS(empirical_constants({}, 10.0), ConfigError);
  CHECK_THROWS_AS(empirical_constants({fake(0.0, 0.1, 10.0)}, 10.0), ConfigError);
  CHECK_THROWS_AS(empirical_constants(records, 10.0), ConfigError);  // k mismatch
}

TEST_CASE("power-law fit recovers synthetic exponents") {
  std::vector<SolveRecord> lin, sqrt_rec;
  for (double g : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}) {
    lin.push_back(fake(g, g, 10.0));
    sqrt_rec.push_back(fake(g, std::sqrt(g), 10.0));
  }
  CHECK(powerlaw_fit(lin).exponent == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(powerlaw_fit(lin).C == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(powerlaw_fit(sqrt_rec).exponent == doctest::Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_AS(powerlaw_fit({fake(0.1, 0.1, 10.0)}), ConfigError);
  std::vector<SolveRecord> flat(5, fake(0.01, 0.02, 10.0));
  CHECK_THROWS_AS(powerlaw_fit(flat), ConfigError);
}
