#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eit/records.hpp"

namespace eit {

// Quantities the theorem constants depend on.  Only d0 and the domain
// measure enter the computations here; the regularity data is carried as
// metadata (the paper gives no formulas for its influence).
struct TheoremContext {
  double d0 = 0.0;
  double domain_measure = 1.0;
  std::optional<double> m0;  // fat-inclusion floor |D| >= m0
  double r0 = 0.0, M0 = 0.0, delta1 = 0.0, z_min = 0.0, z_max = 0.0;
};

enum class LineProvenance { Uniform, Cosine, CemUniform, Empirical };

// Two-sided bound  lower_coef * gap <= |D|/|Omega| <= upper_coef * gap^exponent.
struct BoundsLine {
  double lower_coef = 0.0;
  double upper_coef = 0.0;
  double exponent = 1.0;  // 1 in the fat-inclusion form, 1/p otherwise
  LineProvenance provenance = LineProvenance::Uniform;
  double k = 0.0;
  int n = 0;  // cosine order when provenance == Cosine
};

/// Uniform-flux (T1) line: (1/9, 10/9) at k = 10 and k = 0.1; in general
/// the k-dependent factors of the fat-inclusion theorem with C1 = C2 = 1.
BoundsLine theoretical_line_uniform(double k);

/// Oscillating-data lines for n in {1, 2}, coefficients exactly as printed,
/// with C_n = (10 / (n pi cosh^2(n pi / 2))) (sinh(n pi / 20) - sin(n pi / 20)).
BoundsLine theoretical_line_cosine(double k, int n);
double cosine_upper_constant(int n);  // C_n

/// CEM uniform line: the T1 coefficients scaled by (l + 2z) / l.
BoundsLine theoretical_line_cem_uniform(double k, double side_l, double z);

struct BoundsCheck {
  bool pass = false;
  double lower_margin = 0.0;  // (v - L*gap) / v, signed
  double upper_margin = 0.0;  // (U*gap^e - v) / v, signed
};

/// Containment of one record between the lines, with relative slack for
/// discretization error.  Errors on k-regime mismatch between record/line.
BoundsCheck check_bounds(const SolveRecord& record, const BoundsLine& line,
                         const TheoremContext& context = {}, double slack = 0.0);

struct EmpiricalConstants {
  double C1 = 0.0;  // largest lower constant valid for the whole ensemble
  double C2 = 0.0;  // smallest upper constant valid for the whole ensemble
  std::size_t samples = 0;
  double k = 0.0;
  std::string excitation;
};

/// Extract the tightest fat-inclusion-form constants containing every
/// record: k>1: C1 = min v(k-1)/gap, C2 = max v(k-1)/(k gap);
/// k<1: C1 = min v(1-k)/(k gap), C2 = max v(1-k)/gap.
EmpiricalConstants empirical_constants(const std::vector<SolveRecord>& records, double k);

/// The bound lines realized by extracted constants.
BoundsLine empirical_line(const EmpiricalConstants& c);

struct PowerLawFit {
  double C = 0.0;
  double exponent = 0.0;  // estimate of 1/p in v ~ C * gap^(1/p)
};

/// Least-squares fit of log v = log C + (1/p) log gap over the records.
PowerLawFit powerlaw_fit(const std::vector<SolveRecord>& records);

}  // namespace eit
