#include "eit/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "eit/errors.hpp"

namespace eit {

namespace {

void check_contrast(double k) {
  if (!(k > 0.0) || k == 1.0) throw ConfigError("contrast k must be positive and not 1");
}

}  // namespace

BoundsLine theoretical_line_uniform(double k) {
  check_contrast(k);
  BoundsLine line;
  line.provenance = LineProvenance::Uniform;
  line.k = k;
  if (k > 1.0) {
    line.lower_coef = 1.0 / (k - 1.0);
    line.upper_coef = k / (k - 1.0);
  } else {
    line.lower_coef = k / (1.0 - k);
    line.upper_coef = 1.0 / (1.0 - k);
  }
  return line;
}

double cosine_upper_constant(int n) {
  if (n != 1 && n != 2)
    throw ConfigError("the printed C_n formula covers n = 1 and n = 2 only");
  const double np = n * M_PI;
  const double c = std::cosh(np / 2.0);
  return 10.0 / (np * c * c) * (std::sinh(np / 20.0) - std::sin(np / 20.0));
}

BoundsLine theoretical_line_cosine(double k, int n) {
  check_contrast(k);
  const double Cn = cosine_upper_constant(n);
  const double np = n * M_PI;
  const double t = std::tanh(np / 2.0);
  BoundsLine line;
  line.provenance = LineProvenance::Cosine;
  line.k = k;
  line.n = n;
  if (k > 1.0) {
    line.lower_coef = t / (np * (k - 1.0));
    line.upper_coef = (1.0 / Cn) * (k / (k - 1.0)) * t / np;
  } else {
    line.lower_coef = k * t / (np * (1.0 - k));
    line.upper_coef = (1.0 / Cn) * (1.0 / (1.0 - k)) * t / np;
  }
  return line;
}

BoundsLine theoretical_line_cem_uniform(double k, double side_l, double z) {
  if (!(side_l > 0.0) || z < 0.0) throw ConfigError("CEM line needs side_l > 0 and z >= 0");
  BoundsLine line = theoretical_line_uniform(k);
  const double factor = (side_l + 2.0 * z) / side_l;
  line.lower_coef *= factor;
  line.upper_coef *= factor;
  line.provenance = LineProvenance::CemUniform;
  return line;
}

BoundsCheck check_bounds(const SolveRecord& record, const BoundsLine& line,
                         const TheoremContext& context, double slack) {
  if ((record.k > 1.0) != (line.k > 1.0))
    throw ConfigError("k-regime mismatch between record and bounds line");
  (void)context;  // regularity metadata does not enter the inequality
  BoundsCheck out;
  const double v = record.volume_fraction;
  const double lo = line.lower_coef * record.gap;
  const double hi = line.upper_coef * std::pow(record.gap, line.exponent);
  if (v == 0.0 && record.gap == 0.0) {
    out.pass = true;
    return out;
  }
  const double scale = std::max(v, 1e-300);
  out.lower_margin = (v - lo) / scale;
  out.upper_margin = (hi - v) / scale;
  out.pass = out.lower_margin >= -slack && out.upper_margin >= -slack;
  return out;
}

EmpiricalConstants empirical_constants(const std::vector<SolveRecord>& records, double k) {
  check_contrast(k);
  EmpiricalConstants out;
  out.k = k;
  for (const SolveRecord& r : records) {
    if (r.status != "ok") continue;
    if (r.k != k) throw ConfigError("empirical constants need a single-k ensemble");
    if (!(r.gap > 0.0)) throw ConfigError("empirical constants need positive gaps");
    const double v = r.volume_fraction;
    double c1, c2;
    if (k > 1.0) {
      c1 = v * (k - 1.0) / r.gap;
      c2 = v * (k - 1.0) / (k * r.gap);
    } else {
      c1 = v * (1.0 - k) / (k * r.gap);
      c2 = v * (1.0 - k) / r.gap;
    }
    if (out.samples == 0) {
      out.C1 = c1;
      out.C2 = c2;
      out.excitation = r.test_id;
    } else {
      out.C1 = std::min(out.C1, c1);
      out.C2 = std::max(out.C2, c2);
    }
    ++out.samples;
  }
  if (out.samples == 0) throw ConfigError("empirical constants need at least one record");
  return out;
}

BoundsLine empirical_line(const EmpiricalConstants& c) {
  BoundsLine line;
  line.provenance = LineProvenance::Empirical;
  line.k = c.k;
  if (c.k > 1.0) {
    line.lower_coef = c.C1 / (c.k - 1.0);
    line.upper_coef = c.C2 * c.k / (c.k - 1.0);
  } else {
    line.lower_coef = c.C1 * c.k / (1.0 - c.k);
    line.upper_coef = c.C2 / (1.0 - c.k);
  }
  return line;
}

PowerLawFit powerlaw_fit(const std::vector<SolveRecord>& records) {
  std::vector<double> lg, lv;
  for (const SolveRecord& r : records) {
    if (r.status != "ok") continue;
    if (!(r.gap > 0.0) || !(r.volume_fraction > 0.0)) continue;
    lg.push_back(std::log(r.gap));
    lv.push_back(std::log(r.volume_fraction));
  }
  const std::size_t n = lg.size();
  if (n < 3) throw ConfigError("power-law fit needs at least 3 usable records");
  double mg = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mg += lg[i];
    mv += lv[i];
  }
  mg /= n;
  mv /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lg[i] - mg) * (lg[i] - mg);
    sxy += (lg[i] - mg) * (lv[i] - mv);
  }
  if (sxx == 0.0) throw ConfigError("power-law fit degenerate: all gaps equal");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.C = std::exp(mv - fit.exponent * mg);
  return fit;
}

}  // namespace eit
