#include "ellab/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ellab {

namespace {

double segment_dist(cd z, bool horizontal) {
  const double along = horizontal ? z.real() : z.imag();
  const double off = horizontal ? z.imag() : z.real();
  return std::hypot(std::max(0.0, std::abs(along) - 2.0), off);
}

}  // namespace

bool EllipseGeometry::contains(cd z, double tol) const {
  if (std::abs(rho) == 1.0) return segment_dist(z, rho > 0.0) <= tol;
  const double p = z.real() / semi_major, q = z.imag() / semi_minor;
  return p * p + q * q <= 1.0 + tol;
}

double dist_to_ellipse(double rho, cd z) {
  if (std::abs(rho) == 1.0) return segment_dist(z, rho > 0.0);
  const double A = 1.0 + rho, B = 1.0 - rho;
  const double p = std::abs(z.real()), q = std::abs(z.imag());
  if ((p / A) * (p / A) + (q / B) * (q / B) <= 1.0) return 0.0;

  // Foot-point parameter: the exterior projection solves f(t) = 0 with
  //   f(t) = (A p / (t + A^2))^2 + (B q / (t + B^2))^2 - 1,
  // strictly decreasing on [0, inf) with f(0) > 0 outside the ellipse.
  const auto f = [&](double t) {
    const double u = A * p / (t + A * A), v = B * q / (t + B * B);
    return u * u + v * v - 1.0;
  };
  double lo = 0.0, hi = std::max(A, B) * (std::abs(z) + A + B) + 1.0;
  while (f(hi) > 0.0) hi *= 2.0;
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double ft = f(t);
    (ft > 0.0 ? lo : hi) = t;
    const double u = t + A * A, v = t + B * B;
    const double df = -2.0 * (A * A * p * p / (u * u * u) + B * B * q * q / (v * v * v));
    double tn = t - ft / df;  // Newton, safeguarded by the bracket
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    if (std::abs(tn - t) <= 1e-15 * (1.0 + std::abs(t))) {
      t = tn;
      break;
    }
    t = tn;
  }
  const double dx = t * p / (t + A * A), dy = t * q / (t + B * B);
  return std::hypot(dx, dy);
}

cd branch_sqrt(double rho, cd z) {
  if (rho == 0.0) return z;
  const bool on_cut = rho > 0.0
                          ? (z.imag() == 0.0 && std::abs(z.real()) <= 2.0 * std::sqrt(rho))
                          : (z.real() == 0.0 && std::abs(z.imag()) <= 2.0 * std::sqrt(-rho));
  if (on_cut) throw std::domain_error("branch_sqrt: z lies on the branch cut");
  return z * std::sqrt(1.0 - 4.0 * rho / (z * z));
}

cd m_of_z(double rho, cd z) {
  if (dist_to_ellipse(rho, z) == 0.0)
    throw std::domain_error("m_of_z: z inside or on the ellipse");
  if (rho == 0.0) return -1.0 / z;
  return (-z + branch_sqrt(rho, z)) / (2.0 * rho);
}

cd m2_of_z(double rho, cd z) {
  if (rho == 0.0) throw std::domain_error("m2_of_z: second branch undefined for rho = 0");
  if (dist_to_ellipse(rho, z) == 0.0)
    throw std::domain_error("m2_of_z: z inside or on the ellipse");
  return (-z - branch_sqrt(rho, z)) / (2.0 * rho);
}

cd outlier_map(double rho, cd lambda) {
  if (lambda == cd(0.0, 0.0)) throw std::domain_error("outlier_map: lambda = 0");
  return lambda + rho / lambda;
}

cd inverse_outlier_map(double rho, cd z) {
  // Roots of lambda^2 - z lambda + rho = 0 are (z +/- branch_sqrt)/2; the
  // chosen branch makes the "+" root the one outside the unit circle.
  const cd s = branch_sqrt(rho, z);
  const cd big = 0.5 * (z + s), small = 0.5 * (z - s);
  if (std::abs(big) > 1.0) return big;
  if (std::abs(small) > 1.0) return small;
  throw std::domain_error("inverse_outlier_map: no preimage with |lambda| > 1");
}

OutlierPrediction predict_outliers(double rho, const std::vector<cd>& eigs, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("predict_outliers: delta must be positive");
  OutlierPrediction out;
  for (const cd& lam : eigs) {
    if (std::abs(lam) <= 1.0) continue;
    const cd z = outlier_map(rho, lam);
    if (dist_to_ellipse(rho, z) > 3.0 * delta) {
      out.predicted.push_back(z);
    } else {
      // |lambda| > 1 yet H(lambda) hugs the band: the separation hypothesis
      // fails at this delta and no clean outlier count is guaranteed.
      out.band_violation = true;
    }
  }
  out.j = static_cast<int>(out.predicted.size());
  return out;
}

cd g_of_z(double rho, const std::vector<cd>& eigs, cd z) {
  const cd m = m_of_z(rho, z);
  cd g = 1.0;
  for (const cd& lam : eigs) g *= 1.0 + m * lam;
  return g;
}

StabilityReport stability_check(double rho, cd z, double delta) {
  const double dist = dist_to_ellipse(rho, z);
  if (dist < delta)
    throw std::domain_error("stability_check: z closer to the ellipse than delta");
  const cd m = m_of_z(rho, z);
  StabilityReport rep;
  rep.m_abs = std::abs(m);
  rep.residual = std::abs(rho * m * m + z * m + 1.0);
  const double upper = 1.0 / dist;
  const double lower = 1.0 / (std::abs(z) + std::abs(rho) * upper);
  rep.m_bounds_ok =
      rep.m_abs <= upper * (1.0 + 1e-9) && rep.m_abs >= lower * (1.0 - 1e-9) &&
      rep.residual <= 1e-12 * (1.0 + std::abs(z) * rep.m_abs);
  if (rho == 0.0) {
    rep.branch_gap = std::numeric_limits<double>::infinity();
    rep.gap_ok = true;
  } else {
    rep.branch_gap = std::abs(branch_sqrt(rho, z)) / std::abs(rho);
    rep.gap_ok = rep.branch_gap >= delta / std::abs(rho);
  }
  return rep;
}

}  // namespace ellab
