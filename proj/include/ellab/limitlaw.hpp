#pragma once

#include <complex>
#include <vector>

namespace ellab {

using cd = std::complex<double>;

// Geometry of the ellipse E_rho with horizontal semi-axis 1+rho and vertical
// semi-axis 1-rho. rho=1 and rho=-1 degenerate to the segments [-2,2] on the
// real and imaginary axis respectively.
struct EllipseGeometry {
  double rho;
  double semi_major;  // 1 + rho, horizontal
  double semi_minor;  // 1 - rho, vertical

  explicit EllipseGeometry(double r) : rho(r), semi_major(1.0 + r), semi_minor(1.0 - r) {}
  bool contains(cd z, double tol = 1e-12) const;
};

// Euclidean distance from z to the filled ellipse E_rho; 0 inside. For
// |rho| = 1 this is the distance to the degenerate segment.
double dist_to_ellipse(double rho, cd z);

// The branch of sqrt(z^2 - 4 rho) equal to z at infinity, realized as
// z * sqrt(1 - 4 rho / z^2) with the principal square root. The induced cut
// is [-2 sqrt(rho), 2 sqrt(rho)] for rho > 0 and the matching imaginary
// segment for rho < 0: throws std::domain_error for z on the cut.
cd branch_sqrt(double rho, cd z);

// Stieltjes transform of the limit law, defined outside E_rho:
// m = (-z + branch_sqrt(rho, z)) / (2 rho) for rho != 0, and -1/z for rho = 0.
// Satisfies rho m^2 + z m + 1 = 0 and m -> 0 at infinity. Throws
// std::domain_error for z inside or on E_rho.
cd m_of_z(double rho, cd z);

// Second root (-z - branch_sqrt) / (2 rho); undefined for rho = 0 (throws).
cd m2_of_z(double rho, cd z);

// H(lambda) = lambda + rho / lambda; one-to-one on |lambda| > 1.
cd outlier_map(double rho, cd lambda);

// Inverse of H on |lambda| > 1: the root of lambda^2 - z lambda + rho = 0
// with modulus > 1, i.e. (z + branch_sqrt(rho, z)) / 2. Throws
// std::domain_error when no root has modulus > 1.
cd inverse_outlier_map(double rho, cd z);

// For each perturbation eigenvalue with |lambda| > 1, H(lambda) is either a
// genuine outlier location (distance to E_rho above 3*delta) or a violation
// of the separation hypothesis (distance at most 3*delta). j counts outliers.
struct OutlierPrediction {
  std::vector<cd> predicted;
  int j = 0;
  bool band_violation = false;
};
OutlierPrediction predict_outliers(double rho, const std::vector<cd>& eigs, double delta);

// prod_i (1 + m(z) lambda_i); empty product is 1. Same domain as m_of_z.
cd g_of_z(double rho, const std::vector<cd>& eigs, cd z);

// Diagnostics at a point z with dist(z, E_rho) >= delta: computable
// two-sided bounds on |m| and the separation of the two branches.
//   |m| <= 1 / dist(z, E_rho)            (contraction of H toward the boundary)
//   |m| >= 1 / (|z| + |rho| * upper)     (from m = -1/(z + rho m))
// branch_gap = |m - m2| = |branch_sqrt| / |rho|, +inf for rho = 0;
// gap_ok verifies branch_gap >= delta / |rho|.
struct StabilityReport {
  bool m_bounds_ok = false;
  double branch_gap = 0.0;
  bool gap_ok = false;
  double m_abs = 0.0;
  double residual = 0.0;  // |rho m^2 + z m + 1|
};
StabilityReport stability_check(double rho, cd z, double delta);

}  // namespace ellab
