#include "doctest.h"

#include "ellab/limitlaw.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

using namespace ellab;
using namespace std::complex_literals;

TEST_CASE("ellipse membership") {
  const EllipseGeometry e(0.5);
  CHECK(e.semi_major == doctest::Approx(1.5));
  CHECK(e.semi_minor == doctest::Approx(0.5));
  CHECK(e.contains(cd(0, 0)));
  CHECK(e.contains(cd(1.5, 0)));
  CHECK(e.contains(cd(0, 0.5)));
  CHECK(e.contains(cd(1.0, 0.3)));
  CHECK(!e.contains(cd(1.6, 0)));
  CHECK(!e.contains(cd(0, 0.6)));
  CHECK(!e.contains(cd(1.2, 0.4)));

  const EllipseGeometry circle(0.0);
  CHECK(circle.contains(cd(0.999, 0)));
  CHECK(!circle.contains(cd(0.8, 0.7)));
}

TEST_CASE("distance to the ellipse") {
  // foot-point values frozen from an independent Lagrange-multiplier solve
  CHECK(dist_to_ellipse(0.5, cd(1.0, 1.0)) == doctest::Approx(0.606709087964).epsilon(1e-9));
  CHECK(dist_to_ellipse(0.5, cd(1.25, 0.75)) == doctest::Approx(0.436633691669).epsilon(1e-9));
  CHECK(dist_to_ellipse(0.5, cd(0.2, 0.6)) == doctest::Approx(0.104361924890).epsilon(1e-9));
  CHECK(dist_to_ellipse(0.5, cd(-1.7, 0.2)) == doctest::Approx(0.249870502409).epsilon(1e-9));
  CHECK(dist_to_ellipse(0.0, cd(1.3, 0.4)) == doctest::Approx(0.360147050874).epsilon(1e-9));

  // points on an axis have closed-form distances
  CHECK(dist_to_ellipse(0.5, cd(0, 1.75)) == doctest::Approx(1.25));
  CHECK(dist_to_ellipse(0.5, cd(-11.0 / 6.0, 0)) == doctest::Approx(1.0 / 3.0));
  CHECK(dist_to_ellipse(-0.5, cd(1.0, 0)) == doctest::Approx(0.5));
  CHECK(dist_to_ellipse(0.5, cd(2.5, 0)) == doctest::Approx(1.0));
  CHECK(dist_to_ellipse(0.0, cd(2.0, 0)) == doctest::Approx(1.0));

  // inside and on the boundary the distance vanishes
  CHECK(dist_to_ellipse(0.5, cd(0, 0)) == 0.0);
  CHECK(dist_to_ellipse(0.5, cd(1.5, 0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dist_to_ellipse(0.3, cd(-0.5, 0.2)) == 0.0);
}

TEST_CASE("distance for degenerate ellipses") {
  // rho = 1: segment [-2, 2] on the real axis
  CHECK(dist_to_ellipse(1.0, cd(3.0, 0)) == doctest::Approx(1.0));
  CHECK(dist_to_ellipse(1.0, cd(0.0, 0.7)) == doctest::Approx(0.7));
  CHECK(dist_to_ellipse(1.0, cd(-2.0 - 3.0, 4.0)) == doctest::Approx(5.0));
  CHECK(dist_to_ellipse(1.0, cd(1.0, 0)) == 0.0);

  // rho = -1: segment [-2i, 2i]
  CHECK(dist_to_ellipse(-1.0, cd(0, 3.0)) == doctest::Approx(1.0));
  CHECK(dist_to_ellipse(-1.0, cd(0.7, 0.0)) == doctest::Approx(0.7));
  CHECK(dist_to_ellipse(-1.0, cd(0, 1.5)) == 0.0);
}

TEST_CASE("branch square root") {
  // rho = 1/4: sqrt(z^2 - 1) with value +-sqrt(8) at z = +-3
  CHECK(std::abs(branch_sqrt(0.25, cd(3, 0)) - std::sqrt(8.0)) < 1e-12);
  CHECK(std::abs(branch_sqrt(0.25, cd(-3, 0)) + std::sqrt(8.0)) < 1e-12);

  // the cut [-2 sqrt(rho), 2 sqrt(rho)] throws; just off the cut is fine
  CHECK_THROWS_AS(branch_sqrt(0.25, cd(0.5, 0)), std::domain_error);
  CHECK_THROWS_AS(branch_sqrt(0.25, cd(-0.9, 0)), std::domain_error);
  CHECK_NOTHROW(branch_sqrt(0.25, cd(0.5, 1e-6)));
  CHECK_NOTHROW(branch_sqrt(0.25, cd(1.1, 0)));

  // rho < 0 moves the cut onto the imaginary axis
  CHECK_THROWS_AS(branch_sqrt(-0.25, cd(0, 0.5)), std::domain_error);
  CHECK_NOTHROW(branch_sqrt(-0.25, cd(0.5, 0)));

  // asymptotically branch_sqrt(z) = z - 2 rho / z + O(z^-3); the bound
  // allows a few ulp at |z| = 1e6 (one ulp there is already ~1.2e-10)
  for (cd z : {cd(1e6, 0), cd(0, 1e6), cd(7e5, -7e5)}) {
    const cd bs = branch_sqrt(0.5, z);
    CHECK(std::abs(bs - (z - 2.0 * 0.5 / z)) < 1e-9);
  }

  // square of the branch is z^2 - 4 rho on a loop around the cut
  for (int k = 0; k < 24; ++k) {
    const double th = 2.0 * M_PI * k / 24.0;
    const cd z = 3.0 * std::exp(cd(0, th));
    const cd bs = branch_sqrt(0.7, z);
    CHECK(std::abs(bs * bs - (z * z - 4.0 * 0.7)) < 1e-10);
  }
}

TEST_CASE("stieltjes transform of the limit law") {
  // closed form at the reference point
  CHECK(std::abs(m_of_z(0.5, cd(2.25, 0)) - cd(-0.5, 0)) < 1e-12);

  // quadratic identity rho m^2 + z m + 1 = 0 on a loop outside the ellipse
  for (double rho : {0.5, -0.5, 0.9, 0.0}) {
    for (int k = 0; k < 16; ++k) {
      const double th = 2.0 * M_PI * (k + 0.5) / 16.0;
      const cd z = 2.5 * std::exp(cd(0, th));
      const cd m = m_of_z(rho, z);
      CHECK(std::abs(rho * m * m + z * m + 1.0) < 1e-10);
    }
  }

  // rho = 0 reduces to -1/z
  CHECK(std::abs(m_of_z(0.0, cd(3, 0)) + 1.0 / 3.0) < 1e-14);
  CHECK(std::abs(m_of_z(0.0, cd(0, 2)) - cd(0, 0.5)) < 1e-14);

  // decay at infinity: m ~ -1/z
  CHECK(std::abs(m_of_z(0.5, cd(1e6, 0))) <= 1.1e-6);

  // undefined inside or on the ellipse
  CHECK_THROWS_AS(m_of_z(0.5, cd(0, 0)), std::domain_error);
  CHECK_THROWS_AS(m_of_z(0.5, cd(1.5, 0)), std::domain_error);
  CHECK_THROWS_AS(m_of_z(0.5, cd(1.0, 0.2)), std::domain_error);
}

TEST_CASE("stieltjes transform is continuous in rho") {
  for (int k = 0; k < 12; ++k) {
    const double th = 2.0 * M_PI * (k + 0.25) / 12.0;
    const cd z = 3.0 * std::exp(cd(0, th));
    for (double rho : {0.4, 0.1, -0.3}) {
      const double d = 1e-4;
      CHECK(std::abs(m_of_z(rho, z) - m_of_z(rho + d, z)) <= 10.0 * d);
    }
    // the rho -> 0 limit matches the rho = 0 branch
    CHECK(std::abs(m_of_z(1e-8, z) - m_of_z(0.0, z)) < 1e-7);
  }
}

TEST_CASE("second branch") {
  const cd z(2.25, 0);
  const cd m = m_of_z(0.5, z);
  const cd m2 = m2_of_z(0.5, z);
  // the two roots of rho m^2 + z m + 1 multiply to 1/rho
  CHECK(std::abs(0.5 * m * m2 - 1.0) < 1e-12);
  CHECK(std::abs(0.5 * m2 * m2 + z * m2 + 1.0) < 1e-12);
  CHECK_THROWS_AS(m2_of_z(0.0, cd(3, 0)), std::domain_error);
}

TEST_CASE("outlier map and its inverse") {
  // spec-pinned images of the figure-1 perturbation eigenvalues
  CHECK(std::abs(outlier_map(0.5, cd(0, 2)) - cd(0, 1.75)) < 1e-14);
  CHECK(std::abs(outlier_map(0.5, cd(-1.5, 0)) - cd(-11.0 / 6.0, 0)) < 1e-14);
  CHECK(std::abs(outlier_map(0.5, cd(1, 1)) - cd(1.25, 0.75)) < 1e-14);

  // inverse picks the root of lambda^2 - z lambda + rho with |lambda| > 1
  CHECK(std::abs(inverse_outlier_map(0.5, cd(2.25, 0)) - cd(2, 0)) < 1e-12);

  // round-trips both ways on a ring |lambda| = 1.6
  for (double rho : {0.5, -0.4, 0.95}) {
    for (int k = 0; k < 16; ++k) {
      const double th = 2.0 * M_PI * k / 16.0;
      const cd lam = 1.6 * std::exp(cd(0, th));
      const cd z = outlier_map(rho, lam);
      CHECK(std::abs(inverse_outlier_map(rho, z) - lam) < 1e-10);
      CHECK(std::abs(outlier_map(rho, inverse_outlier_map(rho, z)) - z) < 1e-10);
      // the transform evaluates to -1/lambda on the image of |lambda| > 1
      CHECK(std::abs(m_of_z(rho, z) + 1.0 / lam) < 1e-10);
    }
  }

  // z = 0 has both roots at modulus sqrt(rho) <= 1: no inverse
  CHECK_THROWS_AS(inverse_outlier_map(0.5, cd(0, 0)), std::domain_error);
}

TEST_CASE("outlier prediction") {
  const std::vector<cd> eigs = {cd(0, 2), cd(-1.5, 0), cd(1, 1)};
  const OutlierPrediction p = predict_outliers(0.5, eigs, 0.05);
  REQUIRE(p.j == 3);
  CHECK(!p.band_violation);
  CHECK(std::abs(p.predicted[0] - cd(0, 1.75)) < 1e-12);
  CHECK(std::abs(p.predicted[1] - cd(-11.0 / 6.0, 0)) < 1e-12);
  CHECK(std::abs(p.predicted[2] - cd(1.25, 0.75)) < 1e-12);

  // an eigenvalue just above 1 maps too close to the boundary: flagged
  const OutlierPrediction v = predict_outliers(0.0, {cd(1.05, 0)}, 0.1);
  CHECK(v.band_violation);
  CHECK(v.j == 0);

  // eigenvalues with |lambda| <= 1 are silently absorbed by the bulk
  const OutlierPrediction q = predict_outliers(0.5, {cd(0.5, 0), cd(0, 2)}, 0.05);
  CHECK(q.j == 1);
  CHECK(!q.band_violation);

  const OutlierPrediction empty = predict_outliers(0.5, {}, 0.05);
  CHECK(empty.j == 0);
  CHECK(empty.predicted.empty());
}

TEST_CASE("outlier indicator function") {
  // 1 + m(2.25) * 2 = 1 - 0.5 * 2 = 0: z = H(2) is a zero of g
  CHECK(std::abs(g_of_z(0.5, {cd(2, 0)}, cd(2.25, 0))) < 1e-12);
  // rho = 0: 1 + (-1/3) * 2 = 1/3
  CHECK(std::abs(g_of_z(0.0, {cd(2, 0)}, cd(3, 0)) - cd(1.0 / 3.0, 0)) < 1e-12);
  CHECK(std::abs(g_of_z(0.5, {}, cd(3, 0)) - cd(1, 0)) < 1e-14);

  // multiplicativity over the eigenvalue list
  const std::vector<cd> eigs = {cd(2, 0), cd(0, 3)};
  const cd z(2.8, 1.1);
  const cd prod = g_of_z(0.5, {eigs[0]}, z) * g_of_z(0.5, {eigs[1]}, z);
  CHECK(std::abs(g_of_z(0.5, eigs, z) - prod) < 1e-12);
}

TEST_CASE("stability diagnostics") {
  const StabilityReport r = stability_check(0.5, cd(2.25, 0), 0.3);
  CHECK(r.m_bounds_ok);
  CHECK(r.gap_ok);
  CHECK(r.branch_gap == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(r.m_abs == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.residual < 1e-12);

  // generic off-axis point: bounds must still certify
  const StabilityReport r2 = stability_check(-0.4, cd(1.3, 1.4), 0.2);
  CHECK(r2.m_bounds_ok);
  CHECK(r2.residual < 1e-10);
}

TEST_CASE("wigner edge consistency") {
  // rho = 1: H(lambda) = lambda + 1/lambda maps |lambda| > 1 onto C minus [-2,2]
  const cd lam(1.7, 0.4);
  const cd z = outlier_map(1.0, lam);
  CHECK(std::abs(z - (lam + 1.0 / lam)) < 1e-14);
  CHECK(std::abs(inverse_outlier_map(1.0, z) - lam) < 1e-10);
  // the transform solves m^2 + z m + 1 = 0, the semicircle relation
  const cd m = m_of_z(1.0, z);
  CHECK(std::abs(m * m + z * m + 1.0) < 1e-10);
}
