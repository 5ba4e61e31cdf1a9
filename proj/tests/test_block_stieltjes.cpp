#include "doctest.h"

#include "ellab/block_stieltjes.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

using namespace ellab;
using namespace std::complex_literals;

namespace {

void check_point(double rho, cd z, cd eta, cd a, cd b, cd c, double tol = 2e-9) {
  const BlockTransform g = solve_gamma(BlockPoint(eta, z, rho));
  CHECK(std::abs(g.a - a) < tol);
  CHECK(std::abs(g.b - b) < tol);
  CHECK(std::abs(g.c - c) < tol);
  CHECK(g.residual <= 1e-9);
  CHECK(g.a.imag() > 0.0);
}

}  // namespace

TEST_CASE("block point validation") {
  CHECK_THROWS_AS(BlockPoint(cd(1.0, 0.0), cd(0, 0), 0.5), std::domain_error);
  CHECK_THROWS_AS(BlockPoint(cd(0.0, -0.1), cd(0, 0), 0.5), std::domain_error);
  CHECK_NOTHROW(BlockPoint(cd(0.3, 0.1), cd(0, 0), 0.5));
}

TEST_CASE("sigma operator") {
  Eigen::Matrix2cd M;
  M << cd(1, 1), cd(2, 0), cd(0, 3), cd(-1, 0);
  const Eigen::Matrix2cd S = sigma_op(M, 0.5);
  CHECK(S(0, 0) == cd(-1, 0));
  CHECK(S(0, 1) == cd(0, 1.5));
  CHECK(S(1, 0) == cd(1, 0));
  CHECK(S(1, 1) == cd(1, 1));
}

TEST_CASE("scalar residual") {
  // 1/((i + i) i) + 1 = 1/2 at the reference point
  const cd r = scalar_residual(cd(0, 1), BlockPoint(cd(0, 1), cd(0, 0), 0.0));
  CHECK(std::abs(r - cd(0.5, 0)) < 1e-14);

  CHECK_THROWS_AS(scalar_residual(cd(0, 0), BlockPoint(cd(0, 1), cd(0, 0), 0.0)),
                  std::domain_error);
  CHECK_THROWS_AS(scalar_residual(cd(0, -1), BlockPoint(cd(0, 1), cd(0, 0), 0.0)),
                  std::domain_error);
}

TEST_CASE("fixed points frozen from an independent solver") {
  // (rho, z, eta) -> (a, b, c), cross-checked against a python homotopy at 1e-13
  check_point(0.5, cd(0, 0), cd(0, 1), cd(0, 0.618033988750), 0, 0);
  check_point(0.5, cd(1, 0), cd(0, 1), cd(0, 0.502282851260), cd(-0.286458250795, 0),
              cd(-0.286458250795, 0));
  check_point(0.5, cd(2.25, 0), cd(0, 1), cd(0, 0.210514027581), cd(-0.359984030020, 0),
              cd(-0.359984030020, 0));
  check_point(0.5, cd(0, 3), cd(0, 1), cd(0, 0.099215099222), cd(0, -0.283577702709),
              cd(0, 0.283577702709));
  check_point(0.0, cd(2, 0), cd(0, 1), cd(0, 0.222494514121), cd(-0.364000838533, 0),
              cd(-0.364000838533, 0));
  check_point(0.0, cd(0, 0), cd(0, 1), cd(0, 0.618033988750), 0, 0);
  check_point(0.0, cd(0, 0), cd(0, 0.5), cd(0, 0.780776406404), 0, 0);
  check_point(-0.5, cd(0, 1.2), cd(0, 0.5), cd(0, 0.521902273214), cd(0, -0.488195083758),
              cd(0, 0.488195083758));
  check_point(0.5, cd(2.25, 0), cd(0.3, 0.1), cd(0.104389455453, 0.041097373932),
              cd(-0.520838890303, -0.018129266567), cd(-0.520838890303, -0.018129266567));
  check_point(0.9, cd(1, 1), cd(0, 0.05), cd(0, 0.028248599604),
              cd(-0.272479620015, -0.534759573913), cd(-0.272479620015, 0.534759573913));
  check_point(-0.9, cd(0.5, 0.5), cd(0, 0.1), cd(0, 0.177249357994),
              cd(-0.752811444707, -0.202907507311), cd(-0.752811444707, 0.202907507311));
}

TEST_CASE("rho zero at z zero is the semicircle transform") {
  // a(eta) = (-eta + sqrt(eta^2 - 4))/2 with Im a > 0
  for (int k = 0; k < 20; ++k) {
    const double re = -2.4 + 0.25 * k;
    const double im = 0.08 + 0.11 * k;
    const cd eta(re, im);
    const cd root = std::sqrt(eta * eta - 4.0);
    cd ref = (-eta + root) / 2.0;
    if (ref.imag() <= 0.0) ref = (-eta - root) / 2.0;
    const BlockTransform g = solve_gamma(BlockPoint(eta, cd(0, 0), 0.0));
    CHECK(std::abs(g.a - ref) < 1e-10);
    CHECK(std::abs(g.b) < 1e-10);
    CHECK(std::abs(g.c) < 1e-10);
  }
}

TEST_CASE("off-diagonal symmetry in z") {
  // real z: b = c real; imaginary z: b = -c purely imaginary
  const BlockTransform gr = solve_gamma(BlockPoint(cd(0, 0.7), cd(1.3, 0), 0.5));
  CHECK(std::abs(gr.b.imag()) < 1e-10);
  CHECK(std::abs(gr.b - gr.c) < 1e-10);

  const BlockTransform gi = solve_gamma(BlockPoint(cd(0, 0.7), cd(0, 1.3), 0.5));
  CHECK(std::abs(gi.b.real()) < 1e-10);
  CHECK(std::abs(gi.b + gi.c) < 1e-10);

  // general z: c is the reflection of b when eta is purely imaginary
  const BlockTransform gg = solve_gamma(BlockPoint(cd(0, 0.4), cd(0.9, 0.7), -0.3));
  CHECK(std::abs(gg.c - std::conj(gg.b)) < 1e-9);
}

TEST_CASE("warm starts agree with the cold solve") {
  const BlockPoint p(cd(0, 0.3), cd(1.8, 0.2), 0.5);
  const BlockTransform cold = solve_gamma(p);

  // a nearby warm start converges to the same branch
  const BlockTransform warm = solve_gamma(p, cold.a * cd(1.001, 0.0005));
  CHECK(std::abs(warm.a - cold.a) < 1e-10);
  CHECK(warm.residual <= 1e-9);

  // a nonsense warm start is rejected by the jump guard and falls back
  for (cd garbage : {cd(100, 100), cd(0, -5), cd(1e-14, 1e-14)}) {
    const BlockTransform fb = solve_gamma(p, garbage);
    CHECK(std::abs(fb.a - cold.a) < 1e-9);
    CHECK(fb.a.imag() > 0.0);
  }
}

TEST_CASE("density value and normalization at the origin") {
  // symmetrized singular-value law of the rho = 0, z = 0 ensemble is the
  // semicircle: p(0) = 1/pi and unit total mass
  std::vector<double> grid;
  for (double x = 0.0; x <= 2.5 + 1e-12; x += 0.005) grid.push_back(x);
  const DensityProfile prof = density_nu(0.0, cd(0, 0), grid, 5e-5);
  CHECK(prof.grid.front().second == doctest::Approx(1.0 / M_PI).epsilon(1e-4));

  double mass = 0.0;
  for (std::size_t i = 1; i < prof.grid.size(); ++i) {
    const auto& [x0, p0] = prof.grid[i - 1];
    const auto& [x1, p1] = prof.grid[i];
    REQUIRE(std::isfinite(p0));
    mass += 0.5 * (p0 + p1) * (x1 - x0);
  }
  CHECK(2.0 * mass == doctest::Approx(1.0).epsilon(1e-3));  // even extension
  CHECK(prof.support_gap == 0.0);

  // semicircle shape along the grid
  for (std::size_t i = 0; i < prof.grid.size(); i += 50) {
    const auto& [x, p] = prof.grid[i];
    const double ref = x <= 2.0 ? std::sqrt(std::max(0.0, 4.0 - x * x)) / (2.0 * M_PI) : 0.0;
    CHECK(std::abs(p - ref) < 2e-3);
  }
}

TEST_CASE("support gap oracles") {
  // frozen exact spectral edges; the scan sits within 2e-3 of each
  CHECK(support_gap(0.0, cd(2, 0)) == doctest::Approx(0.7380174597).epsilon(2e-3));
  CHECK(support_gap(0.5, cd(2.5, 0)) == doctest::Approx(0.8412754302).epsilon(2e-3));
  CHECK(support_gap(0.5, cd(2.25, 0)) == doctest::Approx(0.6046835541).epsilon(2e-3));
  CHECK(support_gap(0.5, cd(0, 1.75)) == doctest::Approx(0.9341008947).epsilon(2e-3));
  CHECK(support_gap(0.0, cd(0, 0)) == 0.0);
  // near-critical point: small but positive gap
  const double g = support_gap(0.5, cd(1.6, 0));
  CHECK(g == doctest::Approx(0.0474601911).epsilon(0.05));
  CHECK(g > 0.02);
}

TEST_CASE("squared singular value transform") {
  // s(zeta) = a(sqrt(zeta))/sqrt(zeta) with the upper-half-plane root
  const double rho = 0.5;
  const cd z(2.25, 0);
  for (cd zeta : {cd(1.0, 0.8), cd(-0.5, 0.4), cd(3.0, 2.0)}) {
    cd eta = std::sqrt(zeta);
    if (eta.imag() <= 0.0) eta = -eta;
    const BlockTransform g = solve_gamma(BlockPoint(eta, z, rho));
    CHECK(std::abs(squared_sv_transform(rho, z, zeta) - g.a / eta) < 1e-9);
  }
}

TEST_CASE("density profile flags solver range") {
  // t_small outside its validated range is rejected early
  CHECK_THROWS_AS(density_nu(0.5, cd(2.25, 0), {0.1}, 1e-2), std::domain_error);
  CHECK_THROWS_AS(density_nu(0.5, cd(2.25, 0), {0.1}, 1e-9), std::domain_error);

  // gap coherence: the profile's gap matches the standalone scan
  std::vector<double> grid;
  for (double x = 0.0; x <= 1.0; x += 0.05) grid.push_back(x);
  const DensityProfile prof = density_nu(0.5, cd(2.25, 0), grid, 5e-5);
  CHECK(prof.support_gap == doctest::Approx(support_gap(0.5, cd(2.25, 0))).epsilon(1e-12));
  // density is numerically zero strictly inside the gap
  for (const auto& [x, p] : prof.grid)
    if (x < prof.support_gap - 0.05) CHECK(std::abs(p) < 1e-5);
}
