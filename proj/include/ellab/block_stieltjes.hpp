#pragma once

#include "ellab/limitlaw.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>
#include <vector>

namespace ellab {

// Spectral parameter of the 2x2 block fixed point: q = [[eta, z], [conj(z), eta]].
struct BlockPoint {
  cd eta;
  cd z;
  double rho;

  BlockPoint(cd eta_, cd z_, double rho_) : eta(eta_), z(z_), rho(rho_) {
    if (!(eta.imag() > 0.0)) throw std::domain_error("BlockPoint: Im(eta) must be positive");
  }
};

// Solution Gamma = [[a, b], [c, a]] of Gamma = -(q + Sigma(Gamma))^{-1}.
// Im(a) > 0 whenever Im(eta) > 0; residual is the max-entry defect of the
// matrix equation.
struct BlockTransform {
  cd a, b, c;
  double residual = 0.0;
  int iterations = 0;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// [[a, b], [c, d]] -> [[d, rho c], [rho b, a]].
Eigen::Matrix2cd sigma_op(const Eigen::Matrix2cd& M, double rho);

// Damped Picard iteration (damping 1/2, start a = -1/eta, b = c = 0) down to
// max-entry residual 1e-12; on stagnation, a homotopy in Im(eta) from t = 1
// toward the target, solving the cleared scalar equation by polynomial roots
// where Picard stalls and selecting the root continuing the tracked branch
// (Im(a) > 0, nearest to the previous rung). Throws SolverError when no
// admissible root exists.
BlockTransform solve_gamma(const BlockPoint& p);

// Warm-started variant for sweeps over nearby points: Newton from a_warm,
// accepted only if it stays on the warm branch (jump guard) and meets the
// same residual gates; anything else falls back to the cold solve.
BlockTransform solve_gamma(const BlockPoint& p, cd a_warm);

// Defect of the scalar self-consistent equation
//   1/((a + eta) a) + 1 - Re(z)^2/(eta + (1+rho)a)^2 - Im(z)^2/(eta + (1-rho)a)^2.
// Throws std::domain_error on a pole (a = 0, a = -eta, or a vanishing
// off-diagonal denominator).
cd scalar_residual(cd a, const BlockPoint& p);

// Density of the symmetrized singular-value law at grid points:
// p(x) = (1/pi) Im a(x + i t, z), Richardson-extrapolated from t_small and
// 2 t_small. Points where the solver fails carry p = NaN.
struct DensityProfile {
  cd z;
  std::vector<std::pair<double, double>> grid;  // (x, p)
  double support_gap = 0.0;
};
DensityProfile density_nu(double rho, cd z, const std::vector<double>& x_grid, double t_small);

// Largest c with density at most 1e-6 on [0, c], located by bisection; 0 when
// the origin already carries mass or the continuous extension a(i 1e-8, z)
// is not small.
double support_gap(double rho, cd z);

// Stieltjes transform of the squared-singular-value law: s(zeta, z) =
// a(eta, z)/eta with eta the upper-half-plane square root of zeta.
cd squared_sv_transform(double rho, cd z, cd zeta);

}  // namespace ellab
