#include "ellab/block_stieltjes.hpp"

#include "ellab/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace ellab {

namespace {

using Eigen::Matrix2cd;

bool finite_cd(cd v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

Matrix2cd q_matrix(cd eta, cd z) {
  Matrix2cd q;
  q << eta, z, std::conj(z), eta;
  return q;
}

Matrix2cd gamma_step(const Matrix2cd& G, const Matrix2cd& q, double rho) {
  return -(q + sigma_op(G, rho)).inverse();
}

double matrix_residual(const Matrix2cd& G, const Matrix2cd& q, double rho) {
  return (G - gamma_step(G, q, rho)).cwiseAbs().maxCoeff();
}

// Off-diagonal entries follow from the diagonal: the fixed point forces
// b = -a (Re z / P + i Im z / M), c = -a (Re z / P - i Im z / M) with
// P = eta + (1+rho) a, M = eta + (1-rho) a.
std::pair<cd, cd> bc_from_a(cd a, cd eta, cd z, double rho) {
  const cd P = eta + (1.0 + rho) * a;
  const cd M = eta + (1.0 - rho) * a;
  const cd re = z.real() / P;
  const cd im = cd(0.0, 1.0) * (z.imag() / M);
  return {-a * (re + im), -a * (re - im)};
}

struct ScalarEq {
  cd eta;
  double rho, R, I;  // R = Re(z)^2, I = Im(z)^2

  cd f(cd a) const {
    const cd P = eta + (1.0 + rho) * a;
    const cd M = eta + (1.0 - rho) * a;
    return 1.0 / ((a + eta) * a) + 1.0 - R / (P * P) - I / (M * M);
  }
  cd df(cd a) const {
    const cd P = eta + (1.0 + rho) * a;
    const cd M = eta + (1.0 - rho) * a;
    const cd D = a * a + eta * a;
    return -(2.0 * a + eta) / (D * D) + 2.0 * R * (1.0 + rho) / (P * P * P) +
           2.0 * I * (1.0 - rho) / (M * M * M);
  }
};

// Newton refinement of the scalar equation; keeps the best iterate seen.
cd polish(cd a, const ScalarEq& eq) {
  cd x = a, best = a;
  double bestr = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    const cd fx = eq.f(x);
    const double r = std::abs(fx);
    if (!std::isfinite(r)) break;
    if (r < bestr) {
      bestr = r;
      best = x;
    }
    if (r <= 1e-15) break;
    const cd d = eq.df(x);
    if (!finite_cd(d) || std::abs(d) == 0.0) break;
    const cd step = fx / d;
    x -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) {
      const double rr = std::abs(eq.f(x));
      if (std::isfinite(rr) && rr < bestr) best = x;
      break;
    }
  }
  return best;
}

// Clearing denominators turns the scalar equation into the polynomial
// (1 + a(a+eta)) P^2 M^2 - a(a+eta) (R M^2 + I P^2), generically degree 6
// with leading coefficient (1-rho^2)^2. For z on an axis one of P, M splits
// off as a spurious square factor; those roots fail the residual filter.
std::vector<cd> cleared_roots(cd eta, double rho, double R, double I) {
  using V = std::vector<cd>;
  const V D{0.0, eta, 1.0};
  const V one_plus_D{1.0, eta, 1.0};
  const V P2 = num::poly_mul({eta, 1.0 + rho}, {eta, 1.0 + rho});
  const V M2 = num::poly_mul({eta, 1.0 - rho}, {eta, 1.0 - rho});
  V poly = num::poly_mul(one_plus_D, num::poly_mul(P2, M2));
  V mix(3);
  for (int i = 0; i < 3; ++i) mix[i] = R * M2[i] + I * P2[i];
  const V rhs = num::poly_mul(D, mix);
  for (std::size_t i = 0; i < rhs.size(); ++i) poly[i] -= rhs[i];
  return num::poly_roots(poly);
}

std::optional<cd> select_root(cd eta, double rho, double R, double I, cd ref) {
  const ScalarEq eq{eta, rho, R, I};
  std::optional<cd> best;
  double bestd = std::numeric_limits<double>::infinity();
  for (cd r : cleared_roots(eta, rho, R, I)) {
    const cd x = polish(r, eq);
    if (!(x.imag() > 0.0)) continue;
    const double fr = std::abs(eq.f(x));
    if (!std::isfinite(fr) || fr > 1e-8) continue;
    const double d = std::abs(x - ref);
    if (d < bestd) {
      bestd = d;
      best = x;
    }
  }
  return best;
}

struct PicardOut {
  Matrix2cd G;
  int iters;
  bool ok;
};

PicardOut picard(Matrix2cd G, const Matrix2cd& q, double rho, int maxit) {
  for (int it = 1; it <= maxit; ++it) {
    const Matrix2cd S = gamma_step(G, q, rho);
    if (!S.allFinite()) return {G, it, false};
    if ((G - S).cwiseAbs().maxCoeff() <= 1e-12) return {S, it, true};
    G = 0.5 * (G + S);
  }
  return {G, maxit, false};
}

Matrix2cd block_from_a(cd a, cd eta, cd z, double rho) {
  auto [b, c] = bc_from_a(a, eta, z, rho);
  if (!finite_cd(b) || !finite_cd(c)) b = c = 0.0;
  Matrix2cd G;
  G << a, b, c, a;
  return G;
}

BlockTransform finalize(cd a, const BlockPoint& p, int iters) {
  const ScalarEq eq{p.eta, p.rho, p.z.real() * p.z.real(), p.z.imag() * p.z.imag()};
  a = polish(a, eq);
  if (!(a.imag() > 0.0))
    throw SolverError("solve_gamma: solution lost the upper-half-plane property");
  const auto [b, c] = bc_from_a(a, p.eta, p.z, p.rho);
  Matrix2cd G;
  G << a, b, c, a;
  const double res = matrix_residual(G, q_matrix(p.eta, p.z), p.rho);
  if (!(res <= 1e-9))
    throw SolverError("solve_gamma: residual " + std::to_string(res) + " above tolerance");
  return {a, b, c, res, iters};
}

}  // namespace

Eigen::Matrix2cd sigma_op(const Eigen::Matrix2cd& M, double rho) {
  Matrix2cd S;
  S << M(1, 1), rho * M(1, 0), rho * M(0, 1), M(0, 0);
  return S;
}

BlockTransform solve_gamma(const BlockPoint& p) {
  const Matrix2cd q = q_matrix(p.eta, p.z);
  Matrix2cd G0 = Matrix2cd::Zero();
  G0(0, 0) = G0(1, 1) = -1.0 / p.eta;
  const PicardOut direct = picard(G0, q, p.rho, 10000);
  if (direct.ok) return finalize(0.5 * (direct.G(0, 0) + direct.G(1, 1)), p, direct.iters);

  // Homotopy: lower Im(eta) from 1 to the target, tracking the branch by
  // warm-started Picard plus Newton, with polynomial root selection where
  // the iteration stalls.
  const double R = p.z.real() * p.z.real(), I = p.z.imag() * p.z.imag();
  const double E = p.eta.real(), t_target = p.eta.imag();
  std::vector<double> rungs;
  for (double t = 1.0; t > t_target; t *= 0.5) rungs.push_back(t);
  rungs.push_back(t_target);

  int iters = direct.iters;
  cd a_cur = 0.0;
  bool have = false;
  for (double t : rungs) {
    const cd eta_t(E, t);
    const ScalarEq eqt{eta_t, p.rho, R, I};
    const cd a0 = have ? a_cur : -1.0 / eta_t;
    const PicardOut pic = picard(block_from_a(a0, eta_t, p.z, p.rho), q_matrix(eta_t, p.z), p.rho, 1500);
    iters += pic.iters;
    cd a_t = polish(0.5 * (pic.G(0, 0) + pic.G(1, 1)), eqt);
    bool good = a_t.imag() > 0.0 && std::abs(eqt.f(a_t)) <= 1e-11;
    // Newton may land on the wrong sheet where two admissible roots coexist;
    // a jump relative to the tracked branch sends us to explicit selection.
    if (good && have && std::abs(a_t - a_cur) > 0.5 * (1.0 + std::abs(a_cur))) good = false;
    if (!good) {
      const auto sel = select_root(eta_t, p.rho, R, I, have ? a_cur : a0);
      if (!sel)
        throw SolverError("solve_gamma: no admissible root during homotopy at Im(eta)=" +
                          std::to_string(t));
      a_t = *sel;
    }
    a_cur = a_t;
    have = true;
  }
  return finalize(a_cur, p, iters);
}

BlockTransform solve_gamma(const BlockPoint& p, cd a_warm) {
  if (finite_cd(a_warm) && a_warm.imag() > 0.0) {
    const ScalarEq eq{p.eta, p.rho, p.z.real() * p.z.real(), p.z.imag() * p.z.imag()};
    const cd a = polish(a_warm, eq);
    const bool good = a.imag() > 0.0 && std::abs(eq.f(a)) <= 1e-11 &&
                      std::abs(a - a_warm) <= 0.5 * (1.0 + std::abs(a_warm));
    if (good) {
      try {
        return finalize(a, p, 0);
      } catch (const SolverError&) {
        // warm branch rejected, fall through to the cold path
      }
    }
  }
  return solve_gamma(p);
}

cd scalar_residual(cd a, const BlockPoint& p) {
  const cd P = p.eta + (1.0 + p.rho) * a;
  const cd M = p.eta + (1.0 - p.rho) * a;
  const cd D = (a + p.eta) * a;
  if (a == cd(0.0) || D == cd(0.0) || P == cd(0.0) || M == cd(0.0))
    throw std::domain_error("scalar_residual: evaluation at a pole");
  return 1.0 / D + 1.0 - p.z.real() * p.z.real() / (P * P) - p.z.imag() * p.z.imag() / (M * M);
}

namespace {

// Richardson step in t: the extension to the real axis is linear in t to
// leading order off the support edge. A scan keeps the previous solutions as
// warm starts, so stepping x in small increments costs a few Newton steps per
// point; a solver failure resets the warm state.
class DensityScan {
 public:
  DensityScan(double rho, cd z, double t_small) : rho_(rho), z_(z), t_(t_small) {}

  double operator()(double x) {
    const BlockPoint p2(cd(x, 2.0 * t_), z_, rho_);
    const BlockPoint p1(cd(x, t_), z_, rho_);
    try {
      const BlockTransform g2 = have_ ? solve_gamma(p2, w2_) : solve_gamma(p2);
      const BlockTransform g1 = solve_gamma(p1, have_ ? w1_ : g2.a);
      w1_ = g1.a;
      w2_ = g2.a;
      have_ = true;
      return std::max(0.0, (2.0 * g1.a.imag() - g2.a.imag()) / std::numbers::pi);
    } catch (...) {
      have_ = false;
      throw;
    }
  }

 private:
  double rho_;
  cd z_;
  double t_;
  cd w1_{0.0, 0.0}, w2_{0.0, 0.0};
  bool have_ = false;
};

}  // namespace

DensityProfile density_nu(double rho, cd z, const std::vector<double>& x_grid, double t_small) {
  if (!(t_small >= 1e-8 && t_small <= 1e-3))
    throw std::domain_error("density_nu: t_small outside [1e-8, 1e-3]");
  DensityProfile prof;
  prof.z = z;
  DensityScan scan(rho, z, t_small);
  for (double x : x_grid) {
    double p = std::numeric_limits<double>::quiet_NaN();
    try {
      p = scan(x);
    } catch (const SolverError&) {
      // flagged point, not fatal
    }
    prof.grid.emplace_back(x, p);
  }
  prof.support_gap = support_gap(rho, z);
  return prof;
}

double support_gap(double rho, cd z) {
  constexpr double kThresh = 1e-6, kT = 5e-5;
  DensityScan pd(rho, z, kT);
  try {
    if (pd(0.0) > kThresh) return 0.0;
    const BlockTransform g0 = solve_gamma(BlockPoint(cd(0.0, 1e-8), z, rho));
    if (std::abs(g0.a) > 1e-3) return 0.0;  // continuous extension must vanish
  } catch (const SolverError&) {
    return 0.0;
  }
  const double xmax = std::abs(z) + 3.0;
  double lo = 0.0, hi = -1.0;
  for (double x = 0.02; x <= xmax; x += 0.02) {
    if (pd(x) > kThresh) {
      hi = x;
      break;
    }
    lo = x;
  }
  if (hi < 0.0) return xmax;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (pd(mid) <= kThresh ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

cd squared_sv_transform(double rho, cd z, cd zeta) {
  if (!(zeta.imag() > 0.0))
    throw std::domain_error("squared_sv_transform: Im(zeta) must be positive");
  const cd eta = std::sqrt(zeta);  // principal branch lands in the upper half plane
  return solve_gamma(BlockPoint(eta, z, rho)).a / eta;
}

}  // namespace ellab
