#pragma once

#include "ellab/block_stieltjes.hpp"
#include "ellab/ensemble.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace ellab {

// Full eigenvalue set of a dense matrix plus a backward-error certificate:
// residual_bound is the max of ||Mv - lambda v|| / ||M||_F over ten
// deterministically chosen eigenpairs (all pairs when n <= 10).
struct SpectrumSummary {
  Eigen::VectorXcd eigenvalues;
  double spectral_radius = 0.0;
  double residual_bound = 0.0;
};

SpectrumSummary eigenvalues(const Eigen::MatrixXcd& M);
SpectrumSummary eigenvalues(const Eigen::MatrixXd& M);

// Singular values of X - zI, descending; least_singular is the smallest.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& X, cd z);
double least_singular(const Eigen::MatrixXcd& X, cd z);

struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// u^* (X - zI)^{-1} v by one linear solve. Requires unit u, v and
// least_singular(X, z) > 1e-10, else ConditioningError; the solve residual
// ||(X - zI)x - v|| must clear 1e-10 * (||X - zI||_F ||x|| + 1).
cd resolvent_bilinear(const Eigen::MatrixXcd& X, cd z, const Eigen::VectorXcd& u,
                      const Eigen::VectorXcd& v);

// Average of the diagonal 2x2 blocks of (H - I (x) q)^{-1} where H is the
// Hermitization of X - zI and q = [[eta, z], [conj z, eta]].
struct EmpiricalBlockTransform {
  cd a_N, b_N, c_N;
};

// SVD of the shifted matrix, reused across eta: with X - zI = U S V^* the
// block resolvent diagonalizes per singular triplet, so each eta costs O(n).
// w_i = v_i^* u_i couples the off-diagonal entries.
class ShiftedSvd {
 public:
  ShiftedSvd(const Eigen::MatrixXcd& X, cd z);

  cd z() const { return z_; }
  const Eigen::VectorXd& sigma() const { return sigma_; }

  EmpiricalBlockTransform transform(cd eta) const;

 private:
  cd z_;
  Eigen::VectorXd sigma_;
  Eigen::VectorXcd w_;
};

EmpiricalBlockTransform empirical_block_stieltjes(const Eigen::MatrixXcd& X, const BlockPoint& p);

// Fractions of a point cloud inside the delta-neighborhood of E_rho and
// inside the similar ellipse with semi-axes scaled by t_scale in (0, 1].
struct EsdStats {
  double frac_in_Edelta = 0.0;
  double frac_in_scaled = 0.0;
};
EsdStats esd_stats(const std::vector<cd>& eigs, double rho, double delta, double t_scale);

// Bounded planar region an epsilon-net is drawn over. ellipse_shell is
// { z : dist_min <= dist(z, E_rho) <= dist_max, |z| <= mod_max }.
struct NetRegion {
  enum class Kind { disk, interval, ellipse_shell };
  Kind kind = Kind::disk;
  double radius = 0.0;    // disk
  double a = 0.0, b = 0.0;  // interval endpoints
  double rho = 0.0;
  double dist_min = 0.0, dist_max = 0.0, mod_max = 0.0;

  static NetRegion disk(double M);
  static NetRegion interval(double a, double b);
  static NetRegion ellipse_shell(double rho, double dist_min, double dist_max, double mod_max);

  bool contains(cd z) const;
  // Closed bounding box [x_lo, x_hi] x [y_lo, y_hi].
  double x_lo() const;
  double x_hi() const;
  double y_lo() const;
  double y_hi() const;
};

// Greedy separated subset of a fine lattice over the region, ordered from the
// box centroid outward. Lattice pitch eps/20 and separation eps(1 - sqrt(2)/40)
// make every region point provably within eps of the net.
std::vector<cd> epsilon_net(const NetRegion& region, double eps);

// det(I_k + B (X - zI)^{-1} A): zero exactly at the eigenvalues of X + AB
// that are not eigenvalues of X. Empty factors give 1.
cd perturbation_determinant(const Eigen::MatrixXcd& X, cd z, const LowRankFactors& f);

}  // namespace ellab
