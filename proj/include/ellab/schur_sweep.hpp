#pragma once

#include "ellab/limitlaw.hpp"

#include <Eigen/Dense>

namespace ellab {

// One real Schur factorization X = Q T Q^T, then O(n^2) work per complex
// shift: with X - zI = Q (T - zI) Q^T, shifted solves reduce to quasi-
// triangular substitution. Built for sweeps of sigma_min / sigma_max /
// resolvent bilinears over many z with one O(n^3) decomposition.
//
// least_singular and sigma_max warm-start their iteration vectors from the
// previous call, so sweeping nearby shifts in order converges in a few
// steps. The warm state makes instances stateful: not thread-safe.
class RealSchurSweep {
 public:
  explicit RealSchurSweep(const Eigen::MatrixXd& X);

  int n() const { return n_; }
  const Eigen::VectorXcd& eigenvalues() const { return eigs_; }

  // Smallest singular value of X - zI by inverse power iteration on the
  // Gram matrix; the returned value ||(T - zI) v|| at the final unit vector
  // is always an upper bound on sigma_min and meets it at convergence.
  // Sweeps far from the spectrum converge slowly in the vector but fast in
  // the value, so callers that only need a few correct digits can cap
  // max_iter well below the default.
  double least_singular(cd z, double rel_tol = 1e-10, int max_iter = 200) const;

  // Largest singular value of X - zI by power iteration.
  double sigma_max(cd z, double rel_tol = 1e-9, int max_iter = 300) const;

  // (X - zI)^{-1} rhs.
  Eigen::VectorXcd resolvent_solve(cd z, const Eigen::VectorXcd& rhs) const;

  // Coordinates rotated into the Schur basis: rotate = Q^T v, rotate_back = Q v.
  Eigen::VectorXcd rotate(const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd rotate_back(const Eigen::VectorXcd& v) const;

  // Entry i of the result is u_i^* (X - zI)^{-1} v_i for pre-rotated columns
  // u_i = U_rot.col(i), v_i = V_rot.col(i); one multi-RHS sweep per z.
  Eigen::VectorXcd bilinear_rotated(cd z, const Eigen::MatrixXcd& U_rot,
                                    const Eigen::MatrixXcd& V_rot) const;

 private:
  int n_ = 0;
  Eigen::MatrixXd T_, Q_;
  Eigen::VectorXcd eigs_;
  std::vector<int> blocks_;  // start index of each 1x1 / 2x2 diagonal block
  mutable Eigen::VectorXcd warm_min_, warm_max_;

  void solve_in_place(cd z, Eigen::Ref<Eigen::MatrixXcd> B) const;
  void solve_adjoint_in_place(cd z, Eigen::Ref<Eigen::MatrixXcd> B) const;
  Eigen::VectorXcd apply_shifted(cd z, const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd apply_shifted_adjoint(cd z, const Eigen::VectorXcd& v) const;
};

}  // namespace ellab
