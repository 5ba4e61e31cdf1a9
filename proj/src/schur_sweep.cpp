#include "ellab/schur_sweep.hpp"

#include "ellab/lapack_wrap.hpp"

#include <cmath>
#include <limits>

namespace ellab {

RealSchurSweep::RealSchurSweep(const Eigen::MatrixXd& X) : n_(static_cast<int>(X.rows())) {
  lp::schur_real(X, T_, Q_, eigs_);
  for (int k = 0; k < n_;) {
    blocks_.push_back(k);
    k += (k + 1 < n_ && T_(k + 1, k) != 0.0) ? 2 : 1;
  }
}

void RealSchurSweep::solve_in_place(cd z, Eigen::Ref<Eigen::MatrixXcd> B) const {
  const int p = static_cast<int>(B.cols());
  for (int bi = static_cast<int>(blocks_.size()) - 1; bi >= 0; --bi) {
    const int k = blocks_[bi];
    const int next = bi + 1 < static_cast<int>(blocks_.size()) ? blocks_[bi + 1] : n_;
    if (next - k == 1) {
      const cd d = T_(k, k) - z;
      const double* col = T_.data() + static_cast<std::ptrdiff_t>(k) * n_;
      for (int c = 0; c < p; ++c) {
        cd* bc = B.data() + static_cast<std::ptrdiff_t>(c) * B.outerStride();
        const cd xk = bc[k] / d;
        bc[k] = xk;
        for (int i = 0; i < k; ++i) bc[i] -= col[i] * xk;
      }
    } else {
      const cd a11 = T_(k, k) - z, a12 = T_(k, k + 1);
      const cd a21 = T_(k + 1, k), a22 = T_(k + 1, k + 1) - z;
      const cd det = a11 * a22 - a12 * a21;
      const double* c1 = T_.data() + static_cast<std::ptrdiff_t>(k) * n_;
      const double* c2 = T_.data() + static_cast<std::ptrdiff_t>(k + 1) * n_;
      for (int c = 0; c < p; ++c) {
        cd* bc = B.data() + static_cast<std::ptrdiff_t>(c) * B.outerStride();
        const cd b1 = bc[k], b2 = bc[k + 1];
        const cd x1 = (b1 * a22 - a12 * b2) / det;
        const cd x2 = (a11 * b2 - a21 * b1) / det;
        bc[k] = x1;
        bc[k + 1] = x2;
        for (int i = 0; i < k; ++i) bc[i] -= c1[i] * x1 + c2[i] * x2;
      }
    }
  }
}

void RealSchurSweep::solve_adjoint_in_place(cd z, Eigen::Ref<Eigen::MatrixXcd> B) const {
  const cd zb = std::conj(z);
  const int p = static_cast<int>(B.cols());
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    const int k = blocks_[bi];
    const int next = bi + 1 < blocks_.size() ? blocks_[bi + 1] : n_;
    const double* c1 = T_.data() + static_cast<std::ptrdiff_t>(k) * n_;
    if (next - k == 1) {
      const cd d = T_(k, k) - zb;
      for (int c = 0; c < p; ++c) {
        cd* bc = B.data() + static_cast<std::ptrdiff_t>(c) * B.outerStride();
        cd acc = 0.0;
        for (int i = 0; i < k; ++i) acc += c1[i] * bc[i];
        bc[k] = (bc[k] - acc) / d;
      }
    } else {
      const double* c2 = T_.data() + static_cast<std::ptrdiff_t>(k + 1) * n_;
      const cd a11 = T_(k, k) - zb, a12 = T_(k + 1, k);
      const cd a21 = T_(k, k + 1), a22 = T_(k + 1, k + 1) - zb;
      const cd det = a11 * a22 - a12 * a21;
      for (int c = 0; c < p; ++c) {
        cd* bc = B.data() + static_cast<std::ptrdiff_t>(c) * B.outerStride();
        cd acc1 = 0.0, acc2 = 0.0;
        for (int i = 0; i < k; ++i) {
          acc1 += c1[i] * bc[i];
          acc2 += c2[i] * bc[i];
        }
        const cd b1 = bc[k] - acc1, b2 = bc[k + 1] - acc2;
        bc[k] = (b1 * a22 - a12 * b2) / det;
        bc[k + 1] = (a11 * b2 - a21 * b1) / det;
      }
    }
  }
}

Eigen::VectorXcd RealSchurSweep::apply_shifted(cd z, const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd w(n_);
  w.real() = T_ * v.real();
  w.imag() = T_ * v.imag();
  return w - z * v;
}

Eigen::VectorXcd RealSchurSweep::apply_shifted_adjoint(cd z, const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd w(n_);
  w.real() = T_.transpose() * v.real();
  w.imag() = T_.transpose() * v.imag();
  return w - std::conj(z) * v;
}

double RealSchurSweep::least_singular(cd z, double rel_tol, int max_iter) const {
  if (warm_min_.size() != n_)
    warm_min_ = Eigen::VectorXcd::Constant(n_, cd(1.0 / std::sqrt(n_), 0.0));
  Eigen::VectorXcd v = warm_min_;
  double prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd w = v;
    solve_adjoint_in_place(z, w);
    solve_in_place(z, w);
    if (!w.allFinite()) return 0.0;  // shift numerically hit an eigenvalue
    const double nw = w.norm();
    if (!(nw > 0.0) || !std::isfinite(nw)) return 0.0;
    v = w / nw;
    const double est = 1.0 / std::sqrt(nw);
    if (it >= 1 && std::abs(est - prev) <= rel_tol * est) {
      prev = est;
      break;
    }
    prev = est;
  }
  warm_min_ = v;
  return apply_shifted(z, v).norm();
}

double RealSchurSweep::sigma_max(cd z, double rel_tol, int max_iter) const {
  if (warm_max_.size() != n_)
    warm_max_ = Eigen::VectorXcd::Constant(n_, cd(1.0 / std::sqrt(n_), 0.0));
  Eigen::VectorXcd v = warm_max_;
  double prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXcd w = apply_shifted_adjoint(z, apply_shifted(z, v));
    const double nw = w.norm();
    if (!(nw > 0.0)) break;  // X - zI = 0
    v = w / nw;
    const double est = std::sqrt(nw);
    if (it >= 1 && std::abs(est - prev) <= rel_tol * est) {
      prev = est;
      break;
    }
    prev = est;
  }
  warm_max_ = v;
  return apply_shifted(z, v).norm();
}

Eigen::VectorXcd RealSchurSweep::rotate(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out(n_);
  out.real() = Q_.transpose() * v.real();
  out.imag() = Q_.transpose() * v.imag();
  return out;
}

Eigen::VectorXcd RealSchurSweep::rotate_back(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out(n_);
  out.real() = Q_ * v.real();
  out.imag() = Q_ * v.imag();
  return out;
}

Eigen::VectorXcd RealSchurSweep::resolvent_solve(cd z, const Eigen::VectorXcd& rhs) const {
  Eigen::VectorXcd y = rotate(rhs);
  solve_in_place(z, y);
  return rotate_back(y);
}

Eigen::VectorXcd RealSchurSweep::bilinear_rotated(cd z, const Eigen::MatrixXcd& U_rot,
                                                  const Eigen::MatrixXcd& V_rot) const {
  Eigen::MatrixXcd Xs = V_rot;
  solve_in_place(z, Xs);
  const int p = static_cast<int>(U_rot.cols());
  Eigen::VectorXcd out(p);
  for (int i = 0; i < p; ++i) out(i) = U_rot.col(i).dot(Xs.col(i));
  return out;
}

}  // namespace ellab
