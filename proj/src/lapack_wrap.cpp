#include "ellab/lapack_wrap.hpp"

#include <lapacke.h>

#include <string>

namespace ellab::lp {

namespace {

[[noreturn]] void fail(const char* routine, lapack_int info) {
  throw LapackError(std::string(routine) + " failed with info=" + std::to_string(info));
}

}  // namespace

Eigen::VectorXcd eig_complex(Eigen::MatrixXcd A, Eigen::MatrixXcd* V) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::VectorXcd w(n);
  if (V) V->resize(n, n);
  Eigen::MatrixXcd dummy(1, 1);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', V ? 'V' : 'N', n, A.data(), n, w.data(),
                    dummy.data(), 1, V ? V->data() : dummy.data(), V ? n : 1);
  if (info != 0) fail("zgeev", info);
  return w;
}

Eigen::VectorXcd eig_real(Eigen::MatrixXd A, Eigen::MatrixXcd* V) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::VectorXd wr(n), wi(n);
  Eigen::MatrixXd VR(V ? n : 1, V ? n : 1);
  Eigen::MatrixXd dummy(1, 1);
  const lapack_int info =
      LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', V ? 'V' : 'N', n, A.data(), n, wr.data(), wi.data(),
                    dummy.data(), 1, VR.data(), V ? n : 1);
  if (info != 0) fail("dgeev", info);
  Eigen::VectorXcd w(n);
  for (lapack_int i = 0; i < n; ++i) w(i) = {wr(i), wi(i)};
  if (V) {
    V->resize(n, n);
    for (lapack_int j = 0; j < n; ++j) {
      if (wi(j) > 0.0) {  // conjugate pair stored as two real columns
        V->col(j) = VR.col(j) + std::complex<double>(0, 1) * VR.col(j + 1);
        V->col(j + 1) = VR.col(j) - std::complex<double>(0, 1) * VR.col(j + 1);
        ++j;
      } else {
        V->col(j) = VR.col(j).cast<std::complex<double>>();
      }
    }
  }
  return w;
}

Eigen::VectorXd sv_complex(Eigen::MatrixXcd A) {
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  Eigen::VectorXd S(std::min(m, n));
  Eigen::MatrixXcd dummy(1, 1);
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, A.data(), m, S.data(),
                                         dummy.data(), 1, dummy.data(), 1);
  if (info != 0) fail("zgesdd", info);
  return S;
}

Eigen::VectorXd sv_real(Eigen::MatrixXd A) {
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  Eigen::VectorXd S(std::min(m, n));
  Eigen::MatrixXd dummy(1, 1);
  const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, A.data(), m, S.data(),
                                         dummy.data(), 1, dummy.data(), 1);
  if (info != 0) fail("dgesdd", info);
  return S;
}

void svd_complex(Eigen::MatrixXcd A, Eigen::VectorXd& S, Eigen::MatrixXcd& U,
                 Eigen::MatrixXcd& VT) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  S.resize(n);
  U.resize(n, n);
  VT.resize(n, n);
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', n, n, A.data(), n, S.data(),
                                         U.data(), n, VT.data(), n);
  if (info != 0) fail("zgesdd", info);
}

void schur_real(Eigen::MatrixXd A, Eigen::MatrixXd& T, Eigen::MatrixXd& Q,
                Eigen::VectorXcd& w) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Q.resize(n, n);
  Eigen::VectorXd wr(n), wi(n);
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, A.data(), n,
                                        &sdim, wr.data(), wi.data(), Q.data(), n);
  if (info != 0) fail("dgees", info);
  T = std::move(A);
  w.resize(n);
  for (lapack_int i = 0; i < n; ++i) w(i) = {wr(i), wi(i)};
}

Eigen::MatrixXcd solve_complex(Eigen::MatrixXcd A, Eigen::MatrixXcd B) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  const lapack_int nrhs = static_cast<lapack_int>(B.cols());
  Eigen::VectorX<lapack_int> ipiv(n);
  const lapack_int info =
      LAPACKE_zgesv(LAPACK_COL_MAJOR, n, nrhs, A.data(), n, ipiv.data(), B.data(), n);
  if (info != 0) fail("zgesv", info);
  return B;
}

}  // namespace ellab::lp
