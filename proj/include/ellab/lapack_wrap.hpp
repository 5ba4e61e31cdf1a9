#pragma once

#include <Eigen/Dense>

#include <stdexcept>

// Thin bindings over backward-stable dense decompositions. Inputs are taken
// by value where the backend overwrites its workspace. All routines throw
// LapackError on nonzero info; failures are never masked.

namespace ellab::lp {

struct LapackError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigenvalues of a general complex matrix; right eigenvectors when V != nullptr.
Eigen::VectorXcd eig_complex(Eigen::MatrixXcd A, Eigen::MatrixXcd* V = nullptr);

// Real input path (conjugate pairs reconstructed into complex vectors).
Eigen::VectorXcd eig_real(Eigen::MatrixXd A, Eigen::MatrixXcd* V = nullptr);

// Singular values, descending.
Eigen::VectorXd sv_complex(Eigen::MatrixXcd A);
Eigen::VectorXd sv_real(Eigen::MatrixXd A);

// Full SVD A = U diag(S) VT (VT is V^*, returned as stored).
void svd_complex(Eigen::MatrixXcd A, Eigen::VectorXd& S, Eigen::MatrixXcd& U,
                 Eigen::MatrixXcd& VT);

// Real Schur form A = Q T Q^T with T upper quasi-triangular; eigenvalues out
// through w.
void schur_real(Eigen::MatrixXd A, Eigen::MatrixXd& T, Eigen::MatrixXd& Q,
                Eigen::VectorXcd& w);

// Solution of A X = B by LU with partial pivoting.
Eigen::MatrixXcd solve_complex(Eigen::MatrixXcd A, Eigen::MatrixXcd B);

}  // namespace ellab::lp
