#pragma once

#include "ellab/atoms.hpp"
#include "ellab/limitlaw.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ellab {

// Dense real matrix Y with iid cross-diagonal entry pairs: (y_ij, y_ji) for
// i < j drawn from the pair law, diagonal from the diagonal law. Entries are
// a pure function of (seed, i, j), so fill order cannot change the output.
struct EllipticMatrix {
  int n = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd Y;

  Eigen::MatrixXd normalized() const { return Y / std::sqrt(static_cast<double>(n)); }
};

EllipticMatrix sample_elliptic(int n, const AtomPairSpec& spec, std::uint64_t seed);

// Truncated ensembles zero the diagonal to match the bounded-entry surrogate.
EllipticMatrix sample_elliptic(int n, const TruncatedAtomSpec& spec, std::uint64_t seed);

enum class PerturbationKind { diagonal_eigs, rank_one, mean_shift };

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::diagonal_eigs;
  std::vector<cd> eigs;   // diagonal_eigs
  Eigen::VectorXcd u, v;  // rank_one: u v^*
  cd mu = 0.0;            // mean_shift: mu sqrt(n) phi phi^*, phi = ones/sqrt(n)
  int k = 0;              // rank bound

  // Eigenvalues of the realized matrix that feed the outlier prediction.
  // mean_shift scales with n: its single eigenvalue is mu sqrt(n).
  std::vector<cd> spectrum(int n) const;
};

std::string perturbation_kind_name(PerturbationKind k);
PerturbationKind perturbation_kind_from_name(const std::string& s);  // throws ConfigError

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Eigen::MatrixXcd build_perturbation(int n, const PerturbationSpec& p);

// Thin factors C = A B with A (n x k), B (k x n) from an SVD of C. Throws
// RankError when the numerical rank at tolerance tol exceeds max_rank
// (max_rank < 0 disables the bound). C = 0 yields empty factors.
struct LowRankFactors {
  Eigen::MatrixXcd A, B;
  int k = 0;
};
LowRankFactors factor_low_rank(const Eigen::MatrixXcd& C, double tol, int max_rank = -1);

// Exact factors for a structured perturbation; avoids the dense SVD.
LowRankFactors factor_perturbation(int n, const PerturbationSpec& p);

// [[0, X - zI], [(X - zI)^*, 0]]: Hermitian, eigenvalues +/- sigma_i(X - zI).
Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& X, cd z);

}  // namespace ellab
