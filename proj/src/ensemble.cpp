#include "ellab/ensemble.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace ellab {

namespace {

template <typename PairSampler, typename DiagSampler>
EllipticMatrix fill_matrix(int n, std::uint64_t seed, PairSampler pair, DiagSampler diag) {
  EllipticMatrix m;
  m.n = n;
  m.seed = seed;
  m.Y.resize(n, n);
  for (int i = 0; i < n; ++i) {
    {
      SeededRng rng = SeededRng::for_entry(seed, i, i);
      m.Y(i, i) = diag(rng);
    }
    for (int j = i + 1; j < n; ++j) {
      SeededRng rng = SeededRng::for_entry(seed, i, j);
      const auto [x, y] = pair(rng);
      m.Y(i, j) = x;
      m.Y(j, i) = y;
    }
  }
  return m;
}

}  // namespace

EllipticMatrix sample_elliptic(int n, const AtomPairSpec& spec, std::uint64_t seed) {
  if (n < 1) throw DimensionError("sample_elliptic: n must be positive");
  spec.validate();
  return fill_matrix(
      n, seed, [&](SeededRng& r) { return sample_atom_pair(spec, r); },
      [&](SeededRng& r) { return sample_diag_atom(spec, r); });
}

EllipticMatrix sample_elliptic(int n, const TruncatedAtomSpec& spec, std::uint64_t seed) {
  if (n < 1) throw DimensionError("sample_elliptic: n must be positive");
  return fill_matrix(
      n, seed, [&](SeededRng& r) { return sample_atom_pair(spec, r); },
      [](SeededRng&) { return 0.0; });
}

std::vector<cd> PerturbationSpec::spectrum(int n) const {
  switch (kind) {
    case PerturbationKind::diagonal_eigs:
      return eigs;
    case PerturbationKind::rank_one:
      return {v.dot(u)};  // the one nonzero eigenvalue of u v^*
    case PerturbationKind::mean_shift:
      return {mu * std::sqrt(static_cast<double>(n))};
  }
  return {};
}

std::string perturbation_kind_name(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::diagonal_eigs: return "diagonal_eigs";
    case PerturbationKind::rank_one: return "rank_one";
    case PerturbationKind::mean_shift: return "mean_shift";
  }
  return "diagonal_eigs";
}

PerturbationKind perturbation_kind_from_name(const std::string& s) {
  if (s == "diagonal_eigs") return PerturbationKind::diagonal_eigs;
  if (s == "rank_one") return PerturbationKind::rank_one;
  if (s == "mean_shift") return PerturbationKind::mean_shift;
  throw ConfigError("unknown perturbation kind: " + s);
}

Eigen::MatrixXcd build_perturbation(int n, const PerturbationSpec& p) {
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  switch (p.kind) {
    case PerturbationKind::diagonal_eigs: {
      if (static_cast<int>(p.eigs.size()) > n)
        throw DimensionError("build_perturbation: more eigenvalues than the dimension");
      for (std::size_t i = 0; i < p.eigs.size(); ++i) C(i, i) = p.eigs[i];
      break;
    }
    case PerturbationKind::rank_one: {
      if (p.u.size() != n || p.v.size() != n)
        throw DimensionError("build_perturbation: rank-one vectors must have length n");
      C = p.u * p.v.adjoint();
      break;
    }
    case PerturbationKind::mean_shift: {
      // mu sqrt(n) phi phi^* with phi = ones/sqrt(n): every entry mu/sqrt(n).
      C.setConstant(p.mu / std::sqrt(static_cast<double>(n)));
      break;
    }
  }
  return C;
}

LowRankFactors factor_low_rank(const Eigen::MatrixXcd& C, double tol, int max_rank) {
  LowRankFactors f;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int k = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv(i) > tol * smax) ++k;
  if (max_rank >= 0 && k > max_rank) throw RankError("factor_low_rank: numerical rank exceeds bound");
  f.k = k;
  f.A = svd.matrixU().leftCols(k) * sv.head(k).asDiagonal();
  f.B = svd.matrixV().leftCols(k).adjoint();
  return f;
}

LowRankFactors factor_perturbation(int n, const PerturbationSpec& p) {
  LowRankFactors f;
  switch (p.kind) {
    case PerturbationKind::diagonal_eigs: {
      const int k = static_cast<int>(p.eigs.size());
      f.k = k;
      f.A = Eigen::MatrixXcd::Zero(n, k);
      f.B = Eigen::MatrixXcd::Zero(k, n);
      for (int i = 0; i < k; ++i) {
        f.A(i, i) = p.eigs[i];
        f.B(i, i) = 1.0;
      }
      break;
    }
    case PerturbationKind::rank_one: {
      f.k = 1;
      f.A = p.u;
      f.B = p.v.adjoint();
      break;
    }
    case PerturbationKind::mean_shift: {
      f.k = 1;
      const double rn = std::sqrt(static_cast<double>(n));
      f.A = Eigen::MatrixXcd::Constant(n, 1, p.mu);     // mu sqrt(n) phi
      f.B = Eigen::MatrixXcd::Constant(1, n, 1.0 / rn);  // phi^*
      break;
    }
  }
  return f;
}

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& X, cd z) {
  const int n = static_cast<int>(X.rows());
  Eigen::MatrixXcd S = X - z * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  H.topRightCorner(n, n) = S;
  H.bottomLeftCorner(n, n) = S.adjoint();
  return H;
}

}  // namespace ellab
