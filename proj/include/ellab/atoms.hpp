#pragma once

#include "ellab/rng.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ellab {

// Entry-pair distributions: each off-diagonal pair (y_ij, y_ji), i < j, is an
// iid copy of a mean-zero, unit-variance pair (xi1, xi2) with E[xi1 xi2] = rho.

enum class AtomFamily { gaussian, rademacher_mixture, uniform_pair, custom_table };
enum class DiagFamily { same_as_offdiag_marginal, zero, gaussian };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite-support joint law given as rows (x, y, p). Probabilities must sum to
// one; marginal means 0 and variances 1 are validated to 1e-12 at load.
struct CustomTableRow {
  double x, y, p;
};

struct AtomPairSpec {
  AtomFamily family = AtomFamily::gaussian;
  double rho = 0.0;
  DiagFamily diag_family = DiagFamily::same_as_offdiag_marginal;
  std::vector<CustomTableRow> table;  // custom_table only

  void validate() const;  // throws ConfigError
};

struct AtomMoments {
  double mean1, var1, rho, m4;  // m4 = max of the two marginal fourth moments
};

// One draw of (xi1, xi2) from the joint law.
std::pair<double, double> sample_atom_pair(const AtomPairSpec& spec, SeededRng& rng);

// One draw from the diagonal law.
double sample_diag_atom(const AtomPairSpec& spec, SeededRng& rng);

AtomMoments atom_moments(const AtomPairSpec& spec);

// Bounded surrogate of a pair law: xi_tilde = xi 1{|xi| <= L} - E[xi 1{|xi| <= L}],
// xi_hat = xi_tilde / sqrt(var xi_tilde). Draws satisfy |xi_hat| <= 4L, and the
// pair correlation moves from rho to rho_hat. Diagonal atoms are set to zero.
struct TruncatedAtomSpec {
  AtomPairSpec base;
  double level_L = 0.0;
  double center_1 = 0.0, center_2 = 0.0;  // E[xi_i 1{|xi_i| <= L}]
  double scale_1 = 1.0, scale_2 = 1.0;    // 1/sqrt(var of truncated-centered)
  double rho_hat = 0.0;
};

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Computes the centering/scaling constants and rho_hat. Closed forms for
// gaussian marginals and rademacher; adaptive quadrature (abs tol 1e-10) for
// the gaussian cross moment and the uniform family; exact sums for tables.
// Throws TruncationError when either truncated variance drops below 1/2
// ("L below L0").
TruncatedAtomSpec truncate_atoms(const AtomPairSpec& spec, double L);

std::pair<double, double> sample_atom_pair(const TruncatedAtomSpec& spec, SeededRng& rng);

std::string family_name(AtomFamily f);
std::string diag_family_name(DiagFamily f);
AtomFamily family_from_name(const std::string& s);    // throws ConfigError
DiagFamily diag_family_from_name(const std::string& s);

}  // namespace ellab
