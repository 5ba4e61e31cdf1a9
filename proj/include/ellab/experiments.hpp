#pragma once

#include "ellab/atoms.hpp"
#include "ellab/block_stieltjes.hpp"
#include "ellab/ensemble.hpp"
#include "ellab/limitlaw.hpp"
#include "ellab/spectra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ellab {

// Every statistical gate reads from here, so a report can cite the exact
// numbers it was judged against. Defaults are the calibrated values the
// acceptance run uses.
struct GateThresholds {
  double outlier_count_rate = 0.90;  // trials with exactly j outliers
  double outlier_match_rate = 0.90;  // matches within the n^{-1/4} radius
  double outlier_match_tol = 0.25;   // fixed-tolerance companion statistic
  double radius_tol = 0.15;          // |mean radius - (1 + |rho|)|
  double scaled_frac_lo = 0.20;      // eigenvalue fraction in the t-scaled ellipse
  double scaled_frac_hi = 0.30;
  double band_frac = 0.99;           // eigenvalue fraction in the delta band
  double lsv_floor = 0.02;           // min sigma_n over the grid
  double lsv_gap_factor = 0.5;       // sigma_n >= factor * support_gap
  double lsv_gap_rate = 0.95;        // fraction of (point, trial) pairs above
  double mean_shift_tol = 0.5;       // |lambda_out - mu sqrt(n)|
  double mean_shift_rate = 0.90;
  double iso_sup_tol = 0.15;         // sup_z |u* G v - m u* v|
  double iso_rate = 0.90;
  double gamma_tol = 0.05;           // mean entrywise |Gamma_N - Gamma| at Im(eta) = 1
  double cond_max = 500.0;           // max sigma_1 / sigma_n
};

// Deterministic test matrix for the bilinear concentration harness; identity
// keeps ||B|| = 1, scaled_identity uses n^{1/4} I, the largest norm the
// hypothesis ||B|| <= n^{1/4} admits (and the scale at which the n^{-1/8}
// tail threshold actually bites at desk-size n).
enum class BilinearB { identity, scaled_identity };

struct ExperimentConfig {
  std::vector<int> n_list{1000};
  int trials = 10;
  double rho = 0.0;
  AtomFamily family = AtomFamily::gaussian;
  DiagFamily diag_family = DiagFamily::same_as_offdiag_marginal;
  std::vector<CustomTableRow> table;  // custom_table atoms
  double delta = 0.1;
  std::uint64_t seed = 1;
  std::optional<PerturbationSpec> perturbation;
  double trunc_level = 0.0;  // > 0 samples the truncated surrogate ensemble
  cd z{2.25, 0.0};           // single-point experiments (condition number)
  double t_scale = 0.5;      // esd scaled-ellipse factor
  double eps_net = 0.2;      // net pitch for lsv / isotropic sweeps
  double lsv_dist_max = 0.0; // <= 0 means delta + 2
  BilinearB bilinear_b = BilinearB::scaled_identity;
  GateThresholds gates;

  void validate() const;  // throws ConfigError
  AtomPairSpec atom_spec() const;
};

// Canonical key=value rendering of every config field, and its 64-bit
// fingerprint. Reports embed the fingerprint so a run can be tied to the
// exact configuration that produced it.
std::string config_canonical(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

struct ReportMeta {
  std::uint64_t seed = 0;
  std::string config_hash;
};

// ---- outlier localization --------------------------------------------------

struct OutlierTrial {
  std::uint64_t trial_seed = 0;
  std::vector<cd> observed;                 // eigenvalues with dist > 2 delta
  std::vector<std::pair<int, int>> matching;  // (predicted index, observed index)
  std::vector<double> distances;            // per matched pair
  bool count_match = false;                 // |observed| == j
  bool solver_failed = false;
};

struct OutlierReport {
  ReportMeta meta;
  int n = 0;
  std::vector<cd> predicted;
  int j = 0;
  bool band_violation = false;
  std::vector<OutlierTrial> trials;
  int skipped = 0;
  double count_rate = 0.0;        // over all trials; failures count against
  double match_rate_radius = 0.0; // distances <= n^{-1/4}
  double match_rate_fixed = 0.0;  // distances <= gates.outlier_match_tol
  double dist_q50 = 0.0, dist_q90 = 0.0, dist_max = 0.0;
  bool pass = false;
};

// Greedy matching used by the outlier experiment: predictions in descending
// modulus order each take the nearest unmatched observed point (distance
// ties broken toward the observed point of smaller modulus). Injective by
// construction; with well-separated predictions it coincides with the
// optimal assignment.
std::vector<std::pair<int, int>> greedy_match(const std::vector<cd>& predicted,
                                              const std::vector<cd>& observed);

// Samples X + C per trial, collects eigenvalues outside the 2 delta band and
// greedily matches them to the limit predictions via greedy_match. Uses the
// largest n in n_list. Requires a diagonal_eigs or rank_one perturbation.
OutlierReport run_outlier_experiment(const ExperimentConfig& cfg);

// ---- spectral radius -------------------------------------------------------

struct RadiusRow {
  int n = 0;
  double mean_radius = 0.0;
  double sd = 0.0;
};

struct RadiusReport {
  ReportMeta meta;
  double limit = 0.0;  // 1 + |rho|
  std::vector<RadiusRow> rows;
  bool pass = false;  // largest n within gates.radius_tol of the limit
};

RadiusReport run_spectral_radius(const ExperimentConfig& cfg);

// ---- least singular value sweep ---------------------------------------------

struct LsvPoint {
  cd z;
  double min_sigma = 0.0;
  double mean_sigma = 0.0;
  double mean_cond = 0.0;
  double support_gap = 0.0;
  int gap_hits = 0;  // trials with sigma_n >= gap_factor * support_gap
};

struct LsvReport {
  ReportMeta meta;
  int n = 0;
  std::vector<LsvPoint> grid;
  double min_sigma_overall = 0.0;
  double gap_rate = 0.0;  // over (point, trial) pairs
  bool floor_ok = false;
  bool gap_ok = false;
  bool pass = false;
};

// eps_net grid on { dist(z, E_rho) in [delta, lsv_dist_max], |z| <= 6 },
// swept in a locality order so the shifted inverse iterations stay warm.
LsvReport run_lsv_sweep(const ExperimentConfig& cfg);

// ---- nonzero mean ----------------------------------------------------------

struct MeanShiftTrial {
  std::uint64_t trial_seed = 0;
  int outliers = 0;       // eigenvalues outside the delta band
  cd lambda_out{0.0, 0.0};
  double deviation = 0.0; // |lambda_out - mu sqrt(n)|
  bool ok = false;
  bool solver_failed = false;
};

struct MeanShiftReport {
  ReportMeta meta;
  int n = 0;
  cd target{0.0, 0.0};  // mu sqrt(n)
  std::vector<MeanShiftTrial> trials;
  double ok_rate = 0.0;
  bool pass = false;
};

// Requires a mean_shift perturbation. A trial passes with exactly one
// eigenvalue outside E_{rho,delta}, within mean_shift_tol of mu sqrt(n);
// mu = 0 inverts the check (no outlier at all).
MeanShiftReport run_nonzero_mean(const ExperimentConfig& cfg);

// ---- isotropic resolvent law -----------------------------------------------

struct IsotropicPair {
  std::string name;             // e1e1, e1e2, random, flat
  cd inner{0.0, 0.0};           // u^* v
  std::vector<double> sup_err;  // per trial, sup over the net
  double pass_rate = 0.0;
  bool pass = false;
};

struct IsotropicReport {
  ReportMeta meta;
  int n = 0;
  int net_size = 0;
  double max_probe_defect = 0.0;  // worst eigenbasis validation residual
  std::vector<IsotropicPair> pairs;
  bool pass = false;
};

// sup over an eps_net of { dist >= delta, |z| <= 6 } of |u^* G_N(z) v -
// m(z) u^* v| for the four canonical vector pairs. Resolvent bilinears are
// evaluated through the eigenbasis of X (O(n) per z after one
// decomposition), validated against a direct residual-checked solve at a
// probe point each trial.
IsotropicReport run_isotropic_check(const ExperimentConfig& cfg);

// ---- bilinear concentration ------------------------------------------------

struct BilinearRow {
  int n = 0;
  double tail_freq = 0.0;    // P[(1/n)|x^T B y - rho_hat tr B| >= n^{-1/8}]
  double mean_stat = 0.0;
  double median_stat = 0.0;
};

struct BilinearReport {
  ReportMeta meta;
  double rho_hat = 0.0;  // centering constant of the truncated pair
  std::vector<BilinearRow> rows;
  bool decay_ok = false;  // tail at the largest n <= tail at the smallest
  bool pass = false;
};

// Requires trunc_level > 0 (the hypothesis is bounded entries). Samples
// vector pairs with correlated coordinates; B is the deterministic matrix
// selected by bilinear_b.
BilinearReport run_bilinear_concentration(const ExperimentConfig& cfg);

// ---- elliptic law uniformity -----------------------------------------------

struct EsdRow {
  int n = 0;
  double frac_scaled = 0.0;
  double frac_band = 0.0;
};

struct EsdReport {
  ReportMeta meta;
  std::vector<EsdRow> rows;
  bool pass = false;
};

// Pools eigenvalues over trials per n; an optional perturbation must have
// rank at most sqrt(n). Gates on the largest n.
EsdReport run_esd_uniformity(const ExperimentConfig& cfg);

// ---- block transform convergence --------------------------------------------

struct GammaCell {
  cd eta, z;
  double mean_err = 0.0;  // mean over trials of max-entry |Gamma_N - Gamma|
};

struct GammaReport {
  ReportMeta meta;
  int n = 0;
  std::vector<GammaCell> cells;
  double max_err_eta1 = 0.0;  // worst cell with Im(eta) = 1
  bool pass = false;          // max_err_eta1 <= gates.gamma_tol
};

// z in {0, 1, 2.25, 3i} (inside and outside E_rho), eta in {i, 0.1i}. One
// SVD per (trial, z) serves both eta. The Im(eta) = 0.1 row converges more
// slowly and is reported without a gate.
GammaReport run_gamma_convergence(const ExperimentConfig& cfg);

// ---- condition number ------------------------------------------------------

struct ConditionReport {
  ReportMeta meta;
  int n = 0;
  cd z;
  std::vector<double> cond;  // per trial sigma_1 / sigma_n of X - zI
  double max_cond = 0.0;
  bool pass = false;
};

ConditionReport run_condition_number(const ExperimentConfig& cfg);

}  // namespace ellab
