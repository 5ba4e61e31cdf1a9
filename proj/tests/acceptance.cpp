// Acceptance gate: one statistical or exact check per criterion, each printed
// as a single pass/fail line. Every tolerance is pinned here, next to the
// check that uses it. Exit code is the number of failed criteria.

#include "ellab/atoms.hpp"
#include "ellab/block_stieltjes.hpp"
#include "ellab/ensemble.hpp"
#include "ellab/experiments.hpp"
#include "ellab/lapack_wrap.hpp"
#include "ellab/limitlaw.hpp"
#include "ellab/rng.hpp"
#include "ellab/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace ellab;
using namespace std::complex_literals;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void criterion(int idx, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("criterion %d: %s (%.1fs) %s\n", idx, out.pass ? "PASS" : "FAIL", secs,
              out.detail.c_str());
  std::fflush(stdout);
  if (!out.pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Eigen::MatrixXcd random_complex(int n, SeededRng& rng) {
  Eigen::MatrixXcd M(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const auto [x, y] = rng.next_normal_pair();
      M(i, j) = cd(x, y);
    }
  return M;
}

// ---- criterion 1: outlier localization --------------------------------------

Outcome outlier_localization() {
  ExperimentConfig cfg;
  cfg.n_list = {1000};
  cfg.trials = 20;
  cfg.rho = 0.5;
  cfg.delta = 0.05;
  cfg.seed = 101;
  PerturbationSpec p;
  p.kind = PerturbationKind::diagonal_eigs;
  p.eigs = {cd(0, 2), cd(-1.5, 0), cd(1, 1)};
  p.k = 3;
  cfg.perturbation = p;

  const OutlierReport r = run_outlier_experiment(cfg);
  const bool predictions_exact = r.j == 3 && !r.band_violation &&
                                 std::abs(r.predicted[0] - cd(0, 1.75)) < 1e-12 &&
                                 std::abs(r.predicted[1] - cd(-11.0 / 6.0, 0)) < 1e-12 &&
                                 std::abs(r.predicted[2] - cd(1.25, 0.75)) < 1e-12;
  // gates: exactly 3 outliers in >= 90% of trials, matches within n^{-1/4}
  // of the predicted locations in >= 90% of matched pairs
  const bool pass = predictions_exact && r.count_rate >= 0.90 && r.match_rate_radius >= 0.90;
  return {pass, fmt("three planted outliers, n=1000, 20 trials: count_rate=%.2f "
                    "match_rate=%.3f dist_q90=%.3f (radius %.3f)",
                    r.count_rate, r.match_rate_radius, r.dist_q90,
                    std::pow(1000.0, -0.25))};
}

// ---- criterion 2: spectral radius -------------------------------------------

Outcome spectral_radius_limit() {
  std::string detail = "n=2000, 10 trials:";
  bool pass = true;
  int k = 0;
  for (double rho : {0.0, 0.5, -0.5}) {
    ExperimentConfig cfg;
    cfg.n_list = {2000};
    cfg.trials = 10;
    cfg.rho = rho;
    cfg.seed = 202 + k++;
    const RadiusReport r = run_spectral_radius(cfg);
    const double mean = r.rows.back().mean_radius;
    pass = pass && std::abs(mean - r.limit) <= 0.15;  // pinned gate
    detail += fmt(" rho=%+.1f mean=%.3f (limit %.1f);", rho, mean, r.limit);
  }
  return {pass, detail};
}

// ---- criterion 3: elliptic law uniformity -----------------------------------

Outcome elliptic_law_uniformity() {
  std::string detail = "n=2000, pooled over 5 trials:";
  bool pass = true;
  int k = 0;
  for (double rho : {0.0, 0.5}) {
    ExperimentConfig cfg;
    cfg.n_list = {2000};
    cfg.trials = 5;
    cfg.rho = rho;
    cfg.delta = 0.1;
    cfg.t_scale = 0.5;
    cfg.seed = 303 + k++;
    const EsdReport r = run_esd_uniformity(cfg);
    const EsdRow& row = r.rows.back();
    // pinned gates: area-ratio window [0.20, 0.30], band fraction >= 0.99
    const bool ok = row.frac_scaled >= 0.20 && row.frac_scaled <= 0.30 &&
                    row.frac_band >= 0.99;
    pass = pass && ok;
    detail += fmt(" rho=%.1f scaled=%.3f band=%.4f;", rho, row.frac_scaled, row.frac_band);
  }
  return {pass, detail};
}

// ---- criterion 4: least singular value floor over a net ----------------------

Outcome least_singular_floor() {
  ExperimentConfig cfg;
  cfg.n_list = {1000};
  cfg.trials = 5;
  cfg.rho = 0.5;
  cfg.delta = 0.3;
  cfg.eps_net = 0.1;
  cfg.lsv_dist_max = 2.0;
  cfg.seed = 404;
  const LsvReport r = run_lsv_sweep(cfg);
  // pinned gates: sigma_n >= 0.02 everywhere, sigma_n >= 0.5 support_gap in
  // >= 95% of (point, trial) pairs
  const bool pass = r.min_sigma_overall >= 0.02 && r.gap_rate >= 0.95;
  return {pass, fmt("grid=%zu points, 5 trials: min_sigma=%.4f gap_rate=%.4f",
                    r.grid.size(), r.min_sigma_overall, r.gap_rate)};
}

// ---- criterion 5: fixed-point solver exactness -------------------------------

Outcome solver_exactness() {
  // (a) rho = 0, z = 0 equals the semicircle transform on 100 eta points
  double semi_err = 0.0;
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b) {
      const cd eta(-2.25 + 0.5 * a, std::pow(2.0, -4.0 + 0.9 * b));
      const cd root = std::sqrt(eta * eta - 4.0);
      cd ref = (-eta + root) / 2.0;
      if (ref.imag() <= 0.0) ref = (-eta - root) / 2.0;
      semi_err = std::max(semi_err, std::abs(solve_gamma(BlockPoint(eta, 0.0, 0.0)).a - ref));
    }
  const bool semi_ok = semi_err <= 1e-10;

  // (b) matrix-equation residual <= 1e-12 on a 1000-point (rho, z, eta) grid;
  //     Im(eta) >= 0.1 keeps the damped iteration inside its contraction zone
  const std::vector<cd> zs = {cd(0, 0),    cd(1, 0),      cd(-1, 0),       cd(2.25, 0),
                              cd(0, 3),    cd(1, 1),      cd(-0.5, 0.8),   cd(2, -1),
                              cd(0, 0.3),  cd(-2.5, 0)};
  const double etas[] = {0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0};
  double grid_resid = 0.0;
  int solved = 0;
  for (int a = 0; a < 10; ++a) {
    const double rho = -0.9 + 0.2 * a;
    for (const cd& z : zs)
      for (double im : etas) {
        const BlockTransform g = solve_gamma(BlockPoint(cd(0.0, im), z, rho));
        grid_resid = std::max(grid_resid, g.residual);
        ++solved;
      }
  }
  const bool grid_ok = solved == 1000 && grid_resid <= 1e-12;

  // (c, d) density of the symmetrized singular-value law at rho = 0, z = 0:
  // value 1/pi at the origin (tol 1e-4) and unit mass (tol 1e-3)
  std::vector<double> xs;
  for (double x = 0.0; x <= 2.5 + 1e-12; x += 0.005) xs.push_back(x);
  const DensityProfile prof = density_nu(0.0, cd(0, 0), xs, 5e-5);
  const double p0_err = std::abs(prof.grid.front().second - 1.0 / M_PI);
  double mass = 0.0;
  bool finite = true;
  for (std::size_t i = 1; i < prof.grid.size(); ++i) {
    const auto& [x0, p0] = prof.grid[i - 1];
    const auto& [x1, p1] = prof.grid[i];
    finite = finite && std::isfinite(p0) && std::isfinite(p1);
    mass += 0.5 * (p0 + p1) * (x1 - x0);
  }
  mass *= 2.0;  // even extension
  const bool dens_ok = finite && p0_err <= 1e-4 && std::abs(mass - 1.0) <= 1e-3;

  return {semi_ok && grid_ok && dens_ok,
          fmt("semicircle_err=%.2e grid_residual=%.2e p0_err=%.2e mass=%.6f", semi_err,
              grid_resid, p0_err, mass)};
}

// ---- criterion 6: empirical block transform convergence ----------------------

Outcome block_transform_convergence() {
  ExperimentConfig cfg;
  cfg.n_list = {1000};
  cfg.trials = 10;
  cfg.rho = 0.5;
  cfg.seed = 606;
  const GammaReport r = run_gamma_convergence(cfg);
  double eta_small = 0.0;
  for (const GammaCell& c : r.cells)
    if (c.eta.imag() != 1.0) eta_small = std::max(eta_small, c.mean_err);
  // pinned gate: mean entrywise error <= 0.05 at eta = i for all four z
  const bool pass = r.max_err_eta1 <= 0.05;
  return {pass, fmt("n=1000, 10 trials: max_err(eta=i)=%.4f ungated max_err(eta=0.1i)=%.4f",
                    r.max_err_eta1, eta_small)};
}

// ---- criterion 7: isotropic resolvent law ------------------------------------

Outcome isotropic_law() {
  ExperimentConfig cfg;
  cfg.n_list = {2000};
  cfg.trials = 10;
  cfg.rho = 0.5;
  cfg.delta = 0.3;
  cfg.eps_net = 0.2;
  cfg.seed = 707;
  const IsotropicReport r = run_isotropic_check(cfg);
  // pinned gates: sup error <= 0.15 on the net in >= 90% of trials, per pair
  bool pass = true;
  double worst_rate = 1.0;
  for (const IsotropicPair& p : r.pairs) {
    pass = pass && p.pass_rate >= 0.90;
    worst_rate = std::min(worst_rate, p.pass_rate);
  }
  return {pass, fmt("n=2000, 10 trials, net=%d: worst pair rate=%.2f probe_defect=%.1e",
                    r.net_size, worst_rate, r.max_probe_defect)};
}

// ---- criterion 8: nonzero mean outlier ---------------------------------------

Outcome nonzero_mean_outlier() {
  ExperimentConfig cfg;
  cfg.n_list = {1000};
  cfg.trials = 20;
  cfg.rho = 0.5;
  cfg.delta = 0.1;
  cfg.seed = 808;
  PerturbationSpec p;
  p.kind = PerturbationKind::mean_shift;
  p.mu = 1.0;
  p.k = 1;
  cfg.perturbation = p;
  const MeanShiftReport r = run_nonzero_mean(cfg);
  double worst_dev = 0.0;
  for (const MeanShiftTrial& t : r.trials)
    if (t.outliers == 1) worst_dev = std::max(worst_dev, t.deviation);
  // pinned gate: one outlier within 0.5 of mu sqrt(n) in >= 18/20 trials
  const bool pass = r.ok_rate >= 0.90;
  return {pass, fmt("n=1000, 20 trials, target=%.3f: ok_rate=%.2f worst_dev=%.3f",
                    r.target.real(), r.ok_rate, worst_dev)};
}

// ---- criterion 9: exact property suites --------------------------------------

bool corpus_equivalence(std::string& log) {
  // 100 seeded instances, n <= 8, k <= 3: det(I + B (X-z)^{-1} A) must equal
  // the characteristic-polynomial ratio of X + AB and X (two-sided
  // eigenvalue criterion). Checked off the spectra at |z| = 6 and at every
  // eigenvalue of X + AB separated from spec(X).
  int bad = 0;
  for (int inst = 0; inst < 100; ++inst) {
    SeededRng rng = SeededRng::for_trial(0x909, inst);
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);  // 2..8
    const int k = 1 + static_cast<int>(rng.next_u64() % 3);  // 1..3
    const Eigen::MatrixXcd X = random_complex(n, rng) / std::sqrt(double(n));
    Eigen::MatrixXcd A(n, k), B(k, n);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) {
        const auto [x, y] = rng.next_normal_pair();
        A(i, j) = cd(x, y);
        const auto [x2, y2] = rng.next_normal_pair();
        B(j, i) = cd(x2, y2);
      }
    const Eigen::MatrixXcd C = A * B;
    LowRankFactors f;
    f.A = A;
    f.B = B;
    f.k = k;

    const Eigen::VectorXcd ex = lp::eig_complex(X);
    const Eigen::VectorXcd epc = lp::eig_complex(X + C);

    bool ok = true;
    for (int t = 0; t < 5; ++t) {
      const double th = 2.0 * M_PI * (t + 0.5) / 5.0;
      const cd z = 6.0 * std::exp(cd(0, th));
      cd ratio = 1.0;
      for (int i = 0; i < n; ++i) ratio *= (epc(i) - z) / (ex(i) - z);
      ok = ok && std::abs(perturbation_determinant(X, z, f) - ratio) <=
                     1e-8 * (1.0 + std::abs(ratio));
      ok = ok && std::abs(ratio) > 1e-12;  // no spurious zeros off the spectrum
    }
    for (int i = 0; i < n; ++i) {
      double dist = 1e300;
      for (int j = 0; j < n; ++j) dist = std::min(dist, std::abs(epc(i) - ex(j)));
      if (dist > 1e-4)  // genuinely new eigenvalue: the determinant vanishes
        ok = ok && std::abs(perturbation_determinant(X, epc(i), f)) <= 1e-8;
    }
    if (!ok) ++bad;
  }
  if (bad) log += fmt(" corpus_failures=%d", bad);
  return bad == 0;
}

bool net_bounds(std::string& log) {
  bool ok = true;
  // size bound (1 + 2M/eps)^2 and full covering on disks
  const double cases[][2] = {{1.0, 1.0}, {1.0, 0.5}, {2.0, 0.5}, {1.0, 0.25}};
  for (const auto& c : cases) {
    const double M = c[0], eps = c[1];
    const std::vector<cd> net = epsilon_net(NetRegion::disk(M), eps);
    const double bound = (1.0 + 2.0 * M / eps) * (1.0 + 2.0 * M / eps);
    if (static_cast<double>(net.size()) > bound) {
      ok = false;
      log += fmt(" disk(M=%.0f,eps=%.2f) size=%zu > %.0f", M, eps, net.size(), bound);
      continue;
    }
    const auto covered = [&](cd p) {
      for (cd q : net)
        if (std::abs(p - q) <= eps) return true;
      return false;
    };
    bool cover = true;
    for (double x = -M; x <= M && cover; x += 0.01)
      for (double y = -M; y <= M; y += 0.01) {
        const cd p(x, y);
        if (std::abs(p) <= M && !covered(p)) {
          cover = false;
          break;
        }
      }
    for (int t = 0; t < 1000 && cover; ++t)  // boundary circle
      cover = covered(M * std::exp(cd(0, 2.0 * M_PI * t / 1000.0)));
    if (!cover) {
      ok = false;
      log += fmt(" disk(M=%.0f,eps=%.2f) not covered", M, eps);
    }
  }
  // covering on an interval and on the shell geometry the sweeps use
  {
    const std::vector<cd> net = epsilon_net(NetRegion::interval(-2.0, 2.0), 0.3);
    for (double x = -2.0; x <= 2.0; x += 0.001) {
      bool c = false;
      for (cd q : net) c = c || std::abs(cd(x, 0) - q) <= 0.3;
      if (!c) {
        ok = false;
        log += " interval not covered";
        break;
      }
    }
  }
  {
    const NetRegion sh = NetRegion::ellipse_shell(0.5, 0.3, 2.0, 6.0);
    const std::vector<cd> net = epsilon_net(sh, 0.3);
    bool cover = true;
    for (double x = sh.x_lo(); x <= sh.x_hi() && cover; x += 0.02)
      for (double y = sh.y_lo(); y <= sh.y_hi(); y += 0.02) {
        const cd p(x, y);
        if (!sh.contains(p)) continue;
        bool c = false;
        for (cd q : net) c = c || std::abs(p - q) <= 0.3;
        if (!c) {
          cover = false;
          break;
        }
      }
    if (!cover) {
      ok = false;
      log += " shell not covered";
    }
  }
  return ok;
}

bool branch_cut_checks(std::string& log) {
  bool ok = true;
  // cut of sqrt(z^2 - 4 rho): [-2 sqrt(rho), 2 sqrt(rho)] for rho > 0, the
  // matching imaginary segment for rho < 0; open neighborhoods off the cut
  // are fine, the segment itself throws
  for (double x : {-0.999, -0.5, 0.0, 0.5, 0.999, 1.0}) {
    try {
      branch_sqrt(0.25, cd(x, 0));
      ok = false;
      log += fmt(" cut miss at %.3f", x);
    } catch (const std::domain_error&) {
    }
  }
  try {
    branch_sqrt(0.25, cd(1.0 + 1e-9, 0));
    branch_sqrt(0.25, cd(0.5, 1e-9));
    branch_sqrt(-0.25, cd(1e-9, 0.5));
  } catch (const std::domain_error&) {
    ok = false;
    log += " threw off the cut";
  }
  for (double y : {-0.9, 0.0, 0.9}) {
    try {
      branch_sqrt(-0.25, cd(0, y));
      ok = false;
      log += " imaginary cut miss";
    } catch (const std::domain_error&) {
    }
  }
  // asymptotics: branch_sqrt(z) - (z - 2 rho / z) -> 0 at |z| = 1e6;
  // a few ulp of slack, one ulp at 1e6 is ~1.2e-10
  for (cd z : {cd(1e6, 0), cd(0, 1e6), cd(-7e5, 7e5)})
    ok = ok && std::abs(branch_sqrt(0.5, z) - (z - 1.0 / z)) <= 1e-9;
  ok = ok && std::abs(m_of_z(0.5, cd(1e6, 0))) <= 1.1e-6;
  if (!ok && log.empty()) log += " branch asymptotics";
  return ok;
}

bool round_trip_checks(std::string& log) {
  double worst = 0.0;
  for (double rho : {0.9, 0.5, 0.1, -0.5, -0.95})
    for (double r : {1.05, 1.3, 2.0, 4.0})
      for (int t = 0; t < 24; ++t) {
        const cd lam = r * std::exp(cd(0, 2.0 * M_PI * t / 24.0));
        const cd z = outlier_map(rho, lam);
        worst = std::max(worst, std::abs(inverse_outlier_map(rho, z) - lam));
        worst = std::max(worst, std::abs(outlier_map(rho, inverse_outlier_map(rho, z)) - z));
        if (rho != 0.0) worst = std::max(worst, std::abs(m_of_z(rho, z) + 1.0 / lam));
      }
  if (worst > 1e-10) log += fmt(" round_trip_err=%.2e", worst);
  return worst <= 1e-10;
}

bool truncation_bound(std::string& log) {
  AtomPairSpec spec;
  spec.family = AtomFamily::gaussian;
  spec.rho = 0.5;
  const double L = 1.6;
  const TruncatedAtomSpec t = truncate_atoms(spec, L);
  SeededRng rng(0x905);
  for (int i = 0; i < 500000; ++i) {  // 1e6 draws across the pair
    const auto [x, y] = sample_atom_pair(t, rng);
    if (std::abs(x) > 4.0 * L || std::abs(y) > 4.0 * L) {
      log += fmt(" truncation bound broken at draw %d", i);
      return false;
    }
  }
  return true;
}

bool hermitization_symmetry(std::string& log) {
  const int n = 100;
  SeededRng rng(0x906);
  const Eigen::MatrixXcd X = random_complex(n, rng) / std::sqrt(double(n));
  const cd z(0.7, -0.2);
  const Eigen::VectorXcd hev = lp::eig_complex(hermitize(X, z));
  std::vector<double> ev(2 * n);
  double imag_leak = 0.0;
  for (int i = 0; i < 2 * n; ++i) {
    imag_leak = std::max(imag_leak, std::abs(hev(i).imag()));
    ev[i] = hev(i).real();
  }
  std::sort(ev.begin(), ev.end());
  const Eigen::VectorXd sv = singular_values(X, z);
  double worst = imag_leak;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(ev[2 * n - 1 - i] - sv(i)));
    worst = std::max(worst, std::abs(ev[i] + sv(i)));
  }
  if (worst > 1e-8) log += fmt(" hermitization_err=%.2e", worst);
  return worst <= 1e-8;
}

Outcome exact_suites() {
  std::string log;
  const bool a = corpus_equivalence(log);
  const bool b = net_bounds(log);
  const bool c = branch_cut_checks(log);
  const bool d = round_trip_checks(log);
  const bool e = truncation_bound(log);
  const bool f = hermitization_symmetry(log);
  const bool pass = a && b && c && d && e && f;
  std::string detail =
      fmt("corpus=%s nets=%s branch=%s round_trips=%s truncation=%s hermitization=%s",
          a ? "ok" : "FAIL", b ? "ok" : "FAIL", c ? "ok" : "FAIL", d ? "ok" : "FAIL",
          e ? "ok" : "FAIL", f ? "ok" : "FAIL");
  if (!log.empty()) detail += " |" + log;
  return {pass, detail};
}

}  // namespace

int main() {
  criterion(1, outlier_localization);
  criterion(2, spectral_radius_limit);
  criterion(3, elliptic_law_uniformity);
  criterion(4, least_singular_floor);
  criterion(5, solver_exactness);
  criterion(6, block_transform_convergence);
  criterion(7, isotropic_law);
  criterion(8, nonzero_mean_outlier);
  criterion(9, exact_suites);
  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures;
}
