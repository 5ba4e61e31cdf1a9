#include "ellab/atoms.hpp"

#include "ellab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ellab {

std::pair<double, double> SeededRng::next_normal_pair() {
  // Box-Muller, exactly two uniforms per pair.
  const double u1 = next_unit_pos();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

double norm_pdf(double x) { return std::exp(-0.5 * x * x) * 0.3989422804014327; }
double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865476); }

// Phi^{-1}(p) for p in (1/2, 1), by bisection; plenty fast for setup work.
double norm_quantile_upper(double p) {
  double lo = 0.0, hi = 40.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (norm_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Uniform-pair marginal map: a standard normal g is pushed to sqrt(3)*(2*Phi(g)-1),
// uniform on [-sqrt(3), sqrt(3)] with unit variance.
double uniform_push(double g) { return kSqrt3 * std::erf(g * 0.7071067811865476); }

// Gaussian-copula correlation reproducing pair correlation rho for the
// uniform marginals: corr = (6/pi) asin(r/2) inverts to r = 2 sin(pi rho / 6).
double copula_r(double rho) { return 2.0 * std::sin(std::numbers::pi * rho / 6.0); }

void validate_table(const AtomPairSpec& spec) {
  if (spec.table.empty()) throw ConfigError("custom_table needs at least one row");
  double psum = 0, mx = 0, my = 0, vx = 0, vy = 0, xy = 0;
  for (const auto& row : spec.table) {
    if (row.p < 0.0) throw ConfigError("custom_table probability is negative");
    psum += row.p;
    mx += row.p * row.x;
    my += row.p * row.y;
    vx += row.p * row.x * row.x;
    vy += row.p * row.y * row.y;
    xy += row.p * row.x * row.y;
  }
  const double tol = 1e-12;
  if (std::abs(psum - 1.0) > tol) throw ConfigError("custom_table probabilities must sum to 1");
  if (std::abs(mx) > tol || std::abs(my) > tol)
    throw ConfigError("custom_table marginals must have mean 0");
  if (std::abs(vx - 1.0) > tol || std::abs(vy - 1.0) > tol)
    throw ConfigError("custom_table marginals must have variance 1");
  if (std::abs(xy - spec.rho) > tol)
    throw ConfigError("custom_table cross moment disagrees with rho");
}

std::pair<double, double> sample_table(const std::vector<CustomTableRow>& table, SeededRng& rng) {
  const double u = rng.next_unit();
  double cum = 0.0;
  for (const auto& row : table) {
    cum += row.p;
    if (u < cum) return {row.x, row.y};
  }
  return {table.back().x, table.back().y};
}

// E[xi^2 1{|xi| <= L}] for a standard normal.
double gauss_trunc_var(double L) {
  return std::erf(L * 0.7071067811865476) - 2.0 * L * norm_pdf(L);
}

// E[y 1{a <= y <= b}] for y ~ N(mu, sig^2).
double gauss_interval_mean(double mu, double sig, double a, double b) {
  const double al = (a - mu) / sig, be = (b - mu) / sig;
  return mu * (norm_cdf(be) - norm_cdf(al)) - sig * (norm_pdf(be) - norm_pdf(al));
}

}  // namespace

void AtomPairSpec::validate() const {
  if (!(rho >= -1.0 && rho <= 1.0)) throw ConfigError("rho must lie in [-1, 1]");
  if (family == AtomFamily::custom_table) validate_table(*this);
}

std::pair<double, double> sample_atom_pair(const AtomPairSpec& spec, SeededRng& rng) {
  switch (spec.family) {
    case AtomFamily::gaussian: {
      const auto [g1, g2] = rng.next_normal_pair();
      return {g1, spec.rho * g1 + std::sqrt(1.0 - spec.rho * spec.rho) * g2};
    }
    case AtomFamily::rademacher_mixture: {
      const double x = rng.next_unit() < 0.5 ? 1.0 : -1.0;
      const double y = rng.next_unit() < 0.5 * (1.0 + spec.rho) ? x : -x;
      return {x, y};
    }
    case AtomFamily::uniform_pair: {
      const double r = copula_r(spec.rho);
      const auto [g1, g2] = rng.next_normal_pair();
      const double h2 = r * g1 + std::sqrt(1.0 - r * r) * g2;
      return {uniform_push(g1), uniform_push(h2)};
    }
    case AtomFamily::custom_table:
      return sample_table(spec.table, rng);
  }
  throw ConfigError("unknown atom family");
}

double sample_diag_atom(const AtomPairSpec& spec, SeededRng& rng) {
  switch (spec.diag_family) {
    case DiagFamily::zero:
      return 0.0;
    case DiagFamily::gaussian:
      return rng.next_normal();
    case DiagFamily::same_as_offdiag_marginal:
      return sample_atom_pair(spec, rng).first;
  }
  throw ConfigError("unknown diagonal family");
}

AtomMoments atom_moments(const AtomPairSpec& spec) {
  AtomMoments m{0.0, 1.0, spec.rho, 3.0};
  switch (spec.family) {
    case AtomFamily::gaussian:
      m.m4 = 3.0;
      break;
    case AtomFamily::rademacher_mixture:
      m.m4 = 1.0;
      break;
    case AtomFamily::uniform_pair:
      m.m4 = 9.0 / 5.0;
      break;
    case AtomFamily::custom_table: {
      double qx = 0, qy = 0;
      for (const auto& row : spec.table) {
        qx += row.p * row.x * row.x * row.x * row.x;
        qy += row.p * row.y * row.y * row.y * row.y;
      }
      m.m4 = std::max(qx, qy);
      break;
    }
  }
  return m;
}

TruncatedAtomSpec truncate_atoms(const AtomPairSpec& spec, double L) {
  spec.validate();
  if (!(L > 0.0)) throw TruncationError("truncation level must be positive");

  TruncatedAtomSpec out;
  out.base = spec;
  out.level_L = L;

  double c1 = 0, c2 = 0, v1 = 1, v2 = 1, cross = spec.rho;
  switch (spec.family) {
    case AtomFamily::gaussian: {
      v1 = v2 = gauss_trunc_var(L);  // centers vanish by symmetry
      if (std::abs(spec.rho) == 1.0) {
        cross = std::copysign(v1, spec.rho);
      } else {
        const double sig = std::sqrt(1.0 - spec.rho * spec.rho);
        cross = num::integrate(
            [&](double x) {
              return x * norm_pdf(x) * gauss_interval_mean(spec.rho * x, sig, -L, L);
            },
            -L, L, 1e-12);
      }
      break;
    }
    case AtomFamily::rademacher_mixture: {
      if (L < 1.0) throw TruncationError("truncation level L below L0 for this family");
      break;  // |xi| = 1 a.s.: truncation is a no-op
    }
    case AtomFamily::uniform_pair: {
      if (L >= kSqrt3) break;  // support is [-sqrt(3), sqrt(3)]: no-op
      v1 = v2 = L * L * L / (3.0 * kSqrt3);
      const double r = copula_r(spec.rho);
      if (std::abs(spec.rho) == 1.0) {
        cross = std::copysign(v1, spec.rho);
      } else if (spec.rho == 0.0) {
        cross = 0.0;
      } else {
        // |xi| <= L maps to |g| <= t under the copula.
        const double t = norm_quantile_upper(0.5 * (1.0 + L / kSqrt3));
        const double sig = std::sqrt(1.0 - r * r);
        cross = num::integrate(
            [&](double g1) {
              const double inner = num::integrate(
                  [&](double g2) {
                    return uniform_push(g2) * norm_pdf((g2 - r * g1) / sig) / sig;
                  },
                  -t, t, 1e-13);
              return norm_pdf(g1) * uniform_push(g1) * inner;
            },
            -t, t, 1e-11);
      }
      break;
    }
    case AtomFamily::custom_table: {
      double m1 = 0, m2 = 0, q1 = 0, q2 = 0, xy = 0;
      for (const auto& row : spec.table) {
        const bool kx = std::abs(row.x) <= L, ky = std::abs(row.y) <= L;
        if (kx) m1 += row.p * row.x, q1 += row.p * row.x * row.x;
        if (ky) m2 += row.p * row.y, q2 += row.p * row.y * row.y;
        if (kx && ky) xy += row.p * row.x * row.y;
      }
      c1 = m1;
      c2 = m2;
      v1 = q1 - c1 * c1;
      v2 = q2 - c2 * c2;
      cross = xy - c1 * c2;
      break;
    }
  }

  if (v1 < 0.5 || v2 < 0.5)
    throw TruncationError("truncation level L below L0: truncated variance under 1/2");

  out.center_1 = c1;
  out.center_2 = c2;
  out.scale_1 = 1.0 / std::sqrt(v1);
  out.scale_2 = 1.0 / std::sqrt(v2);
  out.rho_hat = cross / std::sqrt(v1 * v2);  // cross is the centered mixed moment
  return out;
}

std::pair<double, double> sample_atom_pair(const TruncatedAtomSpec& spec, SeededRng& rng) {
  const auto [x, y] = sample_atom_pair(spec.base, rng);
  const double tx = (std::abs(x) <= spec.level_L ? x : 0.0) - spec.center_1;
  const double ty = (std::abs(y) <= spec.level_L ? y : 0.0) - spec.center_2;
  return {tx * spec.scale_1, ty * spec.scale_2};
}

std::string family_name(AtomFamily f) {
  switch (f) {
    case AtomFamily::gaussian: return "gaussian";
    case AtomFamily::rademacher_mixture: return "rademacher_mixture";
    case AtomFamily::uniform_pair: return "uniform_pair";
    case AtomFamily::custom_table: return "custom_table";
  }
  return "unknown";
}

std::string diag_family_name(DiagFamily f) {
  switch (f) {
    case DiagFamily::same_as_offdiag_marginal: return "same_as_offdiag_marginal";
    case DiagFamily::zero: return "zero";
    case DiagFamily::gaussian: return "gaussian";
  }
  return "unknown";
}

AtomFamily family_from_name(const std::string& s) {
  if (s == "gaussian") return AtomFamily::gaussian;
  if (s == "rademacher_mixture") return AtomFamily::rademacher_mixture;
  if (s == "uniform_pair") return AtomFamily::uniform_pair;
  if (s == "custom_table") return AtomFamily::custom_table;
  throw ConfigError("unknown atom family: " + s);
}

DiagFamily diag_family_from_name(const std::string& s) {
  if (s == "same_as_offdiag_marginal") return DiagFamily::same_as_offdiag_marginal;
  if (s == "zero") return DiagFamily::zero;
  if (s == "gaussian") return DiagFamily::gaussian;
  throw ConfigError("unknown diagonal family: " + s);
}

}  // namespace ellab
