#include "ellab/spectra.hpp"

#include "ellab/lapack_wrap.hpp"
#include "ellab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace ellab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_square(Eigen::Index rows, Eigen::Index cols, const char* who) {
  if (rows < 1 || rows != cols) throw std::invalid_argument(std::string(who) + ": square matrix of order >= 1 required");
}

// Max relative eigenpair defect over ten deterministic spot checks (all
// pairs when n <= 10); apply() must implement v -> M v.
double spot_residual(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                     double scale, const Eigen::VectorXcd& w, const Eigen::MatrixXcd& V) {
  const int n = static_cast<int>(w.size());
  if (scale == 0.0) return 0.0;
  SeededRng rng = SeededRng::for_trial(0x51D3C4ECULL, 7);
  double worst = 0.0;
  const int checks = n <= 10 ? n : 10;
  for (int t = 0; t < checks; ++t) {
    const int i = n <= 10 ? t : static_cast<int>(rng.next_u64() % n);
    const Eigen::VectorXcd v = V.col(i);
    const double nv = v.norm();
    if (!(nv > 0.0)) return kInf;  // a zero eigenvector column is itself a failure
    worst = std::max(worst, (apply(v) - w(i) * v).norm() / (scale * nv));
  }
  return worst;
}

}  // namespace

SpectrumSummary eigenvalues(const Eigen::MatrixXcd& M) {
  require_square(M.rows(), M.cols(), "eigenvalues");
  if (!M.allFinite()) throw std::invalid_argument("eigenvalues: non-finite entries");
  Eigen::MatrixXcd V;
  SpectrumSummary s;
  s.eigenvalues = lp::eig_complex(M, &V);
  s.spectral_radius = s.eigenvalues.cwiseAbs().maxCoeff();
  s.residual_bound = spot_residual([&](const Eigen::VectorXcd& v) { return (M * v).eval(); },
                                   M.norm(), s.eigenvalues, V);
  return s;
}

SpectrumSummary eigenvalues(const Eigen::MatrixXd& M) {
  require_square(M.rows(), M.cols(), "eigenvalues");
  if (!M.allFinite()) throw std::invalid_argument("eigenvalues: non-finite entries");
  Eigen::MatrixXcd V;
  SpectrumSummary s;
  s.eigenvalues = lp::eig_real(M, &V);
  s.spectral_radius = s.eigenvalues.cwiseAbs().maxCoeff();
  const auto apply = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out(v.size());
    out.real() = M * v.real();
    out.imag() = M * v.imag();
    return out;
  };
  s.residual_bound = spot_residual(apply, M.norm(), s.eigenvalues, V);
  return s;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& X, cd z) {
  require_square(X.rows(), X.cols(), "singular_values");
  if (!X.allFinite()) throw std::invalid_argument("singular_values: non-finite entries");
  Eigen::MatrixXcd W = X;
  W.diagonal().array() -= z;
  return lp::sv_complex(std::move(W));
}

double least_singular(const Eigen::MatrixXcd& X, cd z) {
  const Eigen::VectorXd s = singular_values(X, z);
  return s(s.size() - 1);
}

cd resolvent_bilinear(const Eigen::MatrixXcd& X, cd z, const Eigen::VectorXcd& u,
                      const Eigen::VectorXcd& v) {
  require_square(X.rows(), X.cols(), "resolvent_bilinear");
  if (u.size() != X.rows() || v.size() != X.rows())
    throw std::invalid_argument("resolvent_bilinear: vector length mismatch");
  if (std::abs(u.norm() - 1.0) > 1e-6 || std::abs(v.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("resolvent_bilinear: u and v must be unit vectors");
  Eigen::MatrixXcd W = X;
  W.diagonal().array() -= z;
  const Eigen::VectorXd s = lp::sv_complex(W);
  if (!(s(s.size() - 1) > 1e-10))
    throw ConditioningError("resolvent_bilinear: shift within 1e-10 of the spectrum");
  const Eigen::MatrixXcd x = lp::solve_complex(W, v);
  const double defect = (W * x - v).norm();
  if (!(defect <= 1e-10 * (W.norm() * x.norm() + 1.0)))
    throw ConditioningError("resolvent_bilinear: solve residual above tolerance");
  return u.dot(x.col(0));
}

ShiftedSvd::ShiftedSvd(const Eigen::MatrixXcd& X, cd z) : z_(z) {
  require_square(X.rows(), X.cols(), "ShiftedSvd");
  if (!X.allFinite()) throw std::invalid_argument("ShiftedSvd: non-finite entries");
  Eigen::MatrixXcd W = X;
  W.diagonal().array() -= z;
  Eigen::MatrixXcd U, VT;
  lp::svd_complex(std::move(W), sigma_, U, VT);
  const int n = static_cast<int>(X.rows());
  w_.resize(n);
  for (int i = 0; i < n; ++i) w_(i) = (VT.row(i) * U.col(i)).value();
}

EmpiricalBlockTransform ShiftedSvd::transform(cd eta) const {
  if (!(eta.imag() > 0.0)) throw std::domain_error("ShiftedSvd::transform: Im(eta) must be positive");
  cd a = 0.0, b = 0.0, c = 0.0;
  const int n = static_cast<int>(sigma_.size());
  for (int i = 0; i < n; ++i) {
    const cd gp = 1.0 / (sigma_(i) - eta);
    const cd gm = 1.0 / (-sigma_(i) - eta);
    const cd d = gp - gm;
    a += gp + gm;
    b += w_(i) * d;
    c += std::conj(w_(i)) * d;
  }
  const double scale = 1.0 / (2.0 * n);
  return {a * scale, b * scale, c * scale};
}

EmpiricalBlockTransform empirical_block_stieltjes(const Eigen::MatrixXcd& X, const BlockPoint& p) {
  return ShiftedSvd(X, p.z).transform(p.eta);
}

namespace {

// Membership in the filled ellipse with semi-axes A (horizontal) and B
// (vertical); a vanishing axis degenerates to a segment.
bool in_axes_ellipse(cd z, double A, double B) {
  const auto term = [](double x, double s) {
    if (s > 0.0) return (x / s) * (x / s);
    return std::abs(x) <= 1e-12 ? 0.0 : kInf;
  };
  return term(z.real(), A) + term(z.imag(), B) <= 1.0;
}

}  // namespace

EsdStats esd_stats(const std::vector<cd>& eigs, double rho, double delta, double t_scale) {
  if (!(t_scale > 0.0 && t_scale <= 1.0)) throw std::invalid_argument("esd_stats: t_scale must lie in (0, 1]");
  if (!(delta >= 0.0)) throw std::invalid_argument("esd_stats: delta must be nonnegative");
  EsdStats out;
  if (eigs.empty()) return out;
  int n_band = 0, n_scaled = 0;
  for (cd z : eigs) {
    if (dist_to_ellipse(rho, z) <= delta) ++n_band;
    if (in_axes_ellipse(z, t_scale * (1.0 + rho), t_scale * (1.0 - rho))) ++n_scaled;
  }
  const double inv = 1.0 / static_cast<double>(eigs.size());
  out.frac_in_Edelta = n_band * inv;
  out.frac_in_scaled = n_scaled * inv;
  return out;
}

NetRegion NetRegion::disk(double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("NetRegion::disk: radius must be positive finite");
  NetRegion r;
  r.kind = Kind::disk;
  r.radius = M;
  return r;
}

NetRegion NetRegion::interval(double a, double b) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("NetRegion::interval: need finite a <= b");
  NetRegion r;
  r.kind = Kind::interval;
  r.a = a;
  r.b = b;
  return r;
}

NetRegion NetRegion::ellipse_shell(double rho, double dist_min, double dist_max, double mod_max) {
  if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("NetRegion::ellipse_shell: |rho| <= 1 required");
  if (!(dist_min >= 0.0 && dist_min <= dist_max))
    throw std::invalid_argument("NetRegion::ellipse_shell: need 0 <= dist_min <= dist_max");
  if (!(mod_max > 0.0) || !std::isfinite(mod_max))
    throw std::invalid_argument("NetRegion::ellipse_shell: mod_max must be positive finite");
  NetRegion r;
  r.kind = Kind::ellipse_shell;
  r.rho = rho;
  r.dist_min = dist_min;
  r.dist_max = dist_max;
  r.mod_max = mod_max;
  return r;
}

bool NetRegion::contains(cd z) const {
  switch (kind) {
    case Kind::disk:
      return std::abs(z) <= radius;
    case Kind::interval:
      return z.imag() == 0.0 && a <= z.real() && z.real() <= b;
    case Kind::ellipse_shell: {
      if (std::abs(z) > mod_max) return false;
      const double d = dist_to_ellipse(rho, z);
      return dist_min <= d && d <= dist_max;
    }
  }
  return false;
}

double NetRegion::x_lo() const {
  switch (kind) {
    case Kind::disk: return -radius;
    case Kind::interval: return a;
    case Kind::ellipse_shell: return -std::min(mod_max, 1.0 + std::abs(rho) + dist_max);
  }
  return 0.0;
}
double NetRegion::x_hi() const { return kind == Kind::interval ? b : -x_lo(); }
double NetRegion::y_lo() const { return kind == Kind::interval ? 0.0 : x_lo(); }
double NetRegion::y_hi() const { return kind == Kind::interval ? 0.0 : x_hi(); }

std::vector<cd> epsilon_net(const NetRegion& region, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("epsilon_net: eps must be positive finite");
  const double h = eps / 20.0;
  const double sep = eps * (1.0 - std::sqrt(2.0) / 40.0);
  const double xc = 0.5 * (region.x_lo() + region.x_hi());
  const double yc = 0.5 * (region.y_lo() + region.y_hi());
  const int nx = static_cast<int>(std::floor((region.x_hi() - xc) / h + 1e-12));
  const int ny = static_cast<int>(std::floor((region.y_hi() - yc) / h + 1e-12));

  std::vector<cd> cand;
  for (int iy = -ny; iy <= ny; ++iy) {
    for (int ix = -nx; ix <= nx; ++ix) {
      const cd z(xc + ix * h, yc + iy * h);
      if (region.contains(z)) cand.push_back(z);
    }
  }
  std::sort(cand.begin(), cand.end(), [&](cd p, cd q) {
    const double dp = std::norm(p - cd(xc, yc)), dq = std::norm(q - cd(xc, yc));
    if (dp != dq) return dp < dq;
    if (p.real() != q.real()) return p.real() < q.real();
    return p.imag() < q.imag();
  });

  // Greedy separated subset with a bucket grid of cell size sep: any point
  // closer than sep lives in one of the 3x3 neighbor cells.
  const int gx = static_cast<int>((region.x_hi() - region.x_lo()) / sep) + 3;
  const int gy = static_cast<int>((region.y_hi() - region.y_lo()) / sep) + 3;
  std::vector<std::vector<int>> cells(static_cast<std::size_t>(gx) * gy);
  const auto cell_x = [&](double x) {
    return std::clamp(static_cast<int>((x - region.x_lo()) / sep) + 1, 0, gx - 1);
  };
  const auto cell_y = [&](double y) {
    return std::clamp(static_cast<int>((y - region.y_lo()) / sep) + 1, 0, gy - 1);
  };

  std::vector<cd> net;
  const double sep2 = sep * sep;
  for (cd z : cand) {
    const int cx = cell_x(z.real()), cy = cell_y(z.imag());
    bool free = true;
    for (int dy = -1; dy <= 1 && free; ++dy) {
      for (int dx = -1; dx <= 1 && free; ++dx) {
        const int ux = cx + dx, uy = cy + dy;
        if (ux < 0 || ux >= gx || uy < 0 || uy >= gy) continue;
        for (int idx : cells[static_cast<std::size_t>(uy) * gx + ux]) {
          if (std::norm(z - net[idx]) < sep2) {
            free = false;
            break;
          }
        }
      }
    }
    if (!free) continue;
    cells[static_cast<std::size_t>(cy) * gx + cx].push_back(static_cast<int>(net.size()));
    net.push_back(z);
  }
  return net;
}

cd perturbation_determinant(const Eigen::MatrixXcd& X, cd z, const LowRankFactors& f) {
  require_square(X.rows(), X.cols(), "perturbation_determinant");
  if (f.k == 0) return 1.0;
  if (f.A.rows() != X.rows() || f.B.cols() != X.rows() || f.A.cols() != f.k || f.B.rows() != f.k)
    throw std::invalid_argument("perturbation_determinant: factor shape mismatch");
  Eigen::MatrixXcd W = X;
  W.diagonal().array() -= z;
  const Eigen::MatrixXcd S = lp::solve_complex(std::move(W), f.A);
  const Eigen::MatrixXcd E = Eigen::MatrixXcd::Identity(f.k, f.k) + f.B * S;
  return E.determinant();
}

}  // namespace ellab
