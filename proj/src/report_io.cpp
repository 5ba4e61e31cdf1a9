#include "ellab/report_io.hpp"

#include "ellab/numerics.hpp"

#include "json.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ellab {

namespace {

using nlohmann::json;

std::string fd(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jc(cd v) { return json::array({v.real(), v.imag()}); }

cd jc_parse(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("config: complex values are [re, im] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(std::string("config: unknown key '") + it.key() + "' in " + where);
  }
}

json gates_to_json(const GateThresholds& g) {
  json j;
  j["outlier_count_rate"] = g.outlier_count_rate;
  j["outlier_match_rate"] = g.outlier_match_rate;
  j["outlier_match_tol"] = g.outlier_match_tol;
  j["radius_tol"] = g.radius_tol;
  j["scaled_frac_lo"] = g.scaled_frac_lo;
  j["scaled_frac_hi"] = g.scaled_frac_hi;
  j["band_frac"] = g.band_frac;
  j["lsv_floor"] = g.lsv_floor;
  j["lsv_gap_factor"] = g.lsv_gap_factor;
  j["lsv_gap_rate"] = g.lsv_gap_rate;
  j["mean_shift_tol"] = g.mean_shift_tol;
  j["mean_shift_rate"] = g.mean_shift_rate;
  j["iso_sup_tol"] = g.iso_sup_tol;
  j["iso_rate"] = g.iso_rate;
  j["gamma_tol"] = g.gamma_tol;
  j["cond_max"] = g.cond_max;
  return j;
}

GateThresholds gates_from_json(const json& j) {
  require_keys(j,
               {"outlier_count_rate", "outlier_match_rate", "outlier_match_tol", "radius_tol",
                "scaled_frac_lo", "scaled_frac_hi", "band_frac", "lsv_floor", "lsv_gap_factor",
                "lsv_gap_rate", "mean_shift_tol", "mean_shift_rate", "iso_sup_tol", "iso_rate",
                "gamma_tol", "cond_max"},
               "gates");
  GateThresholds g;
  auto rd = [&](const char* k, double& slot) {
    if (j.contains(k)) slot = j.at(k).get<double>();
  };
  rd("outlier_count_rate", g.outlier_count_rate);
  rd("outlier_match_rate", g.outlier_match_rate);
  rd("outlier_match_tol", g.outlier_match_tol);
  rd("radius_tol", g.radius_tol);
  rd("scaled_frac_lo", g.scaled_frac_lo);
  rd("scaled_frac_hi", g.scaled_frac_hi);
  rd("band_frac", g.band_frac);
  rd("lsv_floor", g.lsv_floor);
  rd("lsv_gap_factor", g.lsv_gap_factor);
  rd("lsv_gap_rate", g.lsv_gap_rate);
  rd("mean_shift_tol", g.mean_shift_tol);
  rd("mean_shift_rate", g.mean_shift_rate);
  rd("iso_sup_tol", g.iso_sup_tol);
  rd("iso_rate", g.iso_rate);
  rd("gamma_tol", g.gamma_tol);
  rd("cond_max", g.cond_max);
  return g;
}

json pert_to_json_obj(const PerturbationSpec& p) {
  json j;
  j["kind"] = perturbation_kind_name(p.kind);
  json eigs = json::array();
  for (cd e : p.eigs) eigs.push_back(jc(e));
  j["eigs"] = eigs;
  j["mu"] = jc(p.mu);
  j["k"] = p.k;
  json u = json::array(), v = json::array();
  for (Eigen::Index i = 0; i < p.u.size(); ++i) u.push_back(jc(p.u(i)));
  for (Eigen::Index i = 0; i < p.v.size(); ++i) v.push_back(jc(p.v(i)));
  j["u"] = u;
  j["v"] = v;
  return j;
}

PerturbationSpec pert_from_json_obj(const json& j) {
  require_keys(j, {"kind", "eigs", "mu", "k", "u", "v"}, "perturbation");
  PerturbationSpec p;
  p.kind = perturbation_kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("eigs"))
    for (const json& e : j.at("eigs")) p.eigs.push_back(jc_parse(e));
  if (j.contains("mu")) p.mu = jc_parse(j.at("mu"));
  if (j.contains("k")) p.k = j.at("k").get<int>();
  auto read_vec = [&](const char* key, Eigen::VectorXcd& out) {
    if (!j.contains(key)) return;
    const json& a = j.at(key);
    out.resize(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) out(static_cast<Eigen::Index>(i)) = jc_parse(a[i]);
  };
  read_vec("u", p.u);
  read_vec("v", p.v);
  return p;
}

json config_to_json_obj(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["n_list"] = c.n_list;
  j["trials"] = c.trials;
  j["rho"] = c.rho;
  j["family"] = family_name(c.family);
  j["diag_family"] = diag_family_name(c.diag_family);
  json table = json::array();
  for (const CustomTableRow& r : c.table) table.push_back(json::array({r.x, r.y, r.p}));
  j["table"] = table;
  j["delta"] = c.delta;
  j["seed"] = c.seed;
  j["perturbation"] = c.perturbation ? pert_to_json_obj(*c.perturbation) : json(nullptr);
  j["trunc_level"] = c.trunc_level;
  j["z"] = jc(c.z);
  j["t_scale"] = c.t_scale;
  j["eps_net"] = c.eps_net;
  j["lsv_dist_max"] = c.lsv_dist_max;
  j["bilinear_b"] = c.bilinear_b == BilinearB::identity ? "identity" : "scaled_identity";
  j["gates"] = gates_to_json(c.gates);
  return j;
}

ExperimentConfig config_from_json_obj(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  require_keys(j,
               {"schema_version", "n_list", "trials", "rho", "family", "diag_family", "table",
                "delta", "seed", "perturbation", "trunc_level", "z", "t_scale", "eps_net",
                "lsv_dist_max", "bilinear_b", "gates"},
               "config");
  if (!j.contains("schema_version")) throw ConfigError("config: schema_version is required");
  if (j.at("schema_version").get<int>() != kReportSchemaVersion)
    throw ConfigError("config: unsupported schema_version");
  ExperimentConfig c;
  if (j.contains("n_list")) c.n_list = j.at("n_list").get<std::vector<int>>();
  if (j.contains("trials")) c.trials = j.at("trials").get<int>();
  if (j.contains("rho")) c.rho = j.at("rho").get<double>();
  if (j.contains("family")) c.family = family_from_name(j.at("family").get<std::string>());
  if (j.contains("diag_family"))
    c.diag_family = diag_family_from_name(j.at("diag_family").get<std::string>());
  if (j.contains("table")) {
    for (const json& r : j.at("table")) {
      if (!r.is_array() || r.size() != 3) throw ConfigError("config: table rows are [x, y, p]");
      c.table.push_back({r[0].get<double>(), r[1].get<double>(), r[2].get<double>()});
    }
  }
  if (j.contains("delta")) c.delta = j.at("delta").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("perturbation") && !j.at("perturbation").is_null())
    c.perturbation = pert_from_json_obj(j.at("perturbation"));
  if (j.contains("trunc_level")) c.trunc_level = j.at("trunc_level").get<double>();
  if (j.contains("z")) c.z = jc_parse(j.at("z"));
  if (j.contains("t_scale")) c.t_scale = j.at("t_scale").get<double>();
  if (j.contains("eps_net")) c.eps_net = j.at("eps_net").get<double>();
  if (j.contains("lsv_dist_max")) c.lsv_dist_max = j.at("lsv_dist_max").get<double>();
  if (j.contains("bilinear_b")) {
    const std::string b = j.at("bilinear_b").get<std::string>();
    if (b == "identity") c.bilinear_b = BilinearB::identity;
    else if (b == "scaled_identity") c.bilinear_b = BilinearB::scaled_identity;
    else throw ConfigError("config: bilinear_b must be identity or scaled_identity");
  }
  if (j.contains("gates")) c.gates = gates_from_json(j.at("gates"));
  return c;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
}

json meta_to_json(const ReportMeta& m, const char* kind) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = kind;
  j["seed"] = m.seed;
  j["config_hash"] = m.config_hash;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg, int indent) {
  return config_to_json_obj(cfg).dump(indent);
}

ExperimentConfig config_from_json(const std::string& text) {
  try {
    return config_from_json_obj(parse_text(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::string perturbation_to_json(const PerturbationSpec& p, int indent) {
  return pert_to_json_obj(p).dump(indent);
}

PerturbationSpec perturbation_from_json(const std::string& text) {
  try {
    return pert_from_json_obj(parse_text(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::string report_to_json(const OutlierReport& r, int indent) {
  json j = meta_to_json(r.meta, "outliers");
  j["n"] = r.n;
  json pred = json::array();
  for (cd p : r.predicted) pred.push_back(jc(p));
  j["predicted"] = pred;
  j["j_outliers"] = r.j;
  j["band_violation"] = r.band_violation;
  j["skipped"] = r.skipped;
  j["count_rate"] = r.count_rate;
  j["match_rate_radius"] = r.match_rate_radius;
  j["match_rate_fixed"] = r.match_rate_fixed;
  j["dist_q50"] = r.dist_q50;
  j["dist_q90"] = r.dist_q90;
  j["dist_max"] = r.dist_max;
  j["pass"] = r.pass;
  json trials = json::array();
  for (const OutlierTrial& t : r.trials) {
    json jt;
    jt["trial_seed"] = t.trial_seed;
    json obs = json::array();
    for (cd o : t.observed) obs.push_back(jc(o));
    jt["observed"] = obs;
    json match = json::array();
    for (auto [pi, oi] : t.matching) match.push_back(json::array({pi, oi}));
    jt["matching"] = match;
    jt["distances"] = t.distances;
    jt["count_match"] = t.count_match;
    jt["solver_failed"] = t.solver_failed;
    trials.push_back(jt);
  }
  j["trials"] = trials;
  return j.dump(indent);
}

std::string report_to_json(const RadiusReport& r, int indent) {
  json j = meta_to_json(r.meta, "radius");
  j["limit"] = r.limit;
  json rows = json::array();
  for (const RadiusRow& row : r.rows)
    rows.push_back({{"n", row.n}, {"mean_radius", row.mean_radius}, {"sd", row.sd}});
  j["rows"] = rows;
  j["pass"] = r.pass;
  return j.dump(indent);
}

std::string report_to_json(const LsvReport& r, int indent) {
  json j = meta_to_json(r.meta, "lsv");
  j["n"] = r.n;
  json grid = json::array();
  for (const LsvPoint& p : r.grid)
    grid.push_back({{"z", jc(p.z)},
                    {"min_sigma", p.min_sigma},
                    {"mean_sigma", p.mean_sigma},
                    {"mean_cond", p.mean_cond},
                    {"support_gap", p.support_gap},
                    {"gap_hits", p.gap_hits}});
  j["grid"] = grid;
  j["min_sigma_overall"] = r.min_sigma_overall;
  j["gap_rate"] = r.gap_rate;
  j["floor_ok"] = r.floor_ok;
  j["gap_ok"] = r.gap_ok;
  j["pass"] = r.pass;
  return j.dump(indent);
}

std::string report_to_json(const MeanShiftReport& r, int indent) {
  json j = meta_to_json(r.meta, "mean");
  j["n"] = r.n;
  j["target"] = jc(r.target);
  json trials = json::array();
  for (const MeanShiftTrial& t : r.trials)
    trials.push_back({{"trial_seed", t.trial_seed},
                      {"outliers", t.outliers},
                      {"lambda_out", jc(t.lambda_out)},
                      {"deviation", t.deviation},
                      {"ok", t.ok},
                      {"solver_failed", t.solver_failed}});
  j["trials"] = trials;
  j["ok_rate"] = r.ok_rate;
  j["pass"] = r.pass;
  return j.dump(indent);
}

std::string report_to_json(const IsotropicReport& r, int indent) {
  json j = meta_to_json(r.meta, "isotropic");
  j["n"] = r.n;
  j["net_size"] = r.net_size;
  j["max_probe_defect"] = r.max_probe_defect;
  json pairs = json::array();
  for (const IsotropicPair& p : r.pairs)
    pairs.push_back({{"name", p.name},
                     {"inner", jc(p.inner)},
                     {"sup_err", p.sup_err},
                     {"pass_rate", p.pass_rate},
                     {"pass", p.pass}});
  j["pairs"] = pairs;
  j["pass"] = r.pass;
  return j.dump(indent);
}

std::string report_to_json(const BilinearReport& r, int indent) {
  json j = meta_to_json(r.meta, "bilinear");
  j["rho_hat"] = r.rho_hat;
  json rows = json::array();
  for (const BilinearRow& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"tail_freq", row.tail_freq},
                    {"mean_stat", row.mean_stat},
                    {"median_stat", row.median_stat}});
  j["rows"] = rows;
  j["decay_ok"] = r.decay_ok;
  j["pass"] = r.pass;
  return j.dump(indent);
}

std::string report_to_json(const EsdReport& r, int indent) {
  json j = meta_to_json(r.meta, "esd");
  json rows = json::array();
  for (const EsdRow& row : r.rows)
    rows.push_back(
        {{"n", row.n}, {"frac_scaled", row.frac_scaled}, {"frac_band", row.frac_band}});
  j["rows"] = rows;
  j["pass"] = r.pass;
  return j.dump(indent);
}

std::string report_to_json(const GammaReport& r, int indent) {
  json j = meta_to_json(r.meta, "gamma");
  j["n"] = r.n;
  json cells = json::array();
  for (const GammaCell& c : r.cells)
    cells.push_back({{"eta", jc(c.eta)}, {"z", jc(c.z)}, {"mean_err", c.mean_err}});
  j["cells"] = cells;
  j["max_err_eta1"] = r.max_err_eta1;
  j["pass"] = r.pass;
  return j.dump(indent);
}

std::string report_to_json(const ConditionReport& r, int indent) {
  json j = meta_to_json(r.meta, "condition");
  j["n"] = r.n;
  j["z"] = jc(r.z);
  j["cond"] = r.cond;
  j["max_cond"] = r.max_cond;
  j["pass"] = r.pass;
  return j.dump(indent);
}

std::string report_to_csv(const OutlierReport& r) {
  std::string s = "trial,trial_seed,n_observed,count_match,n_matched,dist_mean,dist_max,solver_failed\n";
  for (std::size_t t = 0; t < r.trials.size(); ++t) {
    const OutlierTrial& tr = r.trials[t];
    double dmean = 0.0, dmax = 0.0;
    for (double d : tr.distances) {
      dmean += d;
      dmax = std::max(dmax, d);
    }
    if (!tr.distances.empty()) dmean /= static_cast<double>(tr.distances.size());
    s += std::to_string(t) + "," + std::to_string(tr.trial_seed) + "," +
         std::to_string(tr.observed.size()) + "," + std::to_string(tr.count_match ? 1 : 0) + "," +
         std::to_string(tr.distances.size()) + "," + fd(dmean) + "," + fd(dmax) + "," +
         std::to_string(tr.solver_failed ? 1 : 0) + "\n";
  }
  return s;
}

std::string report_to_csv(const RadiusReport& r) {
  std::string s = "n,mean_radius,sd\n";
  for (const RadiusRow& row : r.rows)
    s += std::to_string(row.n) + "," + fd(row.mean_radius) + "," + fd(row.sd) + "\n";
  return s;
}

std::string report_to_csv(const LsvReport& r) {
  std::string s = "re_z,im_z,min_sigma,mean_sigma,mean_cond,support_gap,gap_hits\n";
  for (const LsvPoint& p : r.grid)
    s += fd(p.z.real()) + "," + fd(p.z.imag()) + "," + fd(p.min_sigma) + "," + fd(p.mean_sigma) +
         "," + fd(p.mean_cond) + "," + fd(p.support_gap) + "," + std::to_string(p.gap_hits) + "\n";
  return s;
}

std::string report_to_csv(const MeanShiftReport& r) {
  std::string s = "trial,trial_seed,outliers,re_lambda,im_lambda,deviation,ok,solver_failed\n";
  for (std::size_t t = 0; t < r.trials.size(); ++t) {
    const MeanShiftTrial& tr = r.trials[t];
    s += std::to_string(t) + "," + std::to_string(tr.trial_seed) + "," +
         std::to_string(tr.outliers) + "," + fd(tr.lambda_out.real()) + "," +
         fd(tr.lambda_out.imag()) + "," + fd(tr.deviation) + "," + std::to_string(tr.ok ? 1 : 0) +
         "," + std::to_string(tr.solver_failed ? 1 : 0) + "\n";
  }
  return s;
}

std::string report_to_csv(const IsotropicReport& r) {
  std::string s = "pair,trial,sup_err\n";
  for (const IsotropicPair& p : r.pairs)
    for (std::size_t t = 0; t < p.sup_err.size(); ++t)
      s += p.name + "," + std::to_string(t) + "," + fd(p.sup_err[t]) + "\n";
  return s;
}

std::string report_to_csv(const BilinearReport& r) {
  std::string s = "n,tail_freq,mean_stat,median_stat\n";
  for (const BilinearRow& row : r.rows)
    s += std::to_string(row.n) + "," + fd(row.tail_freq) + "," + fd(row.mean_stat) + "," +
         fd(row.median_stat) + "\n";
  return s;
}

std::string report_to_csv(const EsdReport& r) {
  std::string s = "n,frac_scaled,frac_band\n";
  for (const EsdRow& row : r.rows)
    s += std::to_string(row.n) + "," + fd(row.frac_scaled) + "," + fd(row.frac_band) + "\n";
  return s;
}

std::string report_to_csv(const GammaReport& r) {
  std::string s = "re_eta,im_eta,re_z,im_z,mean_err\n";
  for (const GammaCell& c : r.cells)
    s += fd(c.eta.real()) + "," + fd(c.eta.imag()) + "," + fd(c.z.real()) + "," +
         fd(c.z.imag()) + "," + fd(c.mean_err) + "\n";
  return s;
}

std::string report_to_csv(const ConditionReport& r) {
  std::string s = "trial,cond\n";
  for (std::size_t t = 0; t < r.cond.size(); ++t)
    s += std::to_string(t) + "," + fd(r.cond[t]) + "\n";
  return s;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) os << ',';
      os << fd(M(i, j));
    }
    os << '\n';
  }
}

void write_matrix_binary(std::ostream& os, const Eigen::MatrixXd& M) {
  const std::uint64_t rows = static_cast<std::uint64_t>(M.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(M.cols());
  os.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  os.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const double v = M(i, j);
      os.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

Eigen::MatrixXd read_matrix_binary(std::istream& is) {
  std::uint64_t rows = 0, cols = 0;
  is.read(reinterpret_cast<char*>(&rows), sizeof rows);
  is.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!is || rows > (1u << 20) || cols > (1u << 20))
    throw std::runtime_error("matrix binary: bad header");
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint64_t j = 0; j < cols; ++j) {
      double v = 0.0;
      is.read(reinterpret_cast<char*>(&v), sizeof v);
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  if (!is) throw std::runtime_error("matrix binary: truncated payload");
  return M;
}

std::string spectrum_to_csv(const Eigen::VectorXcd& eigs) {
  std::string s = "re,im\n";
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    s += fd(eigs(i).real()) + "," + fd(eigs(i).imag()) + "\n";
  return s;
}

std::string density_to_csv(const DensityProfile& prof) {
  std::string s = "x,p\n";
  for (auto [x, p] : prof.grid) s += fd(x) + "," + fd(p) + "\n";
  return s;
}

std::string m_grid_to_csv(double rho, const std::vector<cd>& zs) {
  std::string s = "re_z,im_z,re_m,im_m,residual\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (cd z : zs) {
    cd m(nan, nan);
    double resid = nan;
    if (dist_to_ellipse(rho, z) > 0.0) {
      m = m_of_z(rho, z);
      resid = std::abs(rho * m * m + z * m + 1.0);
    }
    s += fd(z.real()) + "," + fd(z.imag()) + "," + fd(m.real()) + "," + fd(m.imag()) + "," +
         fd(resid) + "\n";
  }
  return s;
}

std::string block_sweep_to_csv(const ShiftedSvd& svd, const std::vector<double>& E_grid,
                               double t) {
  if (!(t > 0.0)) throw std::domain_error("block_sweep_to_csv: t must be positive");
  std::string s = "E,t,re_a,im_a,re_b,im_b,re_c,im_c\n";
  for (double E : E_grid) {
    const EmpiricalBlockTransform g = svd.transform(cd(E, t));
    s += fd(E) + "," + fd(t) + "," + fd(g.a_N.real()) + "," + fd(g.a_N.imag()) + "," +
         fd(g.b_N.real()) + "," + fd(g.b_N.imag()) + "," + fd(g.c_N.real()) + "," +
         fd(g.c_N.imag()) + "\n";
  }
  return s;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string file_content_hash(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("manifest: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string bytes = ss.str();
  return num::fnv1a_hex(bytes.data(), bytes.size());
}

void manifest_record(RunManifest& m, const std::string& path) {
  m.artifacts.push_back({path, file_content_hash(path)});
}

bool manifest_ok(const RunManifest& m) {
  for (const ManifestEntry& e : m.artifacts) {
    try {
      if (file_content_hash(e.path) != e.hash) return false;
    } catch (const std::runtime_error&) {
      return false;
    }
  }
  return true;
}

std::string manifest_to_json(const RunManifest& m, int indent) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = m.command;
  j["config"] = config_to_json_obj(m.config);
  j["started"] = m.started;
  j["finished"] = m.finished;
  json arts = json::array();
  for (const ManifestEntry& e : m.artifacts) arts.push_back({{"path", e.path}, {"hash", e.hash}});
  j["artifacts"] = arts;
  return j.dump(indent);
}

}  // namespace ellab
