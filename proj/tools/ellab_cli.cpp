#include "CLI11.hpp"

#include "ellab/block_stieltjes.hpp"
#include "ellab/ensemble.hpp"
#include "ellab/experiments.hpp"
#include "ellab/limitlaw.hpp"
#include "ellab/report_io.hpp"
#include "ellab/spectra.hpp"
#include "ellab/svg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ellab::cd;
using ellab::ConfigError;

struct Opts {
  double rho = 0.0;
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  std::string out = ".";
  std::string config_path;
  std::string eigs;
  std::string mu;
  std::string z;
  std::string format = "json";
  double trunc = -1.0;
};

std::string fg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_real_token(const std::string& t) {
  if (t.empty() || t == "+") return 1.0;
  if (t == "-") return -1.0;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ConfigError("bad number: '" + t + "'");
  }
  if (pos != t.size()) throw ConfigError("bad number: '" + t + "'");
  return v;
}

// Accepts "a", "bi", "a+bi", "a-bi" (also bare "i", "-i"); exponents allowed.
cd parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ConfigError("empty complex literal");
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (s.back() == 'i') {
    const std::string body = s.substr(0, s.size() - 1);
    if (split == std::string::npos) return {0.0, parse_real_token(body)};
    return {parse_real_token(s.substr(0, split)), parse_real_token(body.substr(split))};
  }
  return {parse_real_token(s), 0.0};
}

std::vector<cd> parse_complex_list(const std::string& s) {
  std::vector<cd> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  if (out.empty()) throw ConfigError("empty eigenvalue list");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void add_common(CLI::App* s, Opts& o) {
  s->add_option("--rho", o.rho, "entry-pair correlation in [-1, 1]");
  s->add_option("--n", o.n, "matrix dimension (sets a single-entry n list)");
  s->add_option("--trials", o.trials, "number of seeded trials");
  s->add_option("--seed", o.seed, "master seed");
  s->add_option("--delta", o.delta, "ellipse neighborhood width");
  s->add_option("--out", o.out, "output directory (all files are written under it)");
  s->add_option("--config", o.config_path, "JSON config file; flags override its values");
  s->add_option("--eigs", o.eigs, "diagonal perturbation eigenvalues, e.g. \"2i,-1.5,1+1i\"");
  s->add_option("--mu", o.mu, "mean-shift amplitude (complex literal)");
  s->add_option("--z", o.z, "spectral point, e.g. \"2.25+0i\"");
  s->add_option("--format", o.format, "report file format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  s->add_option("--trunc", o.trunc, "truncation level L (> 0 samples the bounded surrogate)");
}

struct Run {
  std::string command;
  ellab::ExperimentConfig cfg;
  std::filesystem::path outdir;
  ellab::RunManifest manifest;

  Run(std::string cmd, const ellab::ExperimentConfig& c, const std::string& out)
      : command(std::move(cmd)), cfg(c), outdir(out) {
    std::filesystem::create_directories(outdir);
    manifest.command = command;
    manifest.config = cfg;
    manifest.started = ellab::utc_timestamp();
  }

  void emit(const std::string& name, const std::string& content) {
    const std::filesystem::path p = outdir / name;
    write_file(p, content);
    ellab::manifest_record(manifest, p.string());
  }

  void finish() {
    manifest.finished = ellab::utc_timestamp();
    write_file(outdir / "manifest.json", ellab::manifest_to_json(manifest));
  }
};

template <class Report>
int emit_report(Run& run, const Report& rep, const std::string& format) {
  if (format == "json") run.emit(run.command + ".json", ellab::report_to_json(rep));
  else run.emit(run.command + ".csv", ellab::report_to_csv(rep));
  run.finish();
  std::cout << run.command << ": pass=" << (rep.pass ? 1 : 0) << " out=" << run.outdir.string()
            << "\n";
  return rep.pass ? 0 : 1;
}

int dispatch(const std::string& cmd, const CLI::App* sub, Opts& o) {
  ellab::ExperimentConfig cfg;
  if (sub->count("--config")) cfg = ellab::config_from_json(read_file(o.config_path));

  if (sub->count("--rho")) cfg.rho = o.rho;
  if (sub->count("--n")) cfg.n_list = {o.n};
  if (sub->count("--trials")) cfg.trials = o.trials;
  if (sub->count("--seed")) cfg.seed = o.seed;
  if (sub->count("--delta")) cfg.delta = o.delta;
  if (sub->count("--z")) cfg.z = parse_complex(o.z);
  if (sub->count("--trunc")) cfg.trunc_level = o.trunc;
  if (sub->count("--eigs") && sub->count("--mu"))
    throw ConfigError("--eigs and --mu are mutually exclusive");
  if (sub->count("--eigs")) {
    ellab::PerturbationSpec p;
    p.kind = ellab::PerturbationKind::diagonal_eigs;
    p.eigs = parse_complex_list(o.eigs);
    p.k = static_cast<int>(p.eigs.size());
    cfg.perturbation = p;
  }
  if (sub->count("--mu")) {
    ellab::PerturbationSpec p;
    p.kind = ellab::PerturbationKind::mean_shift;
    p.mu = parse_complex(o.mu);
    p.k = 1;
    cfg.perturbation = p;
  }

  if (cmd == "figure1") {
    // reproduction defaults; explicit flags still win
    if (!sub->count("--rho")) cfg.rho = 0.5;
    if (!sub->count("--n")) cfg.n_list = {1000};
    if (!sub->count("--delta")) cfg.delta = 0.05;
    if (!cfg.perturbation) {
      ellab::PerturbationSpec p;
      p.kind = ellab::PerturbationKind::diagonal_eigs;
      p.eigs = {cd(0.0, 2.0), cd(-1.5, 0.0), cd(1.0, 1.0)};
      p.k = 3;
      cfg.perturbation = p;
    }
  }
  if (cmd == "bilinear" && cfg.trunc_level <= 0.0) cfg.trunc_level = 10.0;

  Run run(cmd, cfg, o.out);

  if (cmd == "sample") {
    cfg.validate();
    const int n = cfg.n_list.back();
    const Eigen::MatrixXd X = ellab::sample_elliptic(n, cfg.atom_spec(), cfg.seed).normalized();
    std::ostringstream ss;
    ellab::write_matrix_csv(ss, X);
    run.emit("sample.csv", ss.str());
    run.finish();
    std::cout << "sample: n=" << n << " out=" << run.outdir.string() << "\n";
    return 0;
  }

  if (cmd == "theory") {
    const cd z = cfg.z;
    const double dist = ellab::dist_to_ellipse(cfg.rho, z);
    std::string text;
    text += "z: " + fg(z.real()) + " " + fg(z.imag()) + "\n";
    text += "dist_to_ellipse: " + fg(dist) + "\n";
    if (dist > 0.0) {
      const cd m = ellab::m_of_z(cfg.rho, z);
      const cd hinv = ellab::inverse_outlier_map(cfg.rho, z);
      text += "m: " + fg(m.real()) + " " + fg(m.imag()) + "\n";
      text += "h_inverse: " + fg(hinv.real()) + " " + fg(hinv.imag()) + "\n";
    } else {
      text += "m: undefined inside the ellipse\n";
    }
    std::cout << text;
    run.emit("theory.txt", text);
    run.finish();
    return 0;
  }

  if (cmd == "density") {
    cfg.validate();
    const double xmax = std::abs(cfg.z) + 3.0;
    std::vector<double> grid;
    for (double x = 0.0; x <= xmax; x += 0.02) grid.push_back(x);
    const ellab::DensityProfile prof = ellab::density_nu(cfg.rho, cfg.z, grid, 5e-5);
    run.emit("density.csv", ellab::density_to_csv(prof));
    run.finish();
    std::cout << "density: support_gap=" << fg(prof.support_gap)
              << " out=" << run.outdir.string() << "\n";
    return 0;
  }

  if (cmd == "figure1") {
    cfg.validate();
    const int n = cfg.n_list.back();
    const ellab::OutlierPrediction pred =
        ellab::predict_outliers(cfg.rho, cfg.perturbation->spectrum(n), cfg.delta);
    const Eigen::MatrixXd X = ellab::sample_elliptic(n, cfg.atom_spec(), cfg.seed).normalized();
    const Eigen::MatrixXcd C = ellab::build_perturbation(n, *cfg.perturbation);
    const Eigen::VectorXcd eig = ellab::eigenvalues(Eigen::MatrixXcd(X.cast<cd>() + C)).eigenvalues;
    std::vector<std::pair<cd, double>> circles;
    const double radius = std::pow(static_cast<double>(n), -0.25);
    for (cd p : pred.predicted) circles.emplace_back(p, radius);
    run.emit("figure1.svg", ellab::spectrum_svg(eig, cfg.rho, circles));
    run.finish();
    std::cout << "figure1: outliers_predicted=" << pred.j << " out=" << run.outdir.string()
              << "\n";
    return 0;
  }

  if (cmd == "outliers") return emit_report(run, ellab::run_outlier_experiment(cfg), o.format);
  if (cmd == "radius") return emit_report(run, ellab::run_spectral_radius(cfg), o.format);
  if (cmd == "lsv") return emit_report(run, ellab::run_lsv_sweep(cfg), o.format);
  if (cmd == "mean") return emit_report(run, ellab::run_nonzero_mean(cfg), o.format);
  if (cmd == "isotropic") return emit_report(run, ellab::run_isotropic_check(cfg), o.format);
  if (cmd == "bilinear")
    return emit_report(run, ellab::run_bilinear_concentration(cfg), o.format);
  if (cmd == "esd") return emit_report(run, ellab::run_esd_uniformity(cfg), o.format);
  if (cmd == "gamma") return emit_report(run, ellab::run_gamma_convergence(cfg), o.format);
  if (cmd == "condition") return emit_report(run, ellab::run_condition_number(cfg), o.format);

  throw ConfigError("unknown command: " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and verification laboratory for elliptic random matrices"};
  app.require_subcommand(1);
  Opts o;

  const std::vector<std::pair<const char*, const char*>> subs = {
      {"sample", "write one normalized sample matrix to sample.csv (row per matrix row)"},
      {"theory", "print m(z), dist to the ellipse, and the inverse outlier map at z"},
      {"density",
       "density profile of the singular-value law at z; density.csv columns: x,p"},
      {"outliers",
       "outlier localization; CSV columns: "
       "trial,trial_seed,n_observed,count_match,n_matched,dist_mean,dist_max,solver_failed"},
      {"radius", "spectral radius vs 1+|rho|; CSV columns: n,mean_radius,sd"},
      {"lsv",
       "least singular value sweep; CSV columns: "
       "re_z,im_z,min_sigma,mean_sigma,mean_cond,support_gap,gap_hits"},
      {"mean",
       "nonzero-mean outlier; CSV columns: "
       "trial,trial_seed,outliers,re_lambda,im_lambda,deviation,ok,solver_failed"},
      {"isotropic", "isotropic resolvent law; CSV columns: pair,trial,sup_err"},
      {"bilinear",
       "bilinear concentration (bounded atoms; --trunc defaults to 10); CSV columns: "
       "n,tail_freq,mean_stat,median_stat"},
      {"esd", "elliptic law uniformity; CSV columns: n,frac_scaled,frac_band"},
      {"gamma",
       "block transform convergence; CSV columns: re_eta,im_eta,re_z,im_z,mean_err"},
      {"condition", "condition number distribution at z; CSV columns: trial,cond"},
      {"figure1", "eigenvalue scatter SVG with predicted outlier circles"},
  };
  for (auto [name, desc] : subs) add_common(app.add_subcommand(name, desc), o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    return dispatch(sub->get_name(), sub, o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
