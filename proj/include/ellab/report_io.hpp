#pragma once

#include "ellab/block_stieltjes.hpp"
#include "ellab/experiments.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace ellab {

// Serialization layer. Every JSON document carries a top-level
// schema_version; keys are emitted in sorted order and doubles in shortest
// round-trip form, so equal inputs give byte-identical output.
inline constexpr int kReportSchemaVersion = 1;

std::string config_to_json(const ExperimentConfig& cfg, int indent = 2);
ExperimentConfig config_from_json(const std::string& text);  // throws ConfigError

std::string perturbation_to_json(const PerturbationSpec& p, int indent = 2);
PerturbationSpec perturbation_from_json(const std::string& text);

// One JSON document per report kind; the embedded config_hash ties the
// numbers to the configuration that produced them.
std::string report_to_json(const OutlierReport& r, int indent = 2);
std::string report_to_json(const RadiusReport& r, int indent = 2);
std::string report_to_json(const LsvReport& r, int indent = 2);
std::string report_to_json(const MeanShiftReport& r, int indent = 2);
std::string report_to_json(const IsotropicReport& r, int indent = 2);
std::string report_to_json(const BilinearReport& r, int indent = 2);
std::string report_to_json(const EsdReport& r, int indent = 2);
std::string report_to_json(const GammaReport& r, int indent = 2);
std::string report_to_json(const ConditionReport& r, int indent = 2);

// Flat CSV companions (header row + one record per row; %.17g numbers).
std::string report_to_csv(const OutlierReport& r);
std::string report_to_csv(const RadiusReport& r);
std::string report_to_csv(const LsvReport& r);
std::string report_to_csv(const MeanShiftReport& r);
std::string report_to_csv(const IsotropicReport& r);
std::string report_to_csv(const BilinearReport& r);
std::string report_to_csv(const EsdReport& r);
std::string report_to_csv(const GammaReport& r);
std::string report_to_csv(const ConditionReport& r);

// Matrix exports: CSV (one row per matrix row) and binary (uint64 rows,
// uint64 cols, then row-major float64, native endianness).
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& M);
void write_matrix_binary(std::ostream& os, const Eigen::MatrixXd& M);
Eigen::MatrixXd read_matrix_binary(std::istream& is);  // throws std::runtime_error

// Point clouds and density profiles as CSV.
std::string spectrum_to_csv(const Eigen::VectorXcd& eigs);
std::string density_to_csv(const DensityProfile& prof);

// Limit transform on a z grid: rows re_z,im_z,re_m,im_m,residual with
// residual = |rho m^2 + z m + 1|; points inside the ellipse emit nan.
std::string m_grid_to_csv(double rho, const std::vector<cd>& zs);

// Empirical block transform swept along eta = E + i t for one decomposed
// shift: rows E,t,re_a,im_a,re_b,im_b,re_c,im_c.
std::string block_sweep_to_csv(const ShiftedSvd& svd, const std::vector<double>& E_grid,
                               double t);

// Record of one CLI run: what was executed, with which config, when, and the
// content fingerprint of every file written. manifest_record hashes an
// existing file; manifest_ok re-hashes and confirms every entry.
struct ManifestEntry {
  std::string path;
  std::string hash;
};

struct RunManifest {
  std::string command;
  ExperimentConfig config;
  std::string started;   // UTC, ISO 8601
  std::string finished;
  std::vector<ManifestEntry> artifacts;
};

std::string utc_timestamp();
std::string file_content_hash(const std::string& path);  // throws std::runtime_error
void manifest_record(RunManifest& m, const std::string& path);
bool manifest_ok(const RunManifest& m);
std::string manifest_to_json(const RunManifest& m, int indent = 2);

}  // namespace ellab
