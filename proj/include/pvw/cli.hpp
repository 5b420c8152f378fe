#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvw/params.hpp"

namespace pvw {

inline constexpr const char* kToolVersion = "pvwave 1.0.0";

/// Run configuration; JSON keys match the field names. gamma is always
/// derived from N and cannot be set.
struct RunConfig {
  double N = 4.0;
  int n0 = 1;
  int K = 3;
  int mode_count = 32;
  int quadrature_points = 128;
  int working_degree = 40;
  double theta0 = 0.0;
  double epsilon = 1e-2;
  std::vector<double> epsilons = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2};        // series residual scan
  std::vector<double> simulate_epsilons = {1e-3, 2e-3, 4e-3, 8e-3};   // nonlinear comparison
  double T_final = 0.0;  // 0: two periods of the fundamental
  double dt = 0.0;       // 0: 0.1 / sqrt(lambda_M)
  int trajectory_stride = 10;
  int eigen_count = 10;
  std::vector<double> scan_nu = {1.0, 1.5, 2.0, 3.0, 0.5};
  int scan_n_max = 20;
  int scan_L_max = 10;
  double scan_tolerance = 1e-9;
  int energy_runs = 3;
  double gamma_corruption = 1.0;  // test hook: scales every Gamma value
  std::string out = "out";

  ModelParams model() const;
  /// Throws ValidationError; includes the check that eps y_1 stays inside
  /// the nonlinearity radius (sup |eps phi_{n0}'| < 1).
  void validate() const;
  nlohmann::json to_json() const;
  /// Starts from `base` and overrides the keys present in `j`.
  static RunConfig from_json(const nlohmann::json& j, const RunConfig& base);
  static RunConfig from_json(const nlohmann::json& j);
  /// key=value override; value is read as JSON when it parses, else as a string.
  void apply_override(const std::string& assignment);
  bool operator==(const RunConfig&) const = default;
};

struct ArtifactEntry {
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
};

/// Writes artifacts into a directory and records their checksums.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string dir);
  void write(const std::string& name, const std::string& content);
  const std::vector<ArtifactEntry>& entries() const { return entries_; }
  const std::string& dir() const { return dir_; }
  /// manifest.json: config echo, version, timestamps, command, checksums.
  void write_manifest(const std::string& command, const RunConfig& config, const std::string& started,
                      const std::string& finished) const;

 private:
  std::string dir_;
  std::vector<ArtifactEntry> entries_;
};

std::string sha256_hex(const std::string& data);

/// Checksums recorded in a manifest.json, keyed by artifact path.
std::map<std::string, std::string> read_manifest_checksums(const std::string& manifest_path);

/// Entry point: returns 0 on success, 1 on validation errors, 2 on numerical
/// failures (including failed verification checks).
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace pvw
