#include "pvw/cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "pvw/eigen_basis.hpp"
#include "pvw/errors.hpp"
#include "pvw/numerics.hpp"
#include "pvw/perturbation.hpp"
#include "pvw/resonance_scanner.hpp"
#include "pvw/special_functions.hpp"
#include "pvw/verification.hpp"
#include "pvw/wave_dynamics.hpp"

namespace pvw {

using nlohmann::json;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <class T>
void read_key(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "N",          "n0",         "K",          "mode_count",       "quadrature_points", "working_degree",
      "theta0",     "epsilon",    "epsilons",   "simulate_epsilons", "T_final",           "dt",
      "trajectory_stride", "eigen_count", "scan_nu", "scan_n_max", "scan_L_max",        "scan_tolerance",
      "energy_runs", "gamma_corruption", "out"};
  return keys;
}

// Restores the Gamma hook when a command ends, however it ends.
struct GammaHook {
  explicit GammaHook(double factor) { testing::set_gamma_corruption(factor); }
  ~GammaHook() { testing::set_gamma_corruption(1.0); }
};

double two_periods(const PerturbationResult& r) { return 2.0 * r.period(); }

std::vector<double> sample_times(double period, int count) {
  std::vector<double> t;
  for (int i = 0; i < count; ++i) t.push_back(period * (0.05 + 0.9 * i / (count - 1)));
  return t;
}

void cmd_eigen(const RunConfig& cfg, ArtifactWriter& out) {
  const ModelParams p = cfg.model();
  const auto basis = eigen_basis(p, cfg.eigen_count);
  std::ostringstream csv;
  csv << "n,j,lambda,ratio\n";
  json modes = json::array();
  for (const auto& e : basis) {
    const double j = 2.0 * std::sqrt(e.lambda);
    const double ratio = e.lambda / (std::numbers::pi * std::numbers::pi * e.index * e.index / 4.0);
    csv << e.index << ',' << csv_number(j) << ',' << csv_number(e.lambda) << ',' << csv_number(ratio) << '\n';
    json m = {{"n", e.index}, {"lambda", e.lambda}, {"norm_const", e.norm_const}, {"has_series", e.has_series}};
    if (e.has_series) {
      m["coefficients"] = e.phi.coeffs();
    } else {
      std::vector<double> values;
      for (double z : uniform_grid(33)) values.push_back(e.value(z));
      m["values_on_uniform_grid_33"] = values;
    }
    modes.push_back(m);
  }
  out.write("eigenvalues.csv", csv.str());
  out.write("eigenfunctions.json", json{{"N", p.N}, {"nu", p.nu()}, {"modes", modes}}.dump(2));
  std::cout << "eigen: " << basis.size() << " modes, lambda_1 = " << csv_number(basis.front().lambda) << '\n';
}

void cmd_series(const RunConfig& cfg, ArtifactWriter& out) {
  const ModelParams p = cfg.model();
  const PerturbationResult r = build_to_order(p);
  if (cfg.K >= 2 && !(r.y20_at_zero > 0.0))
    throw NumericalError("y20(0) is not positive: " + csv_number(r.y20_at_zero));
  const QuadratureRule rule = make_rule(p, cfg.quadrature_points);
  std::ostringstream csv;
  csv << "epsilon,residual\n";
  std::vector<double> res;
  for (double e : cfg.epsilons) {
    res.push_back(residual(r, e, sample_times(r.period(), 10), rule));
    csv << csv_number(e) << ',' << csv_number(res.back()) << '\n';
  }
  const double slope = loglog_slope(cfg.epsilons, res);
  json labels = json::array();
  for (const auto& c : r.case_log) labels.push_back(c.label);
  json summary = {{"K", cfg.K},
                  {"residual_slope", slope},
                  {"expected_slope", cfg.K + 1},
                  {"y20_at_zero", r.y20_at_zero},
                  {"y20_closed_form", r.y20_closed_form},
                  {"period", r.period()},
                  {"case_labels", labels}};
  if (r.has_c3) summary["c3"] = r.c3;
  out.write("series.json", to_json(r));
  out.write("residual_scan.csv", csv.str());
  out.write("series_summary.json", summary.dump(2));
  std::cout << "series: K = " << cfg.K << ", residual slope " << slope << ", y20(0) = " << r.y20_at_zero << '\n';
}

void cmd_simulate(const RunConfig& cfg, ArtifactWriter& out) {
  const ModelParams p = cfg.model();
  const PerturbationResult series = build_to_order(p);
  const GalerkinModel model = make_galerkin(p, cfg.mode_count, std::max(2 * cfg.mode_count, cfg.quadrature_points));
  const double dt = cfg.dt > 0.0 ? cfg.dt : default_dt(model);
  const double T = cfg.T_final > 0.0 ? cfg.T_final : two_periods(series);

  // Linear eigenmode check.
  GalerkinModel linear = model;
  linear.nonlinear = false;
  const double w = std::sqrt(model.lambdas[p.n0 - 1]);
  const auto lin = run_nonlinear(linear, eigenmode_state(linear, p.n0), 2.0 * std::numbers::pi / w, dt, 1 << 30);
  SpectralState expect = eigenmode_state(linear, p.n0);
  const double eigen_error = coefficient_distance(lin.back().c, expect.c);

  // Nonlinear trajectory from y^{(K)} data.
  const TrigPoly yK = series.partial_sum(cfg.epsilon);
  const SpectralState init = project_state(model, yK.at(0.0), yK.d_t().at(0.0), 0.0);
  const auto traj = run_nonlinear(model, init, T, dt, cfg.trajectory_stride);
  std::ostringstream tcsv;
  write_trajectory_csv(tcsv, traj);
  out.write("trajectory.csv", tcsv.str());

  SpectralState last{traj.back().t, traj.back().c, std::vector<double>(traj.back().c.size(), 0.0)};
  const DensityProfile d = reconstruct_density(model, last, uniform_grid(101));
  std::ostringstream dcsv;
  dcsv << "z,x,rho\n";
  for (std::size_t i = 0; i < d.z.size(); ++i)
    dcsv << csv_number(d.z[i]) << ',' << csv_number(d.x[i]) << ',' << csv_number(d.rho[i]) << '\n';
  out.write("density.csv", dcsv.str());

  // Comparison with the series over an amplitude scan.
  const ConvergenceScan scan = convergence_scan(model, series, cfg.simulate_epsilons, T, dt);
  std::ostringstream ccsv;
  ccsv << "epsilon,max_error\n";
  for (const auto& r : scan.runs) ccsv << csv_number(r.epsilon) << ',' << csv_number(r.max_error) << '\n';
  out.write("comparison.csv", ccsv.str());

  // Linearized run around y^{(K)} with a ramped forcing.
  const double eps = cfg.epsilon;
  const int K = cfg.K;
  const double omega = series.omega;
  const std::vector<double> nodes = model.rule.nodes;
  LinearCoefficientField field = [&](double t) {
    LinearCoefficients a = assemble_linear_coeffs(model, yK, zero_state(model, t), eps, K);
    const double r = smooth_ramp(t, 1.0) * std::cos(omega * t);
    for (std::size_t i = 0; i < nodes.size(); ++i) a.g[i] = r * (1.0 - nodes[i]);
    return a;
  };
  const LinearRun run = run_linearized(model, field, zero_state(model, -1.0), T, dt);
  std::ostringstream ecsv;
  ecsv << "t,E,sqrtE,bound\n";
  for (std::size_t i = 0; i < run.trace.times.size(); i += static_cast<std::size_t>(cfg.trajectory_stride))
    ecsv << csv_number(run.trace.times[i]) << ',' << csv_number(run.trace.E[i]) << ','
         << csv_number(std::sqrt(run.trace.E[i])) << ',' << csv_number(run.trace.bound[i]) << '\n';
  out.write("energy.csv", ecsv.str());

  json summary = {{"T_final", T},
                  {"dt", dt},
                  {"modes", model.modes},
                  {"eigenmode_error", eigen_error},
                  {"comparison_slope", scan.slope},
                  {"comparison_required", K + 0.9},
                  {"energy_growth_rate", run.trace.A},
                  {"energy_worst_excess", run.trace.worst_excess()},
                  {"final_x_F", traj.back().x_F},
                  {"density_exponent", d.exponent},
                  {"density_expected", 1.0 / (p.gamma() - 1.0)}};
  out.write("simulate_summary.json", summary.dump(2));
  std::cout << "simulate: eigenmode error " << eigen_error << ", comparison slope " << scan.slope
            << ", energy excess " << run.trace.worst_excess() << ", density exponent " << d.exponent << '\n';
}

void cmd_scan(const RunConfig& cfg, ArtifactWriter& out) {
  ScanGrid g;
  g.nu_values = cfg.scan_nu;
  g.n_max = cfg.scan_n_max;
  g.L_max = cfg.scan_L_max;
  g.tolerance = cfg.scan_tolerance;
  const ScanReport rep = scan_conjecture(g);
  out.write("scan.csv", scan_csv(rep));
  out.write("scan_summary.json", scan_summary_json(rep));
  for (const auto& r : rep.records)
    if (!r.error.empty())
      std::cerr << "scan cell nu=" << r.nu << " n=" << r.n << " L=" << r.L << " failed: " << r.error << '\n';
  std::cout << "scan: " << rep.records.size() << " cells, min |J| over nu >= 1: " << rep.global_min_abs_value
            << ", failures " << rep.failures << " (numerical evidence only)\n";
}

bool cmd_verify(const RunConfig& cfg, ArtifactWriter& out) {
  const double N = cfg.N;
  CheckSuite suite;
  suite.add(check_reference_values());
  suite.add(check_bessel_layer({}));
  suite.add(check_orthonormality(N, 20, cfg.quadrature_points));
  suite.add(check_elliptic(N, 15));
  suite.add(check_identities(20));
  suite.add(check_perturbation(N, {1, 2, 3}));
  suite.add(check_energy(N, cfg.energy_runs, 16, 3.0));
  suite.add(check_vacuum({N}));
  out.write("verify.txt", suite.text());
  out.write("verify.json", suite.json());
  std::cout << suite.text();
  if (!suite.all_passed()) {
    std::cerr << "verify: " << suite.failures().size() << " check(s) failed:\n";
    for (const auto& f : suite.failures()) std::cerr << "  - " << f << '\n';
  }
  return suite.all_passed();
}

}  // namespace

ModelParams RunConfig::model() const {
  ModelParams p;
  p.N = N;
  p.n0 = n0;
  p.theta0 = theta0;
  p.order = K;
  p.epsilon = epsilon;
  p.working_degree = working_degree;
  p.quadrature_points = quadrature_points;
  return p;
}

void RunConfig::validate() const {
  model().validate();
  if (mode_count < n0) throw ValidationError("mode_count must be at least n0");
  if (epsilons.size() < 2 || simulate_epsilons.size() < 2)
    throw ValidationError("amplitude scans need at least two values");
  for (double e : epsilons)
    if (!(e > 0.0 && e < 1.0)) throw ValidationError("scan amplitudes must lie in (0, 1)");
  for (double e : simulate_epsilons)
    if (!(e > 0.0 && e < 1.0)) throw ValidationError("scan amplitudes must lie in (0, 1)");
  if (!(T_final >= 0.0) || !(dt >= 0.0)) throw ValidationError("T_final and dt must be nonnegative");
  if (trajectory_stride < 1) throw ValidationError("trajectory_stride must be positive");
  if (eigen_count < 1) throw ValidationError("eigen_count must be positive");
  if (energy_runs < 1) throw ValidationError("energy_runs must be positive");
  if (!(gamma_corruption > 0.0)) throw ValidationError("gamma_corruption must be positive");
  if (out.empty()) throw ValidationError("output directory must be named");
  ScanGrid g{scan_nu, scan_n_max, scan_L_max, scan_tolerance};
  g.validate();
  // eps y_1 inside the radius |v| < 1.
  const EigenPair e = eigen_basis(model(), n0).back();
  double slope = 0.0;
  for (double z : uniform_grid(257)) slope = std::max(slope, std::abs(e.derivative(z)));
  if (!(std::abs(epsilon) * slope < 1.0))
    throw ValidationError("epsilon too large: sup|eps phi'| = " + csv_number(std::abs(epsilon) * slope) + " >= 1");
}

json RunConfig::to_json() const {
  return json{{"N", N},
              {"n0", n0},
              {"K", K},
              {"mode_count", mode_count},
              {"quadrature_points", quadrature_points},
              {"working_degree", working_degree},
              {"theta0", theta0},
              {"epsilon", epsilon},
              {"epsilons", epsilons},
              {"simulate_epsilons", simulate_epsilons},
              {"T_final", T_final},
              {"dt", dt},
              {"trajectory_stride", trajectory_stride},
              {"eigen_count", eigen_count},
              {"scan_nu", scan_nu},
              {"scan_n_max", scan_n_max},
              {"scan_L_max", scan_L_max},
              {"scan_tolerance", scan_tolerance},
              {"energy_runs", energy_runs},
              {"gamma_corruption", gamma_corruption},
              {"out", out}};
}

RunConfig RunConfig::from_json(const json& j, const RunConfig& base) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "gamma") throw ValidationError("gamma is derived from N as N/(N-2) and cannot be set");
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw ValidationError("unknown config key '" + key + "'");
  }
  RunConfig c = base;
  read_key(j, "N", c.N);
  read_key(j, "n0", c.n0);
  read_key(j, "K", c.K);
  read_key(j, "mode_count", c.mode_count);
  read_key(j, "quadrature_points", c.quadrature_points);
  read_key(j, "working_degree", c.working_degree);
  read_key(j, "theta0", c.theta0);
  read_key(j, "epsilon", c.epsilon);
  read_key(j, "epsilons", c.epsilons);
  read_key(j, "simulate_epsilons", c.simulate_epsilons);
  read_key(j, "T_final", c.T_final);
  read_key(j, "dt", c.dt);
  read_key(j, "trajectory_stride", c.trajectory_stride);
  read_key(j, "eigen_count", c.eigen_count);
  read_key(j, "scan_nu", c.scan_nu);
  read_key(j, "scan_n_max", c.scan_n_max);
  read_key(j, "scan_L_max", c.scan_L_max);
  read_key(j, "scan_tolerance", c.scan_tolerance);
  read_key(j, "energy_runs", c.energy_runs);
  read_key(j, "gamma_corruption", c.gamma_corruption);
  read_key(j, "out", c.out);
  return c;
}

RunConfig RunConfig::from_json(const json& j) { return from_json(j, RunConfig{}); }

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ValidationError("--param expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  *this = from_json(json{{key, value}}, *this);
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

ArtifactWriter::ArtifactWriter(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ValidationError("cannot create output directory '" + dir_ + "': " + ec.message());
}

void ArtifactWriter::write(const std::string& name, const std::string& content) {
  const std::filesystem::path path = std::filesystem::path(dir_) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path.string() + "'");
  f << content;
  f.close();
  if (!f) throw ValidationError("failed writing '" + path.string() + "'");
  entries_.push_back({name, sha256_hex(content), content.size()});
}

void ArtifactWriter::write_manifest(const std::string& command, const RunConfig& config, const std::string& started,
                                    const std::string& finished) const {
  json arts = json::array();
  for (const auto& e : entries_) arts.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  const json m = {{"tool", kToolVersion},
                  {"command", command},
                  {"config", config.to_json()},
                  {"gamma", config.N / (config.N - 2.0)},
                  {"started_utc", started},
                  {"finished_utc", finished},
                  {"artifacts", arts}};
  std::ofstream f(std::filesystem::path(dir_) / "manifest.json", std::ios::binary);
  f << m.dump(2) << '\n';
  if (!f) throw ValidationError("failed writing manifest");
}

std::map<std::string, std::string> read_manifest_checksums(const std::string& manifest_path) {
  std::ifstream f(manifest_path);
  if (!f) throw ValidationError("cannot read manifest '" + manifest_path + "'");
  const json m = json::parse(f);
  std::map<std::string, std::string> out;
  for (const auto& a : m.at("artifacts")) out[a.at("path").get<std::string>()] = a.at("sha256").get<std::string>();
  return out;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Numerical lab for the degenerate wave equation y_tt - lap y = G_I(v) lap y + G_II(v)"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::vector<std::string> params;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"eigen", "eigenvalues and eigenfunction coefficients"},
      {"series", "perturbation hierarchy and residual scan"},
      {"simulate", "Galerkin trajectories, energy trace and density profile"},
      {"scan", "Bessel zero coincidence scan"},
      {"verify", "one-shot invariant suite"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--param", params, "key=value override (repeatable)")->take_all();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ValidationError("cannot read config '" + config_path + "'");
      const json j = json::parse(f, nullptr, false);
      if (j.is_discarded()) throw ValidationError("config '" + config_path + "' is not valid JSON");
      cfg = RunConfig::from_json(j);
    }
    for (const auto& a : params) cfg.apply_override(a);
    if (!out_dir.empty()) cfg.out = out_dir;
    cfg.validate();

    const GammaHook hook(cfg.gamma_corruption);
    const std::string started = utc_now();
    ArtifactWriter out(cfg.out);
    json echo = cfg.to_json();
    echo.erase("out");
    out.write("config.json", echo.dump(2));
    bool ok = true;
    if (command == "eigen") cmd_eigen(cfg, out);
    if (command == "series") cmd_series(cfg, out);
    if (command == "simulate") cmd_simulate(cfg, out);
    if (command == "scan") cmd_scan(cfg, out);
    if (command == "verify") ok = cmd_verify(cfg, out);
    out.write_manifest(command, cfg, started, utc_now());
    return ok ? 0 : 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("pvwave");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace pvw
