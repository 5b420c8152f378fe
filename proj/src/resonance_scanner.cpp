#include "pvw/resonance_scanner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "pvw/errors.hpp"
#include "pvw/special_functions.hpp"

namespace pvw {

namespace {

bool is_control(double nu) { return nu == 0.5; }

// Newton polish of a zero already accurate to ~1e-12.
double refine_zero(Order nu, double r) {
  for (int it = 0; it < 10; ++it) {
    const double step = eval_bessel_j(nu, r) / eval_bessel_j_derivative(nu, r);
    r -= step;
    if (std::abs(step) < 1e-15 * r) break;
  }
  return r;
}

// Enough zeros to bracket every point up to x_max; j_{nu,k} >= k pi for nu >= 1/2.
std::vector<double> zeros_up_to(Order nu, double x_max) {
  const int count = static_cast<int>(x_max / std::numbers::pi) + 3;
  return bessel_zeros(nu, count);
}

ScanRecord evaluate_cell(double nu_value, int n, int L, const std::vector<double>& zeros) {
  const Order nu(nu_value);
  ScanRecord r;
  r.nu = nu_value;
  r.n = n;
  r.L = L;
  r.control = is_control(nu_value);
  r.x = L * zeros[n - 1];
  auto nearest = [&](double x) {
    const auto it = std::lower_bound(zeros.begin(), zeros.end(), x);
    if (it == zeros.end()) throw NumericalError("zero table does not reach the evaluation point");
    std::size_t q = static_cast<std::size_t>(it - zeros.begin());
    if (q > 0 && x - zeros[q - 1] < *it - x) --q;
    return q;
  };
  std::size_t q = nearest(r.x);
  r.distance = std::abs(r.x - zeros[q]);
  if (r.distance < kNearMiss) {
    r.refined = true;
    r.x = L * refine_zero(nu, zeros[n - 1]);
    r.distance = std::abs(r.x - refine_zero(nu, zeros[q]));
  }
  r.nearest_q = static_cast<int>(q) + 1;
  r.value = eval_bessel_j(nu, r.x);
  return r;
}

std::string to_string_17(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void ScanGrid::validate() const {
  if (nu_values.empty()) throw ValidationError("scan grid needs at least one order");
  for (double nu : nu_values)
    if (!(nu >= 1.0) && !is_control(nu)) throw ValidationError("scan orders must be >= 1 (or the 1/2 control row)");
  if (n_max < 1) throw ValidationError("scan needs n_max >= 1");
  if (L_max < 2) throw ValidationError("scan needs L_max >= 2");
  if (!(tolerance > 0.0)) throw ValidationError("coincidence tolerance must be positive");
}

double ScanRecord::distance_pi() const { return distance / std::numbers::pi; }
double ResonanceVerdict::margin_pi() const { return margin / std::numbers::pi; }

std::string resonance_label(int L, bool resonant) {
  if (L == 2) return resonant ? "Case-2" : "Case-1";
  if (L == 3) return resonant ? "Case-1.2" : "Case-1.1";
  return resonant ? "resonant" : "non-resonant";
}

ScanReport scan_conjecture(const ScanGrid& grid) {
  grid.validate();
  ScanReport rep;
  rep.grid = grid;
  const int nus = static_cast<int>(grid.nu_values.size());
  const int per_nu = grid.n_max * (grid.L_max - 1);

  // Zero tables per order; a failure marks that order's cells only.
  std::vector<std::vector<double>> tables(static_cast<std::size_t>(nus));
  std::vector<std::string> table_error(static_cast<std::size_t>(nus));
#pragma omp parallel for schedule(dynamic)
  for (int a = 0; a < nus; ++a) {
    try {
      const Order nu(grid.nu_values[a]);
      const double top = bessel_zeros(nu, grid.n_max).back();
      tables[a] = zeros_up_to(nu, grid.L_max * top + 1.0);
    } catch (const std::exception& e) {
      table_error[a] = e.what();
    }
  }

  rep.records.resize(static_cast<std::size_t>(nus) * per_nu);
  const int total = static_cast<int>(rep.records.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (int idx = 0; idx < total; ++idx) {
    const int a = idx / per_nu;
    const int rest = idx % per_nu;
    const int n = rest / (grid.L_max - 1) + 1;
    const int L = rest % (grid.L_max - 1) + 2;
    ScanRecord r;
    r.nu = grid.nu_values[a];
    r.n = n;
    r.L = L;
    r.control = is_control(r.nu);
    if (!table_error[a].empty()) {
      r.error = "zero finder: " + table_error[a];
    } else {
      try {
        r = evaluate_cell(grid.nu_values[a], n, L, tables[a]);
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
    rep.records[idx] = r;
  }

  // Lexicographic (nu, n, L) order, independent of the grid's listing order.
  std::stable_sort(rep.records.begin(), rep.records.end(), [](const ScanRecord& p, const ScanRecord& q) {
    if (p.nu != q.nu) return p.nu < q.nu;
    if (p.n != q.n) return p.n < q.n;
    return p.L < q.L;
  });

  rep.global_min_abs_value = INFINITY;
  rep.min_margin = INFINITY;
  for (int i = 0; i < total; ++i) {
    const ScanRecord& r = rep.records[i];
    if (!r.error.empty()) {
      ++rep.failures;
      continue;
    }
    if (r.control) {
      rep.control_max_abs_value = std::max(rep.control_max_abs_value, std::abs(r.value));
    } else {
      if (std::abs(r.value) < rep.global_min_abs_value) {
        rep.global_min_abs_value = std::abs(r.value);
        rep.argmin_index = i;
      }
      rep.min_margin = std::min(rep.min_margin, r.distance);
    }
    if (r.L <= 3) {
      ResonanceVerdict v;
      v.nu = r.nu;
      v.n0 = r.n;
      v.L = r.L;
      v.q = r.nearest_q;
      v.margin = r.distance;
      v.tolerance = grid.tolerance;
      v.resonant = r.distance < grid.tolerance;
      v.label = resonance_label(r.L, v.resonant);
      rep.verdicts.push_back(v);
    }
  }
  return rep;
}

ResonanceVerdict detect_resonance(const ModelParams& params, int L, double tolerance) {
  if (L < 2) throw ValidationError("resonance test needs L >= 2");
  if (params.n0 < 1) throw ValidationError("n0 must be >= 1");
  const Order nu(params.nu());
  const double jn = bessel_zeros(nu, params.n0).back();
  const std::vector<double> zeros = zeros_up_to(nu, L * jn + 1.0);
  const ScanRecord r = evaluate_cell(params.nu(), params.n0, L, zeros);
  ResonanceVerdict v;
  v.nu = params.nu();
  v.n0 = params.n0;
  v.L = L;
  v.q = r.nearest_q;
  v.margin = r.distance;
  v.tolerance = tolerance;
  v.resonant = r.distance < tolerance;
  v.label = resonance_label(L, v.resonant);
  return v;
}

std::string scan_csv(const ScanReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "nu,n,L,x,value,nearest_q,distance,distance_pi,refined,control,status\n";
  for (const auto& r : report.records) {
    os << r.nu << ',' << r.n << ',' << r.L << ',' << r.x << ',' << r.value << ',' << r.nearest_q << ','
       << r.distance << ',' << r.distance_pi() << ',' << (r.refined ? 1 : 0) << ',' << (r.control ? 1 : 0) << ','
       << (r.error.empty() ? "ok" : "failed: " + r.error) << '\n';
  }
  return os.str();
}

std::string scan_summary_json(const ScanReport& report) {
  using nlohmann::json;
  json j;
  j["note"] = "numerical evidence only; not a proof";
  j["grid"] = {{"nu_values", report.grid.nu_values},
               {"n_max", report.grid.n_max},
               {"L_max", report.grid.L_max},
               {"tolerance", report.grid.tolerance}};
  j["cells"] = report.records.size();
  j["failures"] = report.failures;
  if (report.argmin_index >= 0) {
    const auto& r = report.records[static_cast<std::size_t>(report.argmin_index)];
    j["global_min_abs_value"] = {{"value", to_string_17(report.global_min_abs_value)},
                                 {"nu", r.nu},
                                 {"n", r.n},
                                 {"L", r.L}};
    j["min_margin"] = to_string_17(report.min_margin);
    j["min_margin_pi"] = to_string_17(report.min_margin / std::numbers::pi);
  }
  j["control_max_abs_value"] = to_string_17(report.control_max_abs_value);
  json verdicts = json::array();
  for (const auto& v : report.verdicts) {
    verdicts.push_back({{"nu", v.nu},
                        {"n0", v.n0},
                        {"L", v.L},
                        {"label", v.label},
                        {"resonant", v.resonant},
                        {"q", v.q},
                        {"margin", to_string_17(v.margin)},
                        {"margin_pi", to_string_17(v.margin_pi())},
                        {"tolerance", v.tolerance}});
  }
  j["verdicts"] = verdicts;
  return j.dump(2);
}

}  // namespace pvw
