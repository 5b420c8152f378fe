#pragma once

#include <string>
#include <vector>

#include "pvw/params.hpp"

namespace pvw {

/// Cells (nu, n, L) for the values J_nu(L j_{nu,n}). Orders must be >= 1;
/// nu = 1/2 is also admitted as a control row, where every value vanishes.
struct ScanGrid {
  std::vector<double> nu_values;
  int n_max = 20;
  int L_max = 10;
  double tolerance = 1e-9;  // coincidence threshold for L j_n = j_q
  void validate() const;
};

struct ScanRecord {
  double nu = 0.0;
  int n = 0;
  int L = 0;
  double x = 0.0;        // L j_{nu,n}
  double value = 0.0;    // J_nu(x)
  int nearest_q = 0;     // index of the closest zero
  double distance = 0.0; // |x - j_{nu,q}|
  bool refined = false;  // distance below the near-miss threshold, zero polished
  bool control = false;  // nu = 1/2 row
  std::string error;     // nonempty when the cell failed
  double distance_pi() const;
};

struct ResonanceVerdict {
  double nu = 0.0;
  int n0 = 0;
  int L = 0;
  bool resonant = false;
  int q = 0;
  double margin = 0.0;  // min_q |L j_{n0} - j_q|
  double tolerance = 0.0;
  std::string label;    // Case-1 / Case-2 for L = 2, Case-1.1 / Case-1.2 for L = 3
  double margin_pi() const;
};

struct ScanReport {
  ScanGrid grid;
  std::vector<ScanRecord> records;  // ordered by (nu, n, L)
  double global_min_abs_value = 0.0;  // over rows with nu >= 1
  int argmin_index = -1;
  double min_margin = 0.0;            // over rows with nu >= 1
  double control_max_abs_value = 0.0; // over the nu = 1/2 row, 0 when absent
  int failures = 0;
  std::vector<ResonanceVerdict> verdicts;  // cells with L in {2, 3}
};

/// Margins below this trigger Newton refinement of the zero to ~1e-14.
inline constexpr double kNearMiss = 1e-3;

/// Label for a resonance decision at multiple L.
std::string resonance_label(int L, bool resonant);

/// Evaluates every cell in parallel; the report does not depend on the
/// thread count.
ScanReport scan_conjecture(const ScanGrid& grid);

/// Whether L j_{nu,n0} coincides with a zero j_{nu,q} (nu = N/2 - 1).
ResonanceVerdict detect_resonance(const ModelParams& params, int L, double tolerance = 1e-9);

std::string scan_csv(const ScanReport& report);
std::string scan_summary_json(const ScanReport& report);

}  // namespace pvw
