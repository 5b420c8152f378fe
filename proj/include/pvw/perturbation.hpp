#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pvw/eigen_basis.hpp"
#include "pvw/params.hpp"
#include "pvw/series.hpp"
#include "pvw/trig_poly.hpp"
#include "pvw/weighted_space.hpp"

namespace pvw {

/// Shared, read-only data for building the hierarchy.
struct PerturbationContext {
  ModelParams params;
  double omega = 0.0;  // base frequency; sqrt(lambda_{n0}) unless overridden
  int cap = 40;
  NonlinearitySeries nonlin;
  QuadratureRule rule;
  EigenPair fundamental;
  std::vector<double> lambdas;  // enough of the spectrum to decide resonance
};

/// `omega_override` replaces sqrt(lambda_{n0}); used to force resonances.
PerturbationContext make_context(const ModelParams& params, std::optional<double> omega_override = std::nullopt);

struct CaseRecord {
  int order = 0;
  TrigKey key;
  bool resonant = false;
  int q = 0;              // resonant eigen-index, 0 when none
  double margin = 0.0;    // min_q |2 L omega - j_q|, in zero units
  double projection = 0;  // (f|phi_q) removed in the resonant branch
  std::string label;
};

struct PerturbationResult {
  ModelParams params;
  double omega = 0.0;
  std::vector<TrigPoly> orders;  // y_1 .. y_K
  std::vector<TrigPoly> rhs;     // right sides, rhs[k-1] for order k (empty for k = 1)
  std::vector<CaseRecord> case_log;
  double c3 = 0.0;
  bool has_c3 = false;
  double y20_at_zero = 0.0;
  double y20_closed_form = 0.0;

  /// y^{(K)} = sum_k eps^k y_k.
  TrigPoly partial_sum(double eps) const;
  double period() const;
};

TrigPoly build_y1(const PerturbationContext& ctx);

/// Right side of the order-k equation from y_1 .. y_{k-1}.
TrigPoly assemble_rhs(const std::vector<TrigPoly>& orders, int k, const PerturbationContext& ctx);

struct ModeSolution {
  TrigPoly y;
  CaseRecord record;
};

/// Solves (d_t^2 - lap) y = t^M trig(L Theta) f with y(t, 1) = 0.
ModeSolution solve_mode(int M, int L, Parity parity, const PowerSeries& f, const PerturbationContext& ctx);

/// Solves (d_t^2 - lap) y = rhs term by term (in parallel), merged by key.
TrigPoly solve_wave(const TrigPoly& rhs, const PerturbationContext& ctx, int order,
                    std::vector<CaseRecord>* log = nullptr);

PerturbationResult build_to_order(const ModelParams& params, std::optional<double> omega_override = std::nullopt);

/// (N-1)/(2(N-2)) int_0^1 phi'(z)^2 dz for the fundamental mode.
double y20_closed_form(const ModelParams& params, const EigenPair& fundamental);

/// max_t || y_tt - lap y - G_I(v) lap y - G_II(v) || for y = y^{(K)}.
double residual(const PerturbationResult& result, double eps, const std::vector<double>& t_samples,
                const QuadratureRule& rule);

/// max_t || (d_t^2 - lap) y_k - rhs_k || / max(||rhs_k||, tiny).
double order_defect(const PerturbationResult& result, int k, const std::vector<double>& t_samples,
                    const QuadratureRule& rule);

/// (1/T) int_0^T y^{(K)}(t, 0) dt.
double time_average_at_boundary(const PerturbationResult& result, double eps, double T);

std::string to_json(const PerturbationResult& result);

}  // namespace pvw
