#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "pvw/eigen_basis.hpp"
#include "pvw/kernels.hpp"
#include "pvw/params.hpp"
#include "pvw/perturbation.hpp"
#include "pvw/series.hpp"
#include "pvw/trig_poly.hpp"
#include "pvw/weighted_space.hpp"

namespace pvw {

/// Galerkin discretization in the first M eigenfunctions. The Laplacian is
/// diagonal and the boundary condition holds for every coefficient vector.
struct GalerkinModel {
  ModelParams params;
  int modes = 0;
  QuadratureRule rule;
  std::vector<EigenPair> basis;
  std::vector<double> lambdas;
  ModalMatrix phi;    // phi_n(z_i)
  ModalMatrix dphi;   // phi_n'(z_i)
  ModalMatrix d2phi;  // phi_n''(z_i)
  bool nonlinear = true;
  Exec exec = Exec::Parallel;
};

/// `points` <= 0 picks max(2M, params.quadrature_points).
GalerkinModel make_galerkin(const ModelParams& params, int modes = 32, int points = 0);

/// 0.1 / sqrt(lambda_M).
double default_dt(const GalerkinModel& model);

struct SpectralState {
  double t = 0.0;
  std::vector<double> c;
  std::vector<double> cdot;
  int mode_count() const { return static_cast<int>(c.size()); }
};

SpectralState zero_state(const GalerkinModel& model, double t = 0.0);
SpectralState eigenmode_state(const GalerkinModel& model, int n, double t = 0.0);

/// Projects y and y_t, given as power series, onto the model.
SpectralState project_state(const GalerkinModel& model, const PowerSeries& y, const PowerSeries& yt, double t);

GridFunction node_values(const GalerkinModel& model, const std::vector<double>& c);
GridFunction node_derivative(const GalerkinModel& model, const std::vector<double>& c);
double coefficient_distance(const std::vector<double>& a, const std::vector<double>& b);

/// One Lawson (integrating-factor) RK4 step of c'' = -lambda c + (RHS|phi_n)
/// with RHS = G_I(v) lap y + G_II(v) evaluated at the nodes. The linear part
/// is propagated exactly. Throws NumericalError on radius violation
/// (sup|v| >= 1 on the nodes) or when ||c|| grows by more than 1e3 in a step.
SpectralState step_nonlinear(const GalerkinModel& model, const SpectralState& state, double dt);

/// Node values of the linearized coefficients, all premultiplied by epsilon.
struct LinearCoefficients {
  double t = 0.0;
  GridFunction eps_a1;     // epsilon a_1
  GridFunction eps_a2hat;  // epsilon a^_2, so that epsilon a_2 = z epsilon a^_2
  GridFunction g;          // forcing
  GridFunction eps_a1_t;   // d/dt of epsilon a_1
  GridFunction eps_a1_z;   // d/dz of epsilon a_1

  GridFunction eps_a2(const QuadratureRule& rule) const;
  double max_abs_eps_a1() const;
  bool hypothesis_holds() const { return max_abs_eps_a1() <= 0.5; }
  /// eps (||d_t a_1|| + sqrt 2 ||sqrt z (d_z a_1 + a^_2)||) over the nodes.
  double growth_rate(const QuadratureRule& rule) const;
};

using LinearCoefficientField = std::function<LinearCoefficients(double t)>;

/// Coefficients of the equation for the Newton correction h around
/// y = y^{(K)} + eps^K w:
///   eps a_1 = G_I(v), eps a^_2 = D^2G(v) y_zz, with v = -y_z.
/// Does not check the energy hypothesis; see LinearCoefficients::hypothesis_holds.
LinearCoefficients assemble_linear_coeffs(const GalerkinModel& model, const TrigPoly& y_series,
                                          const SpectralState& w, double epsilon, int K);

/// eps a_2 from centered differences of G_I and G_II in v:
/// G_I'(v) lap y + G_II'(v). Independent of the factorized form above.
GridFunction eps_a2_by_differences(const GalerkinModel& model, const TrigPoly& y_series, const SpectralState& w,
                                   double epsilon, int K);

/// One Lawson RK4 step of h_tt - (1 + eps a_1) lap h + eps a^_2 z h_z = g.
/// Throws NumericalError when |eps a_1| > 1/2 at any stage.
SpectralState step_linearized(const GalerkinModel& model, const SpectralState& state,
                              const LinearCoefficientField& coeffs, double dt);

/// int_0^1 (h_t^2 + (1 + eps a_1) z h_z^2) z^{N/2-1} dz.
double energy(const GalerkinModel& model, const SpectralState& state, const LinearCoefficients& coeffs);

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> E;
  std::vector<double> bound;  // e^{A(t-t0)} E(t0)^{1/2} + int e^{A(t-s)} ||g(s)|| ds
  double A = 0.0;             // measured over every coefficient evaluation
  /// max_t (E^{1/2} / bound - 1) over samples with E a normal double; 0 when
  /// there are none.
  double worst_excess() const;
};

struct LinearRun {
  SpectralState final_state;
  EnergyTrace trace;
};

/// Integrates the linearized equation from `initial` to t_end with step dt.
LinearRun run_linearized(const GalerkinModel& model, const LinearCoefficientField& coeffs,
                         const SpectralState& initial, double t_end, double dt);

/// C-infinity step from 0 at t = -tau/2 to 1 at t = 0; zero before, one after.
double smooth_ramp(double t, double tau);

struct DensityProfile {
  double x_F = 1.0;
  std::vector<double> z;
  std::vector<double> x;    // Eulerian position 1 - z + y(z)
  std::vector<double> rho;  // z^{1/(gamma-1)} / (1 + v)
  double exponent = 0.0;    // fitted on z in [1e-6, 1e-2]
};

/// Free-boundary profile of the displacement y on `z_grid`. Throws
/// NumericalError when 1 + v <= 0 somewhere (interior vacuum).
DensityProfile reconstruct_density(const std::function<double(double)>& y, const std::function<double(double)>& dy,
                                   const ModelParams& params, const std::vector<double>& z_grid);
DensityProfile reconstruct_density(const PowerSeries& y, const ModelParams& params, const std::vector<double>& z_grid);
DensityProfile reconstruct_density(const GalerkinModel& model, const SpectralState& state,
                                   const std::vector<double>& z_grid);

/// Uniform grid of `count` points on [0, 1].
std::vector<double> uniform_grid(int count);

/// Sample of a nonlinear trajectory.
struct TrajectorySample {
  double t = 0.0;
  std::vector<double> c;
  double energy = 0.0;  // linear energy int (y_t^2 + z y_z^2) z^{N/2-1}
  double x_F = 1.0;
};

/// Runs the nonlinear system to t_end, recording every `stride` steps.
std::vector<TrajectorySample> run_nonlinear(const GalerkinModel& model, const SpectralState& initial, double t_end,
                                            double dt, int stride);

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& samples);

struct SeriesComparison {
  double epsilon = 0.0;
  double max_error = 0.0;  // max_t ||c(t) - P_M y^{(K)}(t)||
};

/// Nonlinear run started from the projection of y^{(K)}(0), y^{(K)}_t(0),
/// compared with the projection of y^{(K)} on [0, t_end].
SeriesComparison compare_with_series(const GalerkinModel& model, const PerturbationResult& series, double epsilon,
                                     double t_end, double dt, int check_stride = 8);

struct ConvergenceScan {
  std::vector<SeriesComparison> runs;
  double slope = 0.0;
};

/// Independent runs over `epsilons`, in parallel, merged in input order.
ConvergenceScan convergence_scan(const GalerkinModel& model, const PerturbationResult& series,
                                 const std::vector<double>& epsilons, double t_end, double dt);

}  // namespace pvw
