#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pvw/eigen_basis.hpp"
#include "pvw/params.hpp"
#include "pvw/series.hpp"
#include "pvw/weighted_space.hpp"

namespace pvw {

/// (-lambda - lap) y = f on (0,1) with y(1) = 0.
struct EllipticProblem {
  double lambda = 0.0;
  PowerSeries f;
  std::optional<int> resonant_index;
};

struct EllipticSolution {
  PowerSeries y;
  double homogeneous_const = 0.0;   // multiple of Phi_nu(lambda z) added for y(1) = 0
  double projection_removed = 0.0;  // (f|phi_q) in the resonant branch
};

/// |lambda - lambda_q| < 1e-8 max(1, lambda_q).
bool is_resonant(double lambda, double lambda_q);

/// Index q <= max_index with lambda_q resonant with `lambda`, if any.
std::optional<int> find_resonance(const ModelParams& params, double lambda, int max_index = 200);

/// Coefficients from a_{k+1} = -(lambda a_k + c_k) / ((k+1)(k+N/2)) starting
/// at a0, with no boundary condition imposed. Truncation degree f.cap() + 1.
PowerSeries recurrence_solution(double lambda, const PowerSeries& f, double a0, double N);

/// Recurrence solution corrected by C Phi_nu(lambda z) so that y(1) = 0.
/// Throws NearResonanceError when |Phi_nu(lambda)| < 1e-8 and ValidationError
/// when the problem is flagged resonant.
EllipticSolution solve_series(const EllipticProblem& prob, const ModelParams& params, double a0 = 0.0);

/// lambda = 0 by the Green representation, termwise on the series.
EllipticSolution solve_green_zero(const PowerSeries& f, double N);

/// Green representation for a callable right side, evaluated at `points`.
std::vector<double> solve_green_zero(const std::function<double(double)>& f, double N,
                                     const std::vector<double>& points);

/// lambda = 0 through the kernel (1 - (w/z)^{N/2-1}), termwise on the series.
EllipticSolution solve_dirichlet_zero(const PowerSeries& f, double N);
std::vector<double> solve_dirichlet_zero(const std::function<double(double)>& f, double N,
                                         const std::vector<double>& points);

/// Fredholm branch at lambda = lambda_q: solves for f - (f|phi_q) phi_q and
/// removes the phi_q component of the result. `phi_q` must carry a series.
EllipticSolution solve_resonant(const EllipticProblem& prob, const ModelParams& params, const EigenPair& phi_q,
                                const QuadratureRule& rule);

/// (-lambda - lap) y - f as a series.
PowerSeries elliptic_defect(const PowerSeries& y, double lambda, const PowerSeries& f, double N);

/// ||(-lambda - lap) y - f|| in the weighted norm.
double elliptic_residual(const PowerSeries& y, double lambda, const PowerSeries& f, double N,
                         const QuadratureRule& rule);

}  // namespace pvw
