#include "pvw/params.hpp"

#include <cmath>
#include <string>

#include "pvw/errors.hpp"

namespace pvw {

void ModelParams::validate() const {
  if (!std::isfinite(N) || N < 4.0) {
    throw ValidationError("N must be finite and >= 4 (got " + std::to_string(N) + ")");
  }
  if (n0 < 1) throw ValidationError("n0 must be a positive mode index");
  if (order < 1) throw ValidationError("perturbation order K must be >= 1");
  if (!std::isfinite(theta0)) throw ValidationError("theta0 must be finite");
  if (!std::isfinite(epsilon) || std::abs(epsilon) >= 1.0) {
    throw ValidationError("epsilon must be finite with |epsilon| < 1");
  }
  if (working_degree < 4) throw ValidationError("working_degree must be >= 4");
  if (quadrature_points < 2) throw ValidationError("quadrature_points must be >= 2");
}

}  // namespace pvw
