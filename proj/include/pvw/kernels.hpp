#pragma once

#include <vector>

namespace pvw {

enum class Exec { Serial, Parallel };

/// Basis values B(n, i) = b_n(z_i), stored row-major by mode.
struct ModalMatrix {
  int modes = 0;
  int nodes = 0;
  std::vector<double> data;

  ModalMatrix() = default;
  ModalMatrix(int m, int q) : modes(m), nodes(q), data(static_cast<std::size_t>(m) * q, 0.0) {}
  double& operator()(int n, int i) { return data[static_cast<std::size_t>(n) * nodes + i]; }
  double operator()(int n, int i) const { return data[static_cast<std::size_t>(n) * nodes + i]; }
};

/// out_i = sum_n c_n B(n, i).
void synthesize(const ModalMatrix& basis, const std::vector<double>& coeffs, std::vector<double>& out,
                Exec exec = Exec::Parallel);

/// out_n = sum_i w_i f_i B(n, i).
void project(const ModalMatrix& basis, const std::vector<double>& weights, const std::vector<double>& f,
             std::vector<double>& out, Exec exec = Exec::Parallel);

/// Below this many multiply-adds the parallel variants run serially.
inline constexpr long kParallelThreshold = 1L << 15;

}  // namespace pvw
