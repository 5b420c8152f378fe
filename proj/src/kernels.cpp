#include "pvw/kernels.hpp"

#include <algorithm>

#include "pvw/errors.hpp"

namespace pvw {

namespace {

bool go_parallel(const ModalMatrix& b, Exec exec) {
  return exec == Exec::Parallel && static_cast<long>(b.modes) * b.nodes >= kParallelThreshold;
}

}  // namespace

void synthesize(const ModalMatrix& basis, const std::vector<double>& coeffs, std::vector<double>& out, Exec exec) {
  if (static_cast<int>(coeffs.size()) != basis.modes) throw ValidationError("coefficient count does not match basis");
  out.assign(static_cast<std::size_t>(basis.nodes), 0.0);
  const int q = basis.nodes, m = basis.modes;
  // Mode-major over a node range; every out[i] sums over n in the same order.
  auto accumulate = [&](int lo, int hi) {
    for (int n = 0; n < m; ++n) {
      const double c = coeffs[n];
      if (c == 0.0) continue;
      const double* row = &basis.data[static_cast<std::size_t>(n) * q];
      for (int i = lo; i < hi; ++i) out[i] += c * row[i];
    }
  };
  if (go_parallel(basis, exec)) {
    constexpr int kBlock = 256;
    const int blocks = (q + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
    for (int b = 0; b < blocks; ++b) accumulate(b * kBlock, std::min(q, (b + 1) * kBlock));
  } else {
    accumulate(0, q);
  }
}

void project(const ModalMatrix& basis, const std::vector<double>& weights, const std::vector<double>& f,
             std::vector<double>& out, Exec exec) {
  const int q = basis.nodes, m = basis.modes;
  if (static_cast<int>(f.size()) != q || static_cast<int>(weights.size()) != q)
    throw ValidationError("grid length does not match basis");
  out.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<double> wf(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) wf[i] = weights[i] * f[i];
  auto row_dot = [&](int n) {
    const double* row = &basis.data[static_cast<std::size_t>(n) * q];
    double s = 0.0;
    for (int i = 0; i < q; ++i) s += wf[i] * row[i];
    return s;
  };
  if (go_parallel(basis, exec)) {
#pragma omp parallel for schedule(static)
    for (int n = 0; n < m; ++n) out[n] = row_dot(n);
  } else {
    for (int n = 0; n < m; ++n) out[n] = row_dot(n);
  }
}

}  // namespace pvw
