#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace wedgefield {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule (thread-safe).
const GaussLegendreRule& gaussLegendre(int n);

/// 1-D rule on [a, b] with n nodes.
GaussLegendreRule gaussLegendre(int n, double a, double b);

struct AdaptiveResult {
  std::complex<double> value;
  double error = 0;
};

/// Globally adaptive Gauss-Kronrod-style bisection using paired 20/40-point
/// Gauss-Legendre panels. Throws QuadratureFailure if relTol is not reached
/// within maxPanels.
AdaptiveResult adaptiveIntegrate(const std::function<std::complex<double>(double)>& f, double a,
                                 double b, double relTol, double absTol = 0,
                                 int maxPanels = 4000);

/// Thread count from WEDGEFIELD_THREADS (default: hardware concurrency).
int threadCount();

/// Runs body(chunk) for chunk in [0, chunks). Chunks are distributed over
/// threads; callers reduce per-chunk results in chunk order so that output
/// does not depend on the thread count.
void parallelChunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

}  // namespace wedgefield

namespace wedgefield {

/// A quadrature value with its error estimate.
struct Estimated {
  std::complex<double> value;
  double estimate = 0;
};

}  // namespace wedgefield
