#pragma once

// Reference computations for the tests. Nothing here calls library numerics.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "wedgefield/geometry.hpp"

namespace oracle {

using Complex = std::complex<double>;
using wedgefield::FourVector;

inline constexpr double kEta[4] = {1, -1, -1, -1};

/// Composite Simpson rule, n even.
inline Complex simpson(const std::function<Complex(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  Complex s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// p_mu theta^{mu nu} q_nu by explicit index sums over the full matrix.
inline double bilinear(const std::array<double, 6>& upper, const FourVector& p, const FourVector& q) {
  double t[4][4] = {};
  int s = 0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      t[mu][nu] = upper[s];
      t[nu][mu] = -upper[s];
      ++s;
    }
  double sum = 0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) sum += kEta[mu] * p(mu) * t[mu][nu] * kEta[nu] * q(nu);
  return sum;
}

/// (2 pi)^{-1/2} int exp(-(x-a)^2 / (2 sigma^2) + i s k x - i s p x) dx by Simpson.
inline Complex gaussianAxisTransform(double a, double sigma, double k, double p, int axis) {
  const double s = kEta[axis];
  const double span = 12 * sigma;
  auto f = [&](double x) {
    const double u = (x - a) / sigma;
    return std::exp(-0.5 * u * u) * std::polar(1.0, s * (k - p) * x);
  };
  return simpson(f, a - span, a + span, 4000) / std::sqrt(2 * M_PI);
}

/// Closed-form 1-D factor of an axis-aligned Gaussian transform.
inline Complex gaussianAxisClosed(double a, double sigma, double k, double p, int axis) {
  const double d = p - k;
  return sigma * std::exp(-0.5 * sigma * sigma * d * d) * std::polar(1.0, -kEta[axis] * d * a);
}

/// Sum over all perfect matchings of {0..n-1} (n even).
inline void matchings(std::vector<int> open, std::vector<std::pair<int, int>>& current,
                      const std::function<void(const std::vector<std::pair<int, int>>&)>& visit) {
  if (open.empty()) {
    visit(current);
    return;
  }
  const int first = open.front();
  for (std::size_t k = 1; k < open.size(); ++k) {
    std::vector<int> rest;
    for (std::size_t m = 1; m < open.size(); ++m)
      if (m != k) rest.push_back(open[m]);
    current.emplace_back(first, open[k]);
    matchings(rest, current, visit);
    current.pop_back();
  }
}

inline double shellEnergy(double mass, const Eigen::Vector3d& q) { return std::sqrt(mass * mass + q.squaredNorm()); }

}  // namespace oracle
