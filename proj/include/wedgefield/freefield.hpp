#pragma once

#include <array>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "wedgefield/moyal.hpp"

namespace wedgefield {

/// Explicit shell nodes: spatial momenta with d^3q weights.
struct ShellLattice {
  std::vector<Eigen::Vector3d> momenta;
  std::vector<double> weights;

  /// Tensor Gauss-Legendre grid with n nodes per axis on [-P, P]^3.
  static ShellLattice gaussLegendreGrid(int n, double cutoff);
  std::size_t size() const { return momenta.size(); }
};

/// Mass plus the quadrature rule for shell integrals d^3q / (2 omega_q).
///
/// Each Wick contraction (i, j) integrates over the cube [-R, R]^3, where R is
/// the cutoff or, if smaller, the radius beyond which |f_i~(q) f_j~(-q)| / 2 omega
/// stays below pairEps times its sampled peak. Nodes per axis are nodesPerAxis
/// plus an allowance proportional to the oscillation frequency times R.
struct MassShellMeasure {
  double mass = 1;
  double cutoff = 6;
  int nodesPerAxis = 24;
  double pairEps = 1e-10;
  double oscillation = 0.6;
  std::optional<ShellLattice> lattice;

  /// Builds a measure and certifies it on a reference Gaussian pair: doubling
  /// nodesPerAxis must change omega_2 by < 1e-8 relative.
  static MassShellMeasure certified(double mass, double cutoff, int nodesPerAxis);
  static MassShellMeasure onLattice(double mass, ShellLattice lattice);
};

double shellEnergy(double mass, const Eigen::Vector3d& q);
FourVector onShell(double mass, const Eigen::Vector3d& q);

/// Perfect matching as (i, j) pairs with i < j, 0-based.
using Pairing = std::vector<std::pair<int, int>>;
std::vector<Pairing> wickPairings(int n);

/// omega_2(f (x) g) = 2 pi int d^3q / (2 omega_q) f~(q) g~(-q).
Complex twoPoint(const TestFunction& f, const TestFunction& g, const MassShellMeasure& mu);
Estimated twoPointEstimated(const TestFunction& f, const TestFunction& g, const MassShellMeasure& mu);

/// Free-field vacuum functional on twisted tensors (degree <= 6), with a
/// node-halving plus tail error estimate.
Estimated vacuumFunctional(const TensorPoly& f, const MassShellMeasure& mu);

/// (f, g)_theta = omega(u_theta(f* (x) g)).
Estimated innerProductTheta(const TensorPoly& f, const TensorPoly& g, const NoncommMatrix& theta,
                            const MassShellMeasure& mu);

/// Vacuum expectation of deformed field products on a truncated Fock space
/// over the lattice modes. Each term must carry a uniform phase twist, which
/// is added to theta.
Complex fockOracle(const TensorPoly& f, const NoncommMatrix& theta, const ShellLattice& lattice,
                   double mass);

/// Largest Fock dimension fockOracle accepts.
constexpr std::size_t kFockDimensionLimit = 2'000'000;

/// Drops cached pair rules (memory control between experiments).
void clearShellCache();

}  // namespace wedgefield
