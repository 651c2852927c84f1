#pragma once

#include <string>
#include <vector>

#include "wedgefield/freefield.hpp"

namespace wedgefield {

/// <Psi(g), [phi^{thetaA}(f1), phi^{thetaB}(f2)] Psi(h)> through the
/// undeformed vacuum functional.
Estimated spectatorMatrixElement(const TensorPoly& g, const TestFunction& f1, const TestFunction& f2,
                                 const NoncommMatrix& thetaA, const NoncommMatrix& thetaB,
                                 const TensorPoly& h, const MassShellMeasure& mu);

/// <p1, p2 | [phi^{thetaA}(x), phi^{thetaB}(y)] Omega> from the twisted Wick
/// rules, without the (2 pi)^{-2} plane-wave normalization.
Complex twoParticleCommutatorKernel(const NoncommMatrix& thetaA, const NoncommMatrix& thetaB,
                                    const FourVector& x, const FourVector& y, const FourVector& p1,
                                    const FourVector& p2, double mass = 1);

/// Closed form -2i (e^{i(p1x+p2y)} - e^{i(p2x+p1y)}) sin(p1 theta p2 / 2).
Complex commutatorClosedForm(const NoncommMatrix& theta, const FourVector& x, const FourVector& y,
                             const FourVector& p1, const FourVector& p2);

struct Spectator {
  std::string label;
  TensorPoly g, h;
};

struct LocalityConfig {
  OrbitParams params{0.5, 0.3};
  NoncommMatrix theta = referenceTheta({0.5, 0.3});
  FourVector translation = FourVector::Zero();
  BumpPacket f1, f2;
  std::vector<Spectator> spectators;
  MassShellMeasure measure;
};

struct SpectatorRow {
  std::string label;
  Estimated wedge, control;
};

struct LocalityReport {
  double magnitude = 0;
  double quadratureEstimate = 0;
  double controlMagnitude = 0;
  std::string verdict;
  std::vector<SpectatorRow> rows;
};

/// Canonical setup: theta_1(1/2, 0.3), bumps of half-width 0.5 at +-(0,2,0,0),
/// vacuum and Gaussian-pair spectators, m = 1.
LocalityConfig canonicalLocalityConfig();

/// base moved by x -> Lambda x + a: theta -> Lambda theta Lambda^T, spectators
/// transformed, axis-aligned bumps rebuilt around the moved centres and shrunk
/// until they fit the moved wedges.
LocalityConfig transformedLocalityConfig(const LorentzTransform& lambda, const FourVector& a,
                                         const LocalityConfig& base = canonicalLocalityConfig());

/// Throws SupportViolation unless f1 lies in W(theta)+a and f2 in -W(theta)+a.
void checkWedgeSupports(const LocalityConfig& config);

/// Wedge case (thetaA = theta, thetaB = -theta) against the control
/// (thetaA = thetaB = theta). Pass iff magnitude <= 10 estimate and
/// control >= 100 estimate.
LocalityReport wedgeLocalityExperiment(const LocalityConfig& config);

/// thetaA = thetaB = 0 with the same supports; pass iff magnitude <= 10 estimate.
LocalityReport undeformedLocalityExperiment(const LocalityConfig& config);

struct SupportGrid {
  int axisA = 0, axisB = 1;
  int points = 9;
  double padding = 1.0;
  double margin = 0.05;
};

struct SupportReport {
  SupportBox predicted;
  double peak = 0;
  double maxOutsideRatio = 0;
  int outsideSamples = 0;
  bool pass = false;
};

/// Samples |(f (x)_theta g)(x, y)| on a plane through the predicted
/// x-support supp f + theta U_g / 2 (y at the centre of g).
SupportReport supportCheckExperiment(const BumpPacket& f, const TestFunction& g,
                                     const NoncommMatrix& theta, const SupportGrid& grid = {},
                                     const PositionQuadrature& quad = {16, 1e-10});

}  // namespace wedgefield
