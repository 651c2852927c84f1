#pragma once

#include <functional>
#include <utility>

#include "wedgefield/geometry.hpp"

namespace wedgefield {

/// Undeformed two-particle S-matrix element: unit, or exp(i c / (s - s0)).
struct UndeformedS {
  bool unit = true;
  double c = 0, s0 = 0;
  Complex operator()(double s) const { return unit ? Complex(1) : std::polar(1.0, c / (s - s0)); }
};

struct SMatrixInput {
  FourVector p, q, pPrime, qPrime;
  NoncommMatrix theta;
  OrbitParams params;
  double mass = 1;
  UndeformedS undeformed;
};

bool isOnShell(const FourVector& p, double mass, double tol = 1e-9);

/// exp(-i/2 p theta q) exp(-i/2 p' theta q') S0((p+q)^2).
Complex deformedSMatrixElement(const SMatrixInput& in);
/// Exponent of the deformation phase, -(p theta q + p' theta q') / 2.
double smatrixPhaseShift(const SMatrixInput& in);
bool wedgeOrderingCheck(const FourVector& p, const FourVector& q, const NoncommMatrix& theta,
                        const OrbitParams& params);
/// (momenta moved by Lambda with theta fixed, momenta and theta moved by Lambda).
std::pair<Complex, Complex> covarianceBreakDemo(const SMatrixInput& in, const LorentzTransform& a);

}  // namespace wedgefield
