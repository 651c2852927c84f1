#include "wedgefield/scattering.hpp"

#include <cmath>

namespace wedgefield {

bool isOnShell(const FourVector& p, double mass, double tol) {
  return p(0) > 0 && std::abs(minkowskiProduct(p, p) - mass * mass) <= tol * std::max(1.0, p(0) * p(0));
}

bool wedgeOrderingCheck(const FourVector& p, const FourVector& q, const NoncommMatrix& theta,
                        const OrbitParams& params) {
  return wedgeContains(wedgeOfTheta(theta, params), q - p);
}

double smatrixPhaseShift(const SMatrixInput& in) {
  return -0.5 * (thetaBilinear(in.theta, in.p, in.q) + thetaBilinear(in.theta, in.pPrime, in.qPrime));
}

Complex deformedSMatrixElement(const SMatrixInput& in) {
  for (const FourVector* v : {&in.p, &in.q, &in.pPrime, &in.qPrime})
    if (!isOnShell(*v, in.mass)) throw OffShell("S-matrix momenta must lie on the mass shell");
  // theta = 0 carries no wedge and no deformation.
  if (!in.theta.isZero() && (!wedgeOrderingCheck(in.p, in.q, in.theta, in.params) ||
                             !wedgeOrderingCheck(in.pPrime, in.qPrime, in.theta, in.params)))
    throw WedgeOrderViolation("q - p and q' - p' must lie in W(theta)");
  const FourVector total = in.p + in.q;
  const Complex s0 = in.undeformed(minkowskiProduct(total, total));
  return std::polar(1.0, -0.5 * thetaBilinear(in.theta, in.p, in.q)) *
         std::polar(1.0, -0.5 * thetaBilinear(in.theta, in.pPrime, in.qPrime)) * s0;
}

std::pair<Complex, Complex> covarianceBreakDemo(const SMatrixInput& in, const LorentzTransform& a) {
  SMatrixInput moved = in;
  moved.p = a * in.p;
  moved.q = a * in.q;
  moved.pPrime = a * in.pPrime;
  moved.qPrime = a * in.qPrime;
  SMatrixInput both = moved;
  both.theta = conjugateTheta(a, in.theta);
  return {deformedSMatrixElement(moved), deformedSMatrixElement(both)};
}

}  // namespace wedgefield
