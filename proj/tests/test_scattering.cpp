#include <doctest.h>

#include <limits>
#include <random>

#include "oracles.hpp"
#include "wedgefield/freefield.hpp"
#include "wedgefield/scattering.hpp"

using namespace wedgefield;

namespace {

SMatrixInput reference() {
  SMatrixInput in;
  const double e = std::sqrt(2.0);
  in.p = FourVector(e, -1, 0, 0);
  in.q = FourVector(e, 1, 0, 0);
  in.pPrime = onShell(1, {-0.5, 0.3, 0});
  in.qPrime = onShell(1, {0.8, -0.2, 0.1});
  in.params = {0.5, 0.3};
  in.theta = referenceTheta(in.params);
  return in;
}

}  // namespace

TEST_CASE("on-shell test") {
  CHECK(isOnShell(onShell(1, {0.3, 0.4, 0}), 1));
  CHECK_FALSE(isOnShell(FourVector(1, 0.5, 0, 0), 1));
  CHECK_FALSE(isOnShell(-onShell(1, {0.3, 0.4, 0}), 1));
}

TEST_CASE("deformed element: phase and modulus") {
  SMatrixInput in = reference();
  in.undeformed = UndeformedS{false, 0.7, -1.0};
  const Complex v = deformedSMatrixElement(in);
  const FourVector total = in.p + in.q;
  const Complex s0 = in.undeformed(minkowskiProduct(total, total));
  CHECK(std::abs(std::abs(v) - std::abs(s0)) <= 4 * std::numeric_limits<double>::epsilon());
  const double phase = -0.5 * (oracle::bilinear(in.theta.upper(), in.p, in.q) +
                               oracle::bilinear(in.theta.upper(), in.pPrime, in.qPrime));
  CHECK(std::abs(smatrixPhaseShift(in) - phase) < 1e-12);
  CHECK(std::abs(v - s0 * std::polar(1.0, phase)) < 1e-12);
}

TEST_CASE("theta -> -theta conjugates the phase") {
  SMatrixInput a = reference();
  // Reverse the ordering too, so that -theta sees correctly ordered momenta.
  SMatrixInput b = a;
  b.theta = -a.theta;
  std::swap(b.p, b.q);
  std::swap(b.pPrime, b.qPrime);
  CHECK(std::abs(smatrixPhaseShift(b) - smatrixPhaseShift(a)) < 1e-14);
  SMatrixInput c = a;
  c.theta = -a.theta;
  CHECK(std::abs(smatrixPhaseShift(c) + smatrixPhaseShift(a)) < 1e-14);
}

TEST_CASE("ordering violations") {
  SMatrixInput in = reference();
  std::swap(in.p, in.q);
  CHECK_FALSE(wedgeOrderingCheck(in.p, in.q, in.theta, in.params));
  CHECK_THROWS_AS(deformedSMatrixElement(in), WedgeOrderViolation);
  in.theta = NoncommMatrix();
  CHECK(deformedSMatrixElement(in) == Complex(1));
  SMatrixInput off = reference();
  off.p(0) += 0.1;
  CHECK_THROWS_AS(deformedSMatrixElement(off), OffShell);
}

TEST_CASE("covariance break") {
  const SMatrixInput in = reference();
  const Complex v = deformedSMatrixElement(in);
  const auto [kept, both] = covarianceBreakDemo(in, identityTransform());
  CHECK(kept == v);
  CHECK(both == v);
  const auto [k2, b2] = covarianceBreakDemo(in, boost(0.6, 1));
  CHECK(std::abs(k2 - v) < 1e-12);
  CHECK(std::abs(b2 - v) < 1e-12);
  const auto [k3, b3] = covarianceBreakDemo(in, rotation(0.2, 1, 3));
  CHECK(std::abs(k3 - v) > 1e-3);
  CHECK(std::abs(b3 - v) < 1e-12);
}

TEST_CASE("covariant pair identity") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 100; ++i) {
    const LorentzTransform l = randomLorentz(rng, 3, 1.0);
    const NoncommMatrix th({u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)});
    const FourVector p(u(rng), u(rng), u(rng), u(rng)), q(u(rng), u(rng), u(rng), u(rng));
    CHECK(std::abs(thetaBilinear(conjugateTheta(l, th), l * p, l * q) - thetaBilinear(th, p, q)) < 1e-11);
  }
}
