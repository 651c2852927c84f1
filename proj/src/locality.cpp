#include "wedgefield/locality.hpp"

#include <algorithm>
#include <cmath>

#include "wedgefield/scattering.hpp"

namespace wedgefield {

namespace {

TensorPoly single(const TestFunction& f) { return TensorPoly(tensorOf(f)); }

/// Corners and face centres of the box.
std::vector<FourVector> boxProbePoints(const BumpPacket& b) {
  SupportBox box;
  box.lo = b.center - b.halfWidth;
  box.hi = b.center + b.halfWidth;
  std::vector<FourVector> pts = box.corners();
  for (int mu = 0; mu < 4; ++mu)
    for (double s : {-1.0, 1.0}) {
      FourVector p = b.center;
      p(mu) += s * b.halfWidth(mu);
      pts.push_back(p);
    }
  return pts;
}

bool boxInside(const BumpPacket& b, const Wedge& w, const FourVector& a) {
  for (const auto& p : boxProbePoints(b))
    if (!w.contains(p - a)) return false;
  return true;
}

BumpPacket fittedBump(const FourVector& center, double halfWidth, const Wedge& w, const FourVector& a) {
  BumpPacket b;
  b.center = center;
  b.halfWidth = FourVector::Constant(halfWidth);
  for (int it = 0; it < 60 && !boxInside(b, w, a); ++it) b.halfWidth *= 0.85;
  if (!boxInside(b, w, a)) throw SupportViolation("no bump box fits inside the wedge");
  return b;
}

TensorPoly transformed(const TensorPoly& p, const FourVector& a, const LorentzTransform& l) {
  TensorPoly out;
  for (const auto& t : p.terms) out.terms.push_back(poincareAct(t, a, l));
  return out;
}

}  // namespace

Estimated spectatorMatrixElement(const TensorPoly& g, const TestFunction& f1, const TestFunction& f2,
                                 const NoncommMatrix& thetaA, const NoncommMatrix& thetaB,
                                 const TensorPoly& h, const MassShellMeasure& mu) {
  if (g.maxDegree() + h.maxDegree() + 2 > 6) throw DegreeTooLarge("total degree above 6");
  const TensorPoly gs = starInvolutionTensor(g);
  const TensorPoly forward =
      plainJoin(gs, moyalProduct(single(f1), moyalProduct(single(f2), h, thetaB), thetaA));
  const TensorPoly backward =
      plainJoin(gs, moyalProduct(single(f2), moyalProduct(single(f1), h, thetaA), thetaB));
  return vacuumFunctional(forward - backward, mu);
}

Complex twoParticleCommutatorKernel(const NoncommMatrix& thetaA, const NoncommMatrix& thetaB,
                                    const FourVector& x, const FourVector& y, const FourVector& p1,
                                    const FourVector& p2, double mass) {
  if (!isOnShell(p1, mass) || !isOnShell(p2, mass)) throw OffShell("momenta must lie on the mass shell");
  // Two created particles: leg momenta -k, -k' enter the Moyal kernel of
  // delta_x (x)_theta delta_y, whose plane-wave part is exp(i(k.x + k'.y)).
  auto ordered = [&](const NoncommMatrix& th, const FourVector& first, const FourVector& second) {
    TwistedTensor t(std::vector<TestFunction>(2));
    t.setPair(0, 1, th, TwistFunction::standard());
    Complex s = 0;
    for (const auto& [k, kp] : {std::pair{p1, p2}, std::pair{p2, p1}})
      s += std::polar(1.0, minkowskiProduct(k, first) + minkowskiProduct(kp, second)) *
           twistFactor(t, {FourVector(-k), FourVector(-kp)});
    return s;
  };
  return ordered(thetaA, x, y) - ordered(thetaB, y, x);
}

Complex commutatorClosedForm(const NoncommMatrix& theta, const FourVector& x, const FourVector& y,
                             const FourVector& p1, const FourVector& p2) {
  const Complex a = std::polar(1.0, minkowskiProduct(p1, x) + minkowskiProduct(p2, y));
  const Complex b = std::polar(1.0, minkowskiProduct(p2, x) + minkowskiProduct(p1, y));
  return Complex(0, -2) * (a - b) * std::sin(0.5 * thetaBilinear(theta, p1, p2));
}

LocalityConfig canonicalLocalityConfig() {
  LocalityConfig c;
  c.params = {0.5, 0.3};
  c.theta = referenceTheta(c.params);
  c.f1.center = FourVector(0, 2, 0, 0);
  c.f2.center = FourVector(0, -2, 0, 0);
  c.f1.halfWidth = c.f2.halfWidth = FourVector::Constant(0.5);
  // Two-particle spectator Psi(g1 (x) g2) against the vacuum. Creation needs
  // k0 < 0; momenta near (sqrt 2, -+1, 0, 0) keep sin(p1 theta p2 / 2) away
  // from zero in the control.
  const double e = std::sqrt(2.0);
  const TestFunction g1 = GaussianPacket::axisAligned(1.0, FourVector(0, 2, 0, 0), FourVector::Ones(),
                                                      FourVector(-e, -1, 0, 0));
  const TestFunction g2 = GaussianPacket::axisAligned(1.0, FourVector(0, -2, 0, 0), FourVector::Ones(),
                                                      FourVector(-e, 1, 0, 0));
  const TensorPoly vacuum(TwistedTensor(1.0));
  c.spectators.push_back({"vacuum", vacuum, vacuum});
  c.spectators.push_back({"gaussian-pair", TensorPoly(TwistedTensor({g1, g2})), vacuum});
  c.measure.mass = 1;
  c.measure.cutoff = 20;
  c.measure.nodesPerAxis = 12;
  c.measure.pairEps = 1e-7;
  c.measure.oscillation = 0.4;
  return c;
}

LocalityConfig transformedLocalityConfig(const LorentzTransform& lambda, const FourVector& a,
                                         const LocalityConfig& base) {
  LocalityConfig c = base;
  c.theta = conjugateTheta(lambda, base.theta);
  c.translation = lambda * base.translation + a;
  const Wedge w = wedgeOfTheta(c.theta, c.params);
  c.f1 = fittedBump(lambda * base.f1.center + a, base.f1.halfWidth.maxCoeff(), w, c.translation);
  c.f2 = fittedBump(lambda * base.f2.center + a, base.f2.halfWidth.maxCoeff(), oppositeWedge(w),
                    c.translation);
  for (auto [out, in] : {std::pair{&c.f1, &base.f1}, std::pair{&c.f2, &base.f2}}) {
    out->wavevector = lambda * in->wavevector;
    out->amplitude = in->amplitude * std::polar(1.0, -minkowskiProduct(out->wavevector, a));
  }
  for (auto& s : c.spectators) {
    s.g = transformed(s.g, a, lambda);
    s.h = transformed(s.h, a, lambda);
  }
  return c;
}

void checkWedgeSupports(const LocalityConfig& config) {
  const Wedge w = wedgeOfTheta(config.theta, config.params);
  if (!boxInside(config.f1, w, config.translation))
    throw SupportViolation("f1 is not supported in W(theta) + a");
  if (!boxInside(config.f2, oppositeWedge(w), config.translation))
    throw SupportViolation("f2 is not supported in -W(theta) + a");
}

LocalityReport wedgeLocalityExperiment(const LocalityConfig& config) {
  checkWedgeSupports(config);
  LocalityReport r;
  for (const auto& s : config.spectators) {
    SpectatorRow row;
    row.label = s.label;
    row.wedge = spectatorMatrixElement(s.g, config.f1, config.f2, config.theta, -config.theta, s.h,
                                       config.measure);
    row.control = spectatorMatrixElement(s.g, config.f1, config.f2, config.theta, config.theta, s.h,
                                         config.measure);
    r.magnitude = std::max(r.magnitude, std::abs(row.wedge.value));
    r.controlMagnitude = std::max(r.controlMagnitude, std::abs(row.control.value));
    r.quadratureEstimate = std::max({r.quadratureEstimate, row.wedge.estimate, row.control.estimate});
    r.rows.push_back(row);
  }
  if (r.magnitude > 10 * r.quadratureEstimate)
    r.verdict = "fail";
  else if (r.controlMagnitude >= 100 * r.quadratureEstimate)
    r.verdict = "pass";
  else
    r.verdict = "inconclusive";
  return r;
}

LocalityReport undeformedLocalityExperiment(const LocalityConfig& config) {
  LocalityReport r;
  const NoncommMatrix zero;
  for (const auto& s : config.spectators) {
    SpectatorRow row;
    row.label = s.label;
    row.wedge = spectatorMatrixElement(s.g, config.f1, config.f2, zero, zero, s.h, config.measure);
    r.magnitude = std::max(r.magnitude, std::abs(row.wedge.value));
    r.quadratureEstimate = std::max(r.quadratureEstimate, row.wedge.estimate);
    r.rows.push_back(row);
  }
  r.verdict = r.magnitude <= 10 * r.quadratureEstimate ? "pass" : "fail";
  return r;
}

SupportReport supportCheckExperiment(const BumpPacket& f, const TestFunction& g,
                                     const NoncommMatrix& theta, const SupportGrid& grid,
                                     const PositionQuadrature& quad) {
  SupportReport rep;
  const SupportBox ug = epsSupport(g, quad.eps, SupportSpace::Momentum);
  const Matrix4 shift = 0.5 * theta.matrix() * metric();
  const FourVector mid = shift * ug.mid();
  const FourVector half = shift.cwiseAbs() * ug.halfWidth();
  rep.predicted.lo = f.center - f.halfWidth + mid - half;
  rep.predicted.hi = f.center + f.halfWidth + mid + half;
  rep.predicted.eps = quad.eps;
  SupportBox inflated = rep.predicted;
  inflated.lo.array() -= grid.margin;
  inflated.hi.array() += grid.margin;

  const FourVector y = epsSupport(g, 1e-6, SupportSpace::Position).mid();
  const TwistedTensor ft = moyalProduct(tensorOf(TestFunction(f)), tensorOf(g), theta);
  double outside = 0;
  const int n = std::max(2, grid.points);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FourVector x = rep.predicted.mid();
      const int a = grid.axisA, b = grid.axisB;
      x(a) = rep.predicted.lo(a) - grid.padding +
             (rep.predicted.hi(a) - rep.predicted.lo(a) + 2 * grid.padding) * i / (n - 1);
      x(b) = rep.predicted.lo(b) - grid.padding +
             (rep.predicted.hi(b) - rep.predicted.lo(b) + 2 * grid.padding) * j / (n - 1);
      const double v = std::abs(positionEvaluate(ft, {x, y}, quad).value);
      if (inflated.contains(x)) {
        rep.peak = std::max(rep.peak, v);
      } else {
        outside = std::max(outside, v);
        ++rep.outsideSamples;
      }
    }
  rep.maxOutsideRatio = rep.peak > 0 ? outside / rep.peak : (outside > 0 ? INFINITY : 0);
  rep.pass = rep.peak > 0 && rep.maxOutsideRatio < 1e-5;
  return rep;
}

}  // namespace wedgefield
