#include "wedgefield/moyal.hpp"

#include <algorithm>
#include <cmath>

namespace wedgefield {

namespace {

constexpr double kTwoPiSq = 4 * M_PI * M_PI;

double amplitudeBound(const TestFunction& f) {
  double s = 0;
  for (const auto& p : f.packets()) {
    if (const auto* g = std::get_if<GaussianPacket>(&p))
      s += std::abs(g->amplitude());
    else
      s += std::abs(std::get<BumpPacket>(p).amplitude) * std::exp(-4.0);
  }
  return s;
}

double fourierBound(const TestFunction& f) {
  double s = 0;
  const double phi0 = bumpProfileTransform(0);
  for (const auto& p : f.packets()) {
    if (const auto* g = std::get_if<GaussianPacket>(&p)) {
      s += std::abs(g->amplitude()) * g->volumeFactor();
    } else {
      const auto& b = std::get<BumpPacket>(p);
      s += std::abs(b.amplitude) * b.halfWidth.prod() * std::pow(phi0, 4) / kTwoPiSq;
    }
  }
  return s;
}

/// (2 pi)^{-2} int_box d^4k  mom(k) exp(i k.x) pos(y + shift(k)) on an n^4 Gauss-Legendre grid.
struct HalfTransform {
  const TestFunction& mom;  // integrated in momentum space
  const TestFunction& pos;  // evaluated in position space
  FourVector x, y;
  Matrix4 shift;            // pos argument is y + shift * k
  SupportBox box;

  std::pair<Complex, double> run(int n) const {
    std::array<GaussLegendreRule, 4> rules;
    for (int mu = 0; mu < 4; ++mu) rules[mu] = gaussLegendre(n, box.lo(mu), box.hi(mu));
    const std::size_t chunks = n;
    std::vector<Complex> partial(chunks);
    std::vector<double> partialAbs(chunks);
    parallelChunks(chunks, [&](std::size_t i0) {
      Complex s = 0;
      double a = 0;
      FourVector k;
      k(0) = rules[0].nodes[i0];
      for (int i1 = 0; i1 < n; ++i1) {
        k(1) = rules[1].nodes[i1];
        for (int i2 = 0; i2 < n; ++i2) {
          k(2) = rules[2].nodes[i2];
          for (int i3 = 0; i3 < n; ++i3) {
            k(3) = rules[3].nodes[i3];
            const Complex pv = evaluate(pos, y + shift * k);
            if (pv == 0.0) continue;
            const double w = rules[0].weights[i0] * rules[1].weights[i1] * rules[2].weights[i2] *
                             rules[3].weights[i3];
            const Complex term = w * fourier(mom, k) * std::polar(1.0, minkowskiProduct(k, x)) * pv;
            s += term;
            a += std::abs(term);
          }
        }
      }
      partial[i0] = s;
      partialAbs[i0] = a;
    });
    Complex total = 0;
    double abs = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
      total += partial[c];
      abs += partialAbs[c];
    }
    return {total / kTwoPiSq, abs / kTwoPiSq};
  }
};

}  // namespace

TwistFunction TwistFunction::damped(double sigma) {
  if (!(sigma > 0)) throw Unsupported("DampedPhase sigma must be positive");
  TwistFunction t;
  t.kind_ = Kind::DampedPhase;
  t.sigma_ = sigma;
  return t;
}

Complex TwistFunction::operator()(double lambda) const {
  if (lambda == 0) return 1.0;
  if (kind_ == Kind::StandardPhase) return std::polar(1.0, -0.5 * lambda);
  return std::polar(std::exp(-sigma_ * lambda * lambda), -0.5 * lambda);
}

TwistedTensor::TwistedTensor(std::vector<TestFunction> factors, Complex coefficient)
    : factors_(std::move(factors)), coef_(coefficient) {
  const std::size_t n = factors_.size();
  twist_.assign(n * (n - (n > 0)) / 2, NoncommMatrix());
  rho_.assign(twist_.size(), TwistFunction::standard());
}

void TwistedTensor::setPair(int l, int r, const NoncommMatrix& theta, const TwistFunction& rho) {
  twist_[index(l, r)] = theta;
  rho_[index(l, r)] = rho;
}

bool TwistedTensor::isPlain() const {
  return std::all_of(twist_.begin(), twist_.end(), [](const NoncommMatrix& t) { return t.isZero(); });
}

bool TwistedTensor::isPhase() const {
  return std::all_of(rho_.begin(), rho_.end(), [](const TwistFunction& r) { return r.isStandard(); });
}

TensorPoly TensorPoly::operator+(const TensorPoly& o) const {
  TensorPoly p = *this;
  p.terms.insert(p.terms.end(), o.terms.begin(), o.terms.end());
  return p;
}

TensorPoly TensorPoly::operator-(const TensorPoly& o) const { return *this + o * -1.0; }

TensorPoly TensorPoly::operator*(Complex s) const {
  TensorPoly p = *this;
  for (auto& t : p.terms) t.setCoefficient(t.coefficient() * s);
  return p;
}

int TensorPoly::maxDegree() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.degree());
  return d;
}

TwistedTensor tensorOf(const TestFunction& f) { return TwistedTensor({f}); }

TwistedTensor rhoProduct(const TwistedTensor& f, const TwistedTensor& g, const NoncommMatrix& theta,
                         const TwistFunction& rho) {
  std::vector<TestFunction> factors = f.factors();
  factors.insert(factors.end(), g.factors().begin(), g.factors().end());
  TwistedTensor out(std::move(factors), f.coefficient() * g.coefficient());
  const int n = f.degree(), m = g.degree();
  for (int l = 0; l < n; ++l)
    for (int r = l + 1; r < n; ++r) out.setPair(l, r, f.pairTwist(l, r), f.pairRho(l, r));
  for (int l = 0; l < m; ++l)
    for (int r = l + 1; r < m; ++r) out.setPair(n + l, n + r, g.pairTwist(l, r), g.pairRho(l, r));
  for (int l = 0; l < n; ++l)
    for (int r = 0; r < m; ++r) out.setPair(l, n + r, theta, rho);
  return out;
}

TwistedTensor moyalProduct(const TwistedTensor& f, const TwistedTensor& g, const NoncommMatrix& theta) {
  return rhoProduct(f, g, theta, TwistFunction::standard());
}

TwistedTensor plainJoin(const TwistedTensor& f, const TwistedTensor& g) {
  return moyalProduct(f, g, NoncommMatrix());
}

TensorPoly rhoProduct(const TensorPoly& f, const TensorPoly& g, const NoncommMatrix& theta,
                      const TwistFunction& rho) {
  TensorPoly out;
  for (const auto& a : f.terms)
    for (const auto& b : g.terms) out.terms.push_back(rhoProduct(a, b, theta, rho));
  return out;
}

TensorPoly moyalProduct(const TensorPoly& f, const TensorPoly& g, const NoncommMatrix& theta) {
  return rhoProduct(f, g, theta, TwistFunction::standard());
}

TensorPoly plainJoin(const TensorPoly& f, const TensorPoly& g) {
  return moyalProduct(f, g, NoncommMatrix());
}

Complex twistFactor(const TwistedTensor& f, const std::vector<FourVector>& momenta) {
  Complex t = 1.0;
  const int n = f.degree();
  for (int l = 0; l < n; ++l)
    for (int r = l + 1; r < n; ++r) {
      const NoncommMatrix& th = f.pairTwist(l, r);
      if (th.isZero()) continue;
      t *= f.pairRho(l, r)(thetaBilinear(th, momenta[l], momenta[r]));
    }
  return t;
}

Complex momentumKernel(const TwistedTensor& f, const std::vector<FourVector>& momenta) {
  if (static_cast<int>(momenta.size()) != f.degree())
    throw DegreeMismatch("momentum count differs from tensor degree");
  Complex k = f.coefficient();
  for (int j = 0; j < f.degree(); ++j) k *= fourier(f.factor(j), momenta[j]);
  return k * twistFactor(f, momenta);
}

Estimated positionEvaluate(const TwistedTensor& f, const std::vector<FourVector>& points,
                           const PositionQuadrature& quad) {
  if (f.degree() > 2) throw DegreeTooLarge("positionEvaluate supports degree <= 2");
  if (static_cast<int>(points.size()) != f.degree())
    throw DegreeMismatch("point count differs from tensor degree");
  if (f.degree() == 0) return {f.coefficient(), 0};
  if (f.degree() == 1) return {f.coefficient() * evaluate(f.factor(0), points[0]), 0};

  const NoncommMatrix& theta = f.pairTwist(0, 1);
  if (theta.isZero())
    return {f.coefficient() * evaluate(f.factor(0), points[0]) * evaluate(f.factor(1), points[1]), 0};
  if (!f.pairRho(0, 1).isStandard())
    throw UnsupportedTwistFunction("positionEvaluate needs a pure phase twist");

  // With exp(-i/2 p Theta q) = exp(i/2 q.(Theta eta p)) = exp(-i/2 p.(Theta eta q)) one
  // of the two inverse transforms is done exactly, leaving a 4-D integral.
  const Matrix4 te = theta.matrix() * metric();
  const SupportBox bf = epsSupport(f.factor(0), quad.eps, SupportSpace::Momentum);
  const SupportBox bg = epsSupport(f.factor(1), quad.eps, SupportSpace::Momentum);
  const bool overG = (bg.hi - bg.lo).prod() <= (bf.hi - bf.lo).prod();
  const HalfTransform ht = overG
      ? HalfTransform{f.factor(1), f.factor(0), points[1], points[0], -0.5 * te, bg}
      : HalfTransform{f.factor(0), f.factor(1), points[0], points[1], 0.5 * te, bf};

  const int n = std::max(4, quad.nodesPerAxis);
  const auto fine = ht.run(n);
  const auto coarse = ht.run(n / 2);
  const double volume = (ht.box.hi - ht.box.lo).prod();
  const double truncation =
      quad.eps * fourierBound(ht.mom) * amplitudeBound(ht.pos) * volume / kTwoPiSq;
  Estimated out;
  out.value = f.coefficient() * fine.first;
  out.estimate = std::abs(f.coefficient()) *
                 (std::abs(fine.first - coarse.first) + truncation + 1e-14 * fine.second);
  if (!std::isfinite(out.estimate)) throw QuadratureFailure("non-finite position quadrature");
  return out;
}

Estimated starDiagonal(const TestFunction& f, const TestFunction& g, const NoncommMatrix& theta,
                       const FourVector& x, const PositionQuadrature& quad) {
  return positionEvaluate(moyalProduct(tensorOf(f), tensorOf(g), theta), {x, x}, quad);
}

TwistedTensor poincareAct(const TwistedTensor& f, const FourVector& y, const LorentzTransform& a) {
  TwistedTensor out = f;
  for (int j = 0; j < f.degree(); ++j) out.setFactor(j, poincare(f.factor(j), y, a));
  for (int l = 0; l < f.degree(); ++l)
    for (int r = l + 1; r < f.degree(); ++r)
      out.setPair(l, r, conjugateTheta(a, f.pairTwist(l, r)), f.pairRho(l, r));
  return out;
}

TwistedTensor starInvolutionTensor(const TwistedTensor& f) {
  const int n = f.degree();
  std::vector<TestFunction> factors;
  for (int j = n - 1; j >= 0; --j) factors.push_back(starInvolution(f.factor(j)));
  TwistedTensor out(std::move(factors), std::conj(f.coefficient()));
  for (int l = 0; l < n; ++l)
    for (int r = l + 1; r < n; ++r)
      out.setPair(l, r, f.pairTwist(n - 1 - r, n - 1 - l), f.pairRho(n - 1 - r, n - 1 - l));
  return out;
}

TwistedTensor jInvolutionTensor(const TwistedTensor& f) {
  TwistedTensor out = f;
  out.setCoefficient(std::conj(f.coefficient()));
  for (int j = 0; j < f.degree(); ++j) out.setFactor(j, jInvolution(f.factor(j)));
  for (int l = 0; l < f.degree(); ++l)
    for (int r = l + 1; r < f.degree(); ++r) out.setPair(l, r, -f.pairTwist(l, r), f.pairRho(l, r));
  return out;
}

TwistedTensor uThetaMultiplier(const TwistedTensor& f, const NoncommMatrix& theta) {
  if (!f.isPhase()) throw UnsupportedTwistFunction("u_theta needs pure phase twists");
  TwistedTensor out = f;
  for (int l = 0; l < f.degree(); ++l)
    for (int r = l + 1; r < f.degree(); ++r)
      out.setPair(l, r, f.pairTwist(l, r) + theta, f.pairRho(l, r));
  return out;
}

TensorPoly starInvolutionTensor(const TensorPoly& f) {
  TensorPoly out;
  for (const auto& t : f.terms) out.terms.push_back(starInvolutionTensor(t));
  return out;
}

TensorPoly uThetaMultiplier(const TensorPoly& f, const NoncommMatrix& theta) {
  TensorPoly out;
  for (const auto& t : f.terms) out.terms.push_back(uThetaMultiplier(t, theta));
  return out;
}

double mixedAssociativityGap(const TestFunction& f, const TestFunction& g, const TestFunction& h,
                             const NoncommMatrix& thetaA, const NoncommMatrix& thetaB,
                             const std::vector<FourVector>& momenta) {
  const TwistedTensor tf = tensorOf(f), tg = tensorOf(g), th = tensorOf(h);
  const TwistedTensor left = moyalProduct(moyalProduct(tf, tg, thetaA), th, thetaB);
  const TwistedTensor right = moyalProduct(tf, moyalProduct(tg, th, thetaB), thetaA);
  return std::abs(momentumKernel(left, momenta) - momentumKernel(right, momenta));
}

}  // namespace wedgefield
