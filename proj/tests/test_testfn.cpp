#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wedgefield/testfn.hpp"

using namespace wedgefield;

namespace {

FourVector randomVector(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return FourVector(u(rng), u(rng), u(rng), u(rng));
}

double relErr(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("axis-aligned Gaussian transform against 1-D quadrature") {
  std::mt19937_64 rng(2);
  const FourVector a(0.3, -0.5, 1.0, 0.2), sigma(0.8, 1.2, 1.0, 0.6), k(0.5, -0.3, 0.1, 1.0);
  const Complex c(0.7, -0.2);
  const TestFunction g = GaussianPacket::axisAligned(c, a, sigma, k);
  for (int i = 0; i < 40; ++i) {
    const FourVector p = randomVector(rng, -2.5, 2.5);
    Complex expected = c;
    for (int mu = 0; mu < 4; ++mu) expected *= oracle::gaussianAxisTransform(a(mu), sigma(mu), k(mu), p(mu), mu);
    CHECK(relErr(fourier(g, p), expected) < 1e-10);
  }
}

TEST_CASE("correlated Gaussian transform against 2-D quadrature") {
  Matrix4 s = Matrix4::Identity();
  s(1, 1) = 1.5;
  s(2, 2) = 0.8;
  s(1, 2) = s(2, 1) = 0.4;
  const FourVector a(0, 0.4, -0.2, 0), k(0.2, 0.3, -0.4, 0);
  const TestFunction g = GaussianPacket(1.0, a, s, k);
  const FourVector p(0.1, -0.6, 0.5, 0.3);
  // Axes 0 and 3 separate; axes 1 and 2 are coupled.
  const Complex f0 = oracle::gaussianAxisTransform(a(0), 1, k(0), p(0), 0);
  const Complex f3 = oracle::gaussianAxisTransform(a(3), 1, k(3), p(3), 3);
  auto inner = [&](double x1) {
    auto row = [&](double x2) {
      const double d1 = x1 - a(1), d2 = x2 - a(2);
      const double q = s(1, 1) * d1 * d1 + 2 * s(1, 2) * d1 * d2 + s(2, 2) * d2 * d2;
      return std::exp(-0.5 * q) * std::polar(1.0, -(k(1) - p(1)) * x1 - (k(2) - p(2)) * x2);
    };
    return oracle::simpson(row, -12, 12, 600);
  };
  const Complex f12 = oracle::simpson(inner, -12, 12, 600) / (2 * M_PI);
  CHECK(relErr(fourier(g, p), f0 * f3 * f12) < 1e-9);
}

TEST_CASE("bump profile and its transform") {
  CHECK(bumpProfile(0) == doctest::Approx(std::exp(-1.0)));
  CHECK(bumpProfile(1) == 0);
  CHECK(bumpProfile(-1.2) == 0);
  for (double w : {0.0, 1.0, 4.0, 10.0, 20.0}) {
    auto f = [&](double t) { return Complex(bumpProfile(t) * std::cos(w * t)); };
    const double expected = oracle::simpson(f, -1, 1, 20000).real();
    CHECK(std::abs(bumpProfileTransform(w) - expected) < 1e-11 * bumpProfileTransform(0));
  }
  CHECK(bumpProfileTransform(-3.0) == bumpProfileTransform(3.0));
  CHECK(bumpTransformTail(1e-3) > 4);
}

TEST_CASE("bump transform against 1-D quadrature") {
  BumpPacket b;
  b.amplitude = Complex(0, 1.5);
  b.center = FourVector(0.2, 2, -0.3, 0.1);
  b.halfWidth = FourVector(0.5, 0.4, 0.6, 0.5);
  b.wavevector = FourVector(1, 0.5, 0, -0.2);
  const TestFunction f = b;
  const FourVector p(0.3, -1, 2, 0.4);
  Complex expected = b.amplitude;
  for (int mu = 0; mu < 4; ++mu) {
    auto g = [&](double x) {
      return bumpProfile((x - b.center(mu)) / b.halfWidth(mu)) *
             std::polar(1.0, oracle::kEta[mu] * (b.wavevector(mu) - p(mu)) * x);
    };
    expected *= oracle::simpson(g, b.center(mu) - b.halfWidth(mu), b.center(mu) + b.halfWidth(mu), 8000) /
                std::sqrt(2 * M_PI);
  }
  CHECK(relErr(fourier(f, p), expected) < 1e-9);
}

TEST_CASE("position values and transformations") {
  const FourVector a(0.1, 0.2, 0.3, 0.4), k(1, 0.5, 0, 0);
  const TestFunction g = GaussianPacket::axisAligned(2.0, a, FourVector::Ones(), k);
  const FourVector x(0.5, -0.5, 1, 0);
  const Complex expected = 2.0 * std::exp(-0.5 * (x - a).squaredNorm()) * std::polar(1.0, minkowskiProduct(k, x));
  CHECK(relErr(evaluate(g, x), expected) < 1e-14);
  const FourVector y(1, 2, 0, -1);
  CHECK(relErr(evaluate(translate(g, y), x + y), expected) < 1e-14);
  CHECK(relErr(evaluate(starInvolution(g), x), std::conj(expected)) < 1e-14);
  CHECK(relErr(evaluate(jInvolution(g), -x), std::conj(expected)) < 1e-14);
  const LorentzTransform l = boost(0.4, 2) * rotation(0.3, 1, 3);
  CHECK(relErr(evaluate(poincare(g, y, l), l * x + y), expected) < 1e-12);
  CHECK(relErr(fourier(poincare(g, y, l), l * x), std::polar(1.0, -minkowskiProduct(l * x, y)) * fourier(g, x)) <
        1e-12);

  BumpPacket b;
  const TestFunction f = b;
  CHECK(relErr(evaluate(f, FourVector(0, 0, 0, 0)), std::exp(-4.0)) < 1e-15);
  CHECK(evaluate(f, FourVector(0, 1.01, 0, 0)) == Complex(0));
  CHECK_NOTHROW(poincare(f, y, rotation(M_PI / 2, 1, 2)));
  CHECK_THROWS_AS(poincare(f, y, boost(0.1, 1)), Unsupported);
  CHECK_THROWS_AS(poincare(f, y, rotation(0.3, 1, 2)), Unsupported);
}

TEST_CASE("sums and fingerprints") {
  const TestFunction g = GaussianPacket::axisAligned(1.0, FourVector::Zero(), FourVector::Ones(), FourVector::Zero());
  const TestFunction h = BumpPacket{};
  const FourVector x(0.1, 0.2, 0, 0);
  CHECK(relErr(evaluate(g + h * 2.0, x), evaluate(g, x) + 2.0 * evaluate(h, x)) < 1e-15);
  CHECK(relErr(evaluate(g - g * 0.5, x), 0.5 * evaluate(g, x)) < 1e-15);
  CHECK(g.fingerprint() == TestFunction(g).fingerprint());
  CHECK(g.fingerprint() != h.fingerprint());
  CHECK(TestFunction().isZero());
}

TEST_CASE("invalid packets") {
  Matrix4 s = Matrix4::Identity();
  s(0, 0) = -1;
  CHECK_THROWS_AS(GaussianPacket(1.0, FourVector::Zero(), s, FourVector::Zero()), Unsupported);
  BumpPacket b;
  b.halfWidth(2) = 0;
  CHECK_THROWS_AS(TestFunction{b}, Unsupported);
}

TEST_CASE("eps supports") {
  BumpPacket b;
  b.center = FourVector(0, 2, 0, 0);
  b.halfWidth = FourVector::Constant(0.5);
  const SupportBox box = epsSupport(b, 1e-6, SupportSpace::Position);
  CHECK(box.exact);
  CHECK((box.lo - FourVector(-0.5, 1.5, -0.5, -0.5)).norm() < 1e-15);
  CHECK((box.hi - FourVector(0.5, 2.5, 0.5, 0.5)).norm() < 1e-15);

  const TestFunction g = GaussianPacket::axisAligned(1.0, FourVector::Zero(), FourVector(1, 2, 1, 0.5),
                                                     FourVector(1, 0, 0, 0));
  const double eps = 1e-8;
  const SupportBox m = epsSupport(g, eps, SupportSpace::Momentum);
  const double peak = std::abs(fourier(g, FourVector(1, 0, 0, 0)));
  std::mt19937_64 rng(6);
  for (int i = 0; i < 500; ++i) {
    const FourVector p = randomVector(rng, -12, 12);
    if (!m.contains(p)) CHECK(std::abs(fourier(g, p)) < eps * peak);
  }
  CHECK(m.contains(FourVector(1, 0, 0, 0)));
  CHECK_THROWS_AS(epsSupport(g, 0, SupportSpace::Momentum), Unsupported);
}
