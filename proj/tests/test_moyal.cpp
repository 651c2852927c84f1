#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wedgefield/moyal.hpp"

using namespace wedgefield;

namespace {

FourVector randomVector(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  return FourVector(u(rng), u(rng), u(rng), u(rng));
}

double relErr(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct AxisGaussian {
  Complex c;
  FourVector a, sigma, k;
  TestFunction fn() const { return GaussianPacket::axisAligned(c, a, sigma, k); }
};

/// 2-D trapezoid over (p_alpha, q_beta) of
/// phi_f(p) e^{i eta p x_alpha} phi_g(q) e^{i eta q y_beta} e^{i coupling p q}.
Complex block(const AxisGaussian& f, const AxisGaussian& g, int alpha, int beta, double coupling,
              const FourVector& x, const FourVector& y) {
  const int n = 240;
  auto grid = [&](const AxisGaussian& h, int axis, double point) {
    const double lo = h.k(axis) - 9 / h.sigma(axis), step = 18 / h.sigma(axis) / n;
    std::vector<std::pair<double, Complex>> v;
    for (int i = 0; i <= n; ++i) {
      const double p = lo + i * step;
      v.emplace_back(p, step * oracle::gaussianAxisClosed(h.a(axis), h.sigma(axis), h.k(axis), p, axis) *
                            std::polar(1.0, oracle::kEta[axis] * p * point));
    }
    return v;
  };
  const auto ps = grid(f, alpha, x(alpha)), qs = grid(g, beta, y(beta));
  Complex sum = 0;
  for (const auto& [p, wp] : ps)
    for (const auto& [q, wq] : qs) sum += wp * wq * std::polar(1.0, coupling * p * q);
  return sum;
}

/// (f (x)_theta1 g)(x, y) for theta_1(kE, kM): the 8-D inverse transform splits
/// into four 2-D integrals because theta_1 only pairs axes 0-1 and 2-3.
Complex moyalPositionOracle(const AxisGaussian& f, const AxisGaussian& g, double kE, double kM,
                            const FourVector& x, const FourVector& y) {
  const Complex v = block(f, g, 0, 1, kE / 2, x, y) * block(f, g, 1, 0, -kE / 2, x, y) *
                    block(f, g, 2, 3, -kM / 2, x, y) * block(f, g, 3, 2, kM / 2, x, y);
  return f.c * g.c * v / std::pow(2 * M_PI, 4);
}

}  // namespace

TEST_CASE("twist functions") {
  const TwistFunction s = TwistFunction::standard();
  CHECK(std::abs(s(0.8) - std::polar(1.0, -0.4)) < 1e-16);
  const TwistFunction d = TwistFunction::damped(0.25);
  CHECK(std::abs(d(2.0) - std::exp(-1.0) * std::polar(1.0, -1.0)) < 1e-16);
  CHECK(d(0) == Complex(1));
  CHECK_THROWS_AS(TwistFunction::damped(0), Unsupported);
  CHECK_FALSE(d == s);
}

TEST_CASE("Moyal kernel phases") {
  std::mt19937_64 rng(12);
  const TestFunction f = GaussianPacket::axisAligned(1.0, FourVector(0, 1, 0, 0), FourVector::Ones(), FourVector(1, 0, 0, 0));
  const TestFunction g = GaussianPacket::axisAligned(Complex(0, 1), FourVector(1, 0, 0, 0), FourVector::Ones(), FourVector(0, 1, 0, 0));
  const TestFunction h = BumpPacket{};
  const NoncommMatrix th({0.4, -0.3, 0.2, 0.7, 0.1, -0.5});
  const TwistedTensor fg = moyalProduct(tensorOf(f), tensorOf(g), th);
  const TwistedTensor fgh = moyalProduct(fg, tensorOf(h), th);
  for (int i = 0; i < 50; ++i) {
    const FourVector p = randomVector(rng, 2), q = randomVector(rng, 2), r = randomVector(rng, 2);
    const Complex expected2 = fourier(f, p) * fourier(g, q) * std::polar(1.0, -0.5 * oracle::bilinear(th.upper(), p, q));
    CHECK(relErr(momentumKernel(fg, {p, q}), expected2) < 1e-13);
    const double phase3 = oracle::bilinear(th.upper(), p, q) + oracle::bilinear(th.upper(), p, r) +
                          oracle::bilinear(th.upper(), q, r);
    const Complex expected3 = fourier(f, p) * fourier(g, q) * fourier(h, r) * std::polar(1.0, -0.5 * phase3);
    CHECK(relErr(momentumKernel(fgh, {p, q, r}), expected3) < 1e-12);
    CHECK(relErr(momentumKernel(uThetaMultiplier(plainJoin(tensorOf(f), tensorOf(g)), th), {p, q}), expected2) < 1e-13);
  }
  CHECK(fgh.degree() == 3);
  CHECK(fgh.pairTwist(0, 2) == th);
  CHECK(plainJoin(tensorOf(f), tensorOf(g)).isPlain());
  CHECK(fg.isPhase());
  CHECK_FALSE(rhoProduct(tensorOf(f), tensorOf(g), th, TwistFunction::damped(0.1)).isPhase());
  CHECK_THROWS_AS(momentumKernel(fg, {FourVector::Zero()}), DegreeMismatch);
}

TEST_CASE("mixed associativity") {
  const TestFunction f = GaussianPacket::axisAligned(1.0, FourVector::Zero(), FourVector::Ones(), FourVector(0.5, 0, 0, 0));
  const std::vector<FourVector> m{FourVector(1, 0.5, 0, 0), FourVector(0.2, 0, 1, 0), FourVector(0, 0.3, 0, 1)};
  const NoncommMatrix a = referenceTheta({0.5, 0.3});
  CHECK(mixedAssociativityGap(f, f, f, a, a, m) == 0.0);
  CHECK(mixedAssociativityGap(f, f, f, a, -a, m) > 1e-6);
}

TEST_CASE("position evaluation against a factorized inverse transform") {
  const AxisGaussian f{1.0, FourVector(0.2, 0.5, -0.3, 0.1), FourVector(1, 1.2, 0.8, 1), FourVector(0.5, 0.3, 0, -0.2)};
  const AxisGaussian g{Complex(0.5, 0.5), FourVector(-0.1, -0.4, 0.2, 0.3), FourVector(0.9, 1, 1.1, 1),
                       FourVector(-0.3, 0.2, 0.4, 0)};
  const NoncommMatrix th = referenceTheta({0.5, 0.3});
  const TwistedTensor t = moyalProduct(tensorOf(f.fn()), tensorOf(g.fn()), th);
  for (const auto& [x, y] : {std::pair{FourVector(0, 0, 0, 0), FourVector(0, 0, 0, 0)},
                             std::pair{FourVector(0.5, 1, -0.2, 0.3), FourVector(-0.4, 0.1, 0.6, 0)},
                             std::pair{FourVector(1, -0.5, 0, 0), FourVector(0, 0.5, 0, 1)}}) {
    const Complex expected = moyalPositionOracle(f, g, 0.5, 0.3, x, y);
    const Estimated got = positionEvaluate(t, {x, y});
    CHECK(std::abs(got.value - expected) < 1e-6 * std::abs(expected));
    const Estimated fine = positionEvaluate(t, {x, y}, {48, 1e-14});
    CHECK(std::abs(fine.value - expected) < 1e-10 * std::abs(expected));
    CHECK(std::abs(got.value - expected) <= std::max(10 * got.estimate, 1e-12));
  }
  const FourVector x(0.3, 0.2, 0.1, 0);
  const Estimated diag = starDiagonal(f.fn(), g.fn(), th, x);
  CHECK(std::abs(diag.value - positionEvaluate(t, {x, x}).value) < 1e-12);

  const TwistedTensor plain = plainJoin(tensorOf(f.fn()), tensorOf(g.fn()));
  const FourVector y(-0.2, 0.4, 0, 0.5);
  CHECK(relErr(positionEvaluate(plain, {x, y}).value, evaluate(f.fn(), x) * evaluate(g.fn(), y)) < 1e-8);
}

TEST_CASE("position evaluation preconditions") {
  const TestFunction f = BumpPacket{};
  const TwistedTensor three = plainJoin(plainJoin(tensorOf(f), tensorOf(f)), tensorOf(f));
  CHECK_THROWS_AS(positionEvaluate(three, {FourVector::Zero(), FourVector::Zero(), FourVector::Zero()}), DegreeTooLarge);
  const TwistedTensor damped = rhoProduct(tensorOf(f), tensorOf(f), referenceTheta({1, 1}), TwistFunction::damped(1));
  CHECK_THROWS_AS(positionEvaluate(damped, {FourVector::Zero(), FourVector::Zero()}), UnsupportedTwistFunction);
  CHECK_THROWS_AS(positionEvaluate(tensorOf(f), {FourVector::Zero(), FourVector::Zero()}), DegreeMismatch);
  CHECK_THROWS_AS(uThetaMultiplier(damped, referenceTheta({1, 1})), UnsupportedTwistFunction);
}

TEST_CASE("tensor polynomials") {
  const TestFunction f = GaussianPacket::axisAligned(1.0, FourVector::Zero(), FourVector::Ones(), FourVector::Zero());
  const TensorPoly a = tensorOf(f);
  const TensorPoly b = plainJoin(tensorOf(f), tensorOf(f));
  const TensorPoly sum = a + b * Complex(2);
  CHECK(sum.terms.size() == 2);
  CHECK(sum.maxDegree() == 2);
  CHECK((a - a).terms.size() == 2);
  CHECK((a - a).terms[1].coefficient() == Complex(-1));
  const TensorPoly prod = moyalProduct(sum, a, referenceTheta({1, 1}));
  CHECK(prod.terms.size() == 2);
  CHECK(prod.maxDegree() == 3);
}

TEST_CASE("involutions on kernels") {
  const TestFunction f = GaussianPacket::axisAligned(Complex(1, 2), FourVector(0.1, 0.2, 0, 0), FourVector::Ones(), FourVector(0.3, 0, 0.2, 0));
  const TestFunction g = GaussianPacket::axisAligned(Complex(0, 1), FourVector(0, 0, 0.5, 0), FourVector::Ones(), FourVector(0, 0.4, 0, 0));
  const NoncommMatrix th = referenceTheta({0.5, 0.3});
  const TwistedTensor fg = moyalProduct(tensorOf(f), tensorOf(g), th);
  const FourVector p(0.3, 0.1, -0.2, 0.5), q(-0.4, 0.2, 0.1, 0);
  // (f (x) g)*(p, q) = conj (f (x) g)(-q, -p).
  CHECK(relErr(momentumKernel(starInvolutionTensor(fg), {p, q}), std::conj(momentumKernel(fg, {-q, -p}))) < 1e-14);
  // J: conj of the kernel at (p, q) for x -> -x reflected arguments.
  CHECK(relErr(momentumKernel(jInvolutionTensor(fg), {p, q}),
               momentumKernel(moyalProduct(tensorOf(jInvolution(f)), tensorOf(jInvolution(g)), -th), {p, q})) < 1e-14);
}
