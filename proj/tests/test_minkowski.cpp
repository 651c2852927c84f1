#include <doctest.h>

#include <random>

#include "wedgefield/minkowski.hpp"

using namespace wedgefield;

namespace {

double etaDefect(const Matrix4& m) {
  const Matrix4 eta = metric();
  return (m.transpose() * eta * m - eta).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("metric and product") {
  CHECK(metric() == Matrix4(FourVector(1, -1, -1, -1).asDiagonal()));
  const FourVector x(3, 1, 2, 0.5), y(-1, 4, 0, 2);
  CHECK(minkowskiProduct(x, y) == doctest::Approx(-3 - 4 - 0 - 1));
  CHECK(minkowskiProduct(x, y) == doctest::Approx(x.dot(metric() * y)));
  CHECK(lowered(x) == FourVector(3, -1, -2, -0.5));
  CHECK(inForwardCone(FourVector(2, 1, 1, 0)));
  CHECK_FALSE(inForwardCone(FourVector(1, 1, 0, 0)));
  CHECK_FALSE(inForwardCone(FourVector(-2, 0, 0, 0)));
}

TEST_CASE("boosts and rotations preserve the metric") {
  for (int axis = 1; axis <= 3; ++axis) {
    CHECK(etaDefect(boost(0.7, axis).matrix()) < 1e-14);
    CHECK(etaDefect(rotation(1.1, axis, axis % 3 + 1).matrix()) < 1e-14);
  }
  const LorentzTransform b = boost(0.3, 1);
  CHECK(b(0, 0) == doctest::Approx(std::cosh(0.3)));
  CHECK(b(0, 1) == doctest::Approx(std::sinh(0.3)));
  const LorentzTransform r = rotation(M_PI / 2, 1, 2);
  const FourVector e1(0, 1, 0, 0);
  CHECK(((r * e1) - FourVector(0, 0, 1, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(boost(0.1, 0), InvalidTransform);
  CHECK_THROWS_AS(rotation(0.1, 2, 2), InvalidTransform);
}

TEST_CASE("composition and inverse") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const LorentzTransform a = randomLorentz(rng), b = randomLorentz(rng);
    CHECK(etaDefect((a * b).matrix()) < 1e-9 * std::pow((a * b).matrix().cwiseAbs().maxCoeff(), 2));
    CHECK(((a * a.inverse()).matrix() - Matrix4::Identity()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(compose(a, b).matrix() == (a * b).matrix());
    const FourVector x(1, 2, 3, 4), y(-1, 0.5, 2, 1);
    CHECK(minkowskiProduct(applyToVector(a, x), a * y) ==
          doctest::Approx(minkowskiProduct(x, y)).epsilon(1e-9));
  }
}

TEST_CASE("validating constructor") {
  CHECK_NOTHROW(LorentzTransform(boost(1.0, 2).matrix()));
  Matrix4 m = Matrix4::Identity();
  m(1, 1) = 2;
  CHECK_THROWS_AS(LorentzTransform{m}, InvalidTransform);
  Matrix4 t = Matrix4::Identity();
  t(0, 0) = -1;
  t(1, 1) = -1;
  CHECK_THROWS_AS(LorentzTransform{t}, InvalidTransform);
  Matrix4 parity = Matrix4::Identity();
  parity(1, 1) = -1;
  CHECK_THROWS_AS(LorentzTransform{parity}, InvalidTransform);
}

TEST_CASE("templated scalar") {
  const auto b = boost<long double>(0.5L, 3);
  const FourVectorT<long double> x(1, 0, 0, 0);
  const auto y = b * x;
  CHECK(static_cast<double>(minkowskiProduct(y, y)) == doctest::Approx(1.0));
}
