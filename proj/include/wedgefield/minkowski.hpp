#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "wedgefield/error.hpp"

namespace wedgefield {

template <typename Scalar>
using FourVectorT = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Matrix4T = Eigen::Matrix<Scalar, 4, 4>;

using FourVector = FourVectorT<double>;
using Matrix4 = Matrix4T<double>;
using Complex = std::complex<double>;

/// eta = diag(+1, -1, -1, -1).
template <typename Scalar = double>
Matrix4T<Scalar> metric() {
  return FourVectorT<Scalar>(1, -1, -1, -1).asDiagonal();
}

/// x.y = x0 y0 - x1 y1 - x2 y2 - x3 y3.
template <typename DA, typename DB>
typename DA::Scalar minkowskiProduct(const Eigen::MatrixBase<DA>& x,
                                     const Eigen::MatrixBase<DB>& y) {
  return x(0) * y(0) - x(1) * y(1) - x(2) * y(2) - x(3) * y(3);
}

/// Lowers (or raises) the index of a four-vector.
template <typename D>
FourVectorT<typename D::Scalar> lowered(const Eigen::MatrixBase<D>& x) {
  return FourVectorT<typename D::Scalar>(x(0), -x(1), -x(2), -x(3));
}

/// True if x lies in the open forward light cone.
template <typename D>
bool inForwardCone(const Eigen::MatrixBase<D>& x) {
  return x(0) > 0 && minkowskiProduct(x, x) > 0;
}

/// A proper orthochronous Lorentz transformation stored as its matrix.
template <typename Scalar>
class LorentzTransformT {
 public:
  using Matrix = Matrix4T<Scalar>;
  using Vector = FourVectorT<Scalar>;

  LorentzTransformT() : m_(Matrix::Identity()) {}

  /// Validates eta-orthogonality (1e-9), det = +1 and Lambda^0_0 >= 1.
  explicit LorentzTransformT(const Matrix& m) : m_(m) {
    using std::abs;
    const Matrix eta = metric<Scalar>();
    const Scalar defect = (m.transpose() * eta * m - eta).cwiseAbs().maxCoeff();
    const Scalar scale = std::max<Scalar>(Scalar(1), m.cwiseAbs().maxCoeff());
    if (!(defect <= Scalar(1e-9) * scale * scale))
      throw InvalidTransform("matrix is not eta-orthogonal");
    if (!(m(0, 0) >= Scalar(1) - Scalar(1e-9)))
      throw InvalidTransform("not orthochronous");
    if (!(m.determinant() > Scalar(0)))
      throw InvalidTransform("not proper");
  }

  const Matrix& matrix() const { return m_; }
  Scalar operator()(int i, int j) const { return m_(i, j); }

  template <typename D>
  Vector operator*(const Eigen::MatrixBase<D>& x) const { return m_ * x; }

  LorentzTransformT operator*(const LorentzTransformT& o) const {
    return fromTrusted(m_ * o.m_);
  }

  /// eta Lambda^T eta.
  LorentzTransformT inverse() const {
    const Matrix eta = metric<Scalar>();
    return fromTrusted(eta * m_.transpose() * eta);
  }

  /// Skips validation; for products of already valid transforms.
  static LorentzTransformT fromTrusted(const Matrix& m) {
    LorentzTransformT t;
    t.m_ = m;
    return t;
  }

 private:
  Matrix m_;
};

using LorentzTransform = LorentzTransformT<double>;

template <typename Scalar = double>
LorentzTransformT<Scalar> identityTransform() {
  return LorentzTransformT<Scalar>();
}

/// Boost with the given rapidity along spatial axis 1, 2 or 3.
template <typename Scalar>
LorentzTransformT<Scalar> boost(Scalar rapidity, int axis) {
  if (axis < 1 || axis > 3) throw InvalidTransform("boost axis must be 1..3");
  using std::cosh;
  using std::sinh;
  Matrix4T<Scalar> m = Matrix4T<Scalar>::Identity();
  m(0, 0) = m(axis, axis) = cosh(rapidity);
  m(0, axis) = m(axis, 0) = sinh(rapidity);
  return LorentzTransformT<Scalar>::fromTrusted(m);
}

/// Rotation by angle in the (i, j) spatial plane, turning e_i towards e_j.
template <typename Scalar>
LorentzTransformT<Scalar> rotation(Scalar angle, int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
    throw InvalidTransform("rotation plane must be two distinct spatial axes");
  using std::cos;
  using std::sin;
  Matrix4T<Scalar> m = Matrix4T<Scalar>::Identity();
  m(i, i) = m(j, j) = cos(angle);
  m(j, i) = sin(angle);
  m(i, j) = -sin(angle);
  return LorentzTransformT<Scalar>::fromTrusted(m);
}

template <typename Scalar>
LorentzTransformT<Scalar> compose(const LorentzTransformT<Scalar>& a,
                                  const LorentzTransformT<Scalar>& b) {
  return a * b;
}

template <typename Scalar>
LorentzTransformT<Scalar> inverseTransform(const LorentzTransformT<Scalar>& a) {
  return a.inverse();
}

template <typename Scalar, typename D>
FourVectorT<Scalar> applyToVector(const LorentzTransformT<Scalar>& a,
                                  const Eigen::MatrixBase<D>& x) {
  return a * x;
}

/// Product of up to maxFactors random boosts/rotations with parameters in
/// [-range, range].
template <typename Rng>
LorentzTransform randomLorentz(Rng& rng, int maxFactors = 3, double range = 2.0) {
  std::uniform_int_distribution<int> count(1, maxFactors);
  std::uniform_int_distribution<int> kind(0, 1);
  std::uniform_int_distribution<int> axis(1, 3);
  std::uniform_real_distribution<double> param(-range, range);
  LorentzTransform out;
  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    const double t = param(rng);
    const int a = axis(rng);
    if (kind(rng) == 0) {
      out = out * boost(t, a);
    } else {
      const int b = a % 3 + 1;
      out = out * rotation(t, a, b);
    }
  }
  return out;
}

}  // namespace wedgefield
