#pragma once

#include <vector>

#include "wedgefield/geometry.hpp"
#include "wedgefield/quadrature.hpp"
#include "wedgefield/testfn.hpp"

namespace wedgefield {

/// rho~(lambda): StandardPhase exp(-i lambda/2) or DampedPhase
/// exp(-i lambda/2 - sigma lambda^2).
class TwistFunction {
 public:
  enum class Kind { StandardPhase, DampedPhase };

  TwistFunction() = default;
  static TwistFunction standard() { return {}; }
  static TwistFunction damped(double sigma);

  Kind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  bool isStandard() const { return kind_ == Kind::StandardPhase; }
  Complex operator()(double lambda) const;
  bool operator==(const TwistFunction& o) const { return kind_ == o.kind_ && sigma_ == o.sigma_; }

 private:
  Kind kind_ = Kind::StandardPhase;
  double sigma_ = 0;
};

/// coefficient * f_1 (x) ... (x) f_n with a twist (Theta_lr, rho_lr) per pair l < r.
/// Indices are 0-based.
class TwistedTensor {
 public:
  explicit TwistedTensor(Complex coefficient = 1.0) : coef_(coefficient) {}
  explicit TwistedTensor(std::vector<TestFunction> factors, Complex coefficient = 1.0);

  int degree() const { return static_cast<int>(factors_.size()); }
  const std::vector<TestFunction>& factors() const { return factors_; }
  const TestFunction& factor(int j) const { return factors_[j]; }
  Complex coefficient() const { return coef_; }

  const NoncommMatrix& pairTwist(int l, int r) const { return twist_[index(l, r)]; }
  const TwistFunction& pairRho(int l, int r) const { return rho_[index(l, r)]; }
  void setPair(int l, int r, const NoncommMatrix& theta, const TwistFunction& rho);
  void setFactor(int j, TestFunction f) { factors_[j] = std::move(f); }
  void setCoefficient(Complex c) { coef_ = c; }

  bool isPlain() const;
  /// True when every pair uses StandardPhase.
  bool isPhase() const;

 private:
  int index(int l, int r) const { return l * degree() - l * (l + 1) / 2 + (r - l - 1); }

  std::vector<TestFunction> factors_;
  std::vector<NoncommMatrix> twist_;
  std::vector<TwistFunction> rho_;
  Complex coef_;
};

/// Finite sum of twisted tensors (an element of the tensor algebra).
struct TensorPoly {
  std::vector<TwistedTensor> terms;

  TensorPoly() = default;
  TensorPoly(const TwistedTensor& t) : terms{t} {}  // NOLINT(implicit)
  TensorPoly operator+(const TensorPoly& o) const;
  TensorPoly operator-(const TensorPoly& o) const;
  TensorPoly operator*(Complex s) const;
  int maxDegree() const;
};

/// Degree-1 tensor.
TwistedTensor tensorOf(const TestFunction& f);

TwistedTensor moyalProduct(const TwistedTensor& f, const TwistedTensor& g, const NoncommMatrix& theta);
TwistedTensor rhoProduct(const TwistedTensor& f, const TwistedTensor& g, const NoncommMatrix& theta,
                         const TwistFunction& rho);
/// Untwisted concatenation (moyalProduct with theta = 0).
TwistedTensor plainJoin(const TwistedTensor& f, const TwistedTensor& g);
TensorPoly moyalProduct(const TensorPoly& f, const TensorPoly& g, const NoncommMatrix& theta);
TensorPoly rhoProduct(const TensorPoly& f, const TensorPoly& g, const NoncommMatrix& theta,
                      const TwistFunction& rho);
TensorPoly plainJoin(const TensorPoly& f, const TensorPoly& g);

/// prod_{l<r} rho_lr(p_l Theta_lr p_r).
Complex twistFactor(const TwistedTensor& f, const std::vector<FourVector>& momenta);
Complex momentumKernel(const TwistedTensor& f, const std::vector<FourVector>& momenta);

struct PositionQuadrature {
  int nodesPerAxis = 24;
  double eps = 1e-10;  ///< momentum-support cutoff relative to the peak
};

/// Position-space value at the given points (degree <= 2), via the inverse
/// Fourier transform of the momentum kernel.
Estimated positionEvaluate(const TwistedTensor& f, const std::vector<FourVector>& points,
                           const PositionQuadrature& quad = {});
Estimated starDiagonal(const TestFunction& f, const TestFunction& g, const NoncommMatrix& theta,
                       const FourVector& x, const PositionQuadrature& quad = {});

TwistedTensor poincareAct(const TwistedTensor& f, const FourVector& y, const LorentzTransform& a);
TwistedTensor starInvolutionTensor(const TwistedTensor& f);
TwistedTensor jInvolutionTensor(const TwistedTensor& f);
TwistedTensor uThetaMultiplier(const TwistedTensor& f, const NoncommMatrix& theta);
TensorPoly starInvolutionTensor(const TensorPoly& f);
TensorPoly uThetaMultiplier(const TensorPoly& f, const NoncommMatrix& theta);

double mixedAssociativityGap(const TestFunction& f, const TestFunction& g, const TestFunction& h,
                             const NoncommMatrix& thetaA, const NoncommMatrix& thetaB,
                             const std::vector<FourVector>& momenta);

}  // namespace wedgefield
