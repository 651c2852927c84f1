#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "wedgefield/minkowski.hpp"

namespace wedgefield {

/// c exp(-1/2 (x-a)^T S (x-a) + i k.x), S symmetric positive definite.
class GaussianPacket {
 public:
  GaussianPacket(Complex amplitude, const FourVector& center, const Matrix4& precision,
                 const FourVector& wavevector);
  /// S = diag(1/sigma_mu^2).
  static GaussianPacket axisAligned(Complex amplitude, const FourVector& center,
                                    const FourVector& widths, const FourVector& wavevector);

  Complex amplitude() const { return c_; }
  const FourVector& center() const { return a_; }
  const Matrix4& precision() const { return s_; }
  const Matrix4& covariance() const { return cov_; }
  const FourVector& wavevector() const { return k_; }
  /// det(S)^{-1/2}.
  double volumeFactor() const { return vol_; }

 private:
  Complex c_;
  FourVector a_;
  Matrix4 s_, cov_;
  FourVector k_;
  double vol_;
};

/// c prod_mu phi((x_mu - a_mu)/h_mu) exp(i k.x) with phi(t) = exp(-1/(1-t^2)).
struct BumpPacket {
  Complex amplitude{1, 0};
  FourVector center = FourVector::Zero();
  FourVector halfWidth = FourVector::Ones();
  FourVector wavevector = FourVector::Zero();
};

using Packet = std::variant<GaussianPacket, BumpPacket>;

/// Finite sum of Gaussian and bump packets. Immutable.
class TestFunction {
 public:
  TestFunction() = default;
  TestFunction(const GaussianPacket& g) : packets_{g} {}  // NOLINT(implicit)
  TestFunction(const BumpPacket& b);                     // NOLINT(implicit)
  explicit TestFunction(std::vector<Packet> packets) : packets_(std::move(packets)) {}

  const std::vector<Packet>& packets() const { return packets_; }
  bool isZero() const { return packets_.empty(); }

  TestFunction operator+(const TestFunction& o) const;
  TestFunction operator-(const TestFunction& o) const;
  TestFunction operator*(Complex s) const;

  /// Content hash, used to key quadrature caches.
  std::uint64_t fingerprint() const;

 private:
  std::vector<Packet> packets_;
};

/// phi(t) = exp(-1/(1-t^2)) on |t| < 1, zero elsewhere.
double bumpProfile(double t);
/// Phi(w) = int_{-1}^{1} phi(t) cos(w t) dt (real, even). Memoized.
double bumpProfileTransform(double omega);

Complex evaluate(const TestFunction& f, const FourVector& x);
/// (2 pi)^{-2} int f(x) exp(-i p.x) d^4x.
Complex fourier(const TestFunction& f, const FourVector& p);
Complex fourier(const Packet& f, const FourVector& p);

TestFunction translate(const TestFunction& f, const FourVector& y);
/// x -> f(Lambda^{-1}(x - y)). Bumps accept only spatial signed permutations.
TestFunction poincare(const TestFunction& f, const FourVector& y, const LorentzTransform& a);
/// x -> conj f(x).
TestFunction starInvolution(const TestFunction& f);
/// x -> conj f(-x).
TestFunction jInvolution(const TestFunction& f);

enum class SupportSpace { Position, Momentum };

struct SupportBox {
  FourVector lo = FourVector::Zero();
  FourVector hi = FourVector::Zero();
  bool exact = false;
  double eps = 0;

  bool contains(const FourVector& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
  FourVector mid() const { return 0.5 * (lo + hi); }
  FourVector halfWidth() const { return 0.5 * (hi - lo); }
  SupportBox united(const SupportBox& o) const;
  std::vector<FourVector> corners() const;
};

/// Box outside which |f| (resp. |f~|) < eps * max. Exact for bumps in position space.
SupportBox epsSupport(const TestFunction& f, double eps, SupportSpace space);

/// Smallest w with |Phi(v)| < eps Phi(0) for all sampled |v| >= w.
double bumpTransformTail(double eps);

}  // namespace wedgefield
