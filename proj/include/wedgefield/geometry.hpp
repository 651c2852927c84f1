#pragma once

#include <array>
#include <utility>

#include "wedgefield/minkowski.hpp"

namespace wedgefield {

/// Real antisymmetric 4x4 matrix theta^{mu nu}, stored by its upper triangle
/// in the order (01, 02, 03, 12, 13, 23).
class NoncommMatrix {
 public:
  using Upper = std::array<double, 6>;

  NoncommMatrix() : u_{} {}
  explicit NoncommMatrix(const Upper& upper) : u_(upper) {}

  /// Antisymmetric part of m.
  static NoncommMatrix fromMatrix(const Matrix4& m);

  const Upper& upper() const { return u_; }
  double operator()(int mu, int nu) const;
  Matrix4 matrix() const;
  bool isZero() const;

  NoncommMatrix operator-() const;
  NoncommMatrix operator+(const NoncommMatrix& o) const;
  NoncommMatrix operator-(const NoncommMatrix& o) const;
  NoncommMatrix operator*(double s) const;
  bool operator==(const NoncommMatrix& o) const { return u_ == o.u_; }

  /// Index into the upper-triangle storage for mu < nu.
  static int slot(int mu, int nu);

 private:
  Upper u_;
};

struct OrbitParams {
  double kappaE = 0;
  double kappaM = 0;
};

struct OrbitInvariants {
  double quadratic = 0;     ///< 2(|e|^2 - |m|^2); equals 2(kE^2 - kM^2) on the orbit.
  double pseudoscalar = 0;  ///< eps_{mu nu a b} theta^{mu nu} theta^{a b}, eps_{0123} = -1.
};

/// p theta q = p_mu theta^{mu nu} q_nu. Exactly antisymmetric in (p, q).
double thetaBilinear(const NoncommMatrix& theta, const FourVector& p, const FourVector& q);

/// Contravariant vector theta^{mu nu} p_nu.
FourVector thetaAction(const NoncommMatrix& theta, const FourVector& p);

NoncommMatrix referenceTheta(const OrbitParams& params);
OrbitInvariants orbitInvariants(const NoncommMatrix& theta);
bool isOnOrbit(const NoncommMatrix& theta, const OrbitParams& params, double tol);
NoncommMatrix conjugateTheta(const LorentzTransform& a, const NoncommMatrix& theta);

/// A Lambda with Lambda theta_1 Lambda^T = theta (residual < 1e-8).
LorentzTransform lambdaTheta(const NoncommMatrix& theta, const OrbitParams& params);

/// Residual ||Lambda theta_1 Lambda^T - theta||_inf.
double sectionResidual(const LorentzTransform& lambda, const NoncommMatrix& theta,
                       const OrbitParams& params);

/// Wedge {x : x.ell1 < 0 and x.ell2 < 0} for null covectors ell1, ell2.
class Wedge {
 public:
  Wedge(const FourVector& ell1, const FourVector& ell2);

  const FourVector& ell1() const { return l1_; }
  const FourVector& ell2() const { return l2_; }
  bool contains(const FourVector& x) const;
  /// min(-x.ell1, -x.ell2): positive inside, zero on the boundary.
  double depth(const FourVector& x) const;

 private:
  FourVector l1_, l2_;
};

Wedge standardWedge();
Wedge transformWedge(const LorentzTransform& a, const Wedge& w);
Wedge oppositeWedge(const Wedge& w);
Wedge wedgeOfTheta(const NoncommMatrix& theta, const OrbitParams& params);
bool wedgeEquals(const Wedge& a, const Wedge& b, double tol);
bool wedgeContains(const Wedge& w, const FourVector& x);

}  // namespace wedgefield
