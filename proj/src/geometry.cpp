#include "wedgefield/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace wedgefield {

namespace {

constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
constexpr double kEta[4] = {1, -1, -1, -1};

NoncommMatrix::Upper upperOf(const Matrix4& m) {
  NoncommMatrix::Upper u;
  for (int s = 0; s < 6; ++s) {
    const int a = kPairs[s][0], b = kPairs[s][1];
    u[s] = 0.5 * (m(a, b) - m(b, a));
  }
  return u;
}

Eigen::Vector3d electric(const NoncommMatrix& t) { return {t(0, 1), t(0, 2), t(0, 3)}; }
Eigen::Vector3d magnetic(const NoncommMatrix& t) { return {t(2, 3), t(3, 1), t(1, 2)}; }

LorentzTransform embedRotation(const Eigen::Matrix3d& r) {
  Matrix4 m = Matrix4::Identity();
  m.bottomRightCorner<3, 3>() = r;
  return LorentzTransform::fromTrusted(m);
}

LorentzTransform boostAlong(const Eigen::Vector3d& n, double rapidity) {
  const double g = std::cosh(rapidity), gb = std::sinh(rapidity);
  Matrix4 m = Matrix4::Identity();
  m(0, 0) = g;
  m.block<1, 3>(0, 1) = gb * n.transpose();
  m.block<3, 1>(1, 0) = gb * n;
  m.bottomRightCorner<3, 3>() += (g - 1) * n * n.transpose();
  return LorentzTransform::fromTrusted(m);
}

/// Rotation taking unit vector u to unit vector t.
Eigen::Matrix3d rotationTaking(const Eigen::Vector3d& u, const Eigen::Vector3d& t) {
  const Eigen::Vector3d axis = u.cross(t);
  const double s = axis.norm(), c = u.dot(t);
  if (s < 1e-14) {
    if (c > 0) return Eigen::Matrix3d::Identity();
    // Half turn about any axis orthogonal to u.
    Eigen::Vector3d k = u.unitOrthogonal();
    return 2 * k * k.transpose() - Eigen::Matrix3d::Identity();
  }
  return Eigen::AngleAxisd(std::atan2(s, c), axis / s).toRotationMatrix();
}

/// Lambda_c with Lambda_c theta Lambda_c^T close to theta_1.
LorentzTransform alignToReference(const NoncommMatrix& theta, const OrbitParams& params) {
  LorentzTransform lc;
  NoncommMatrix t = theta;
  const Eigen::Vector3d e = electric(t), m = magnetic(t);
  const Eigen::Vector3d cross = e.cross(m);
  const double cn = cross.norm();
  if (cn > 1e-15 * std::max(1.0, e.squaredNorm() + m.squaredNorm())) {
    // Frame in which e and m are parallel: beta / (1 + beta^2) = |e x m| / (e^2 + m^2).
    const double s = cn / (e.squaredNorm() + m.squaredNorm());
    const double beta = s < 1e-8 ? s : (1 - std::sqrt(std::max(0.0, 1 - 4 * s * s))) / (2 * s);
    const double chi = std::atanh(std::min(beta, 1 - 1e-16));
    const Eigen::Vector3d n = cross / cn;
    double best = INFINITY;
    for (double sign : {1.0, -1.0}) {
      const LorentzTransform b = boostAlong(sign * n, chi);
      const NoncommMatrix tb = conjugateTheta(b, theta);
      const double c = electric(tb).cross(magnetic(tb)).norm();
      if (c < best) {
        best = c;
        lc = b;
        t = tb;
      }
    }
  }
  Eigen::Vector3d ev = electric(t);
  if (ev.norm() == 0) ev = magnetic(t);
  const double target = params.kappaE != 0 ? std::copysign(1.0, params.kappaE) : 1.0;
  const LorentzTransform r =
      embedRotation(rotationTaking(ev.normalized(), Eigen::Vector3d(target, 0, 0)));
  return r * lc;
}

LorentzTransform perturbation(const Eigen::Matrix<double, 6, 1>& d) {
  return boost(d[0], 1) * boost(d[1], 2) * boost(d[2], 3) * rotation(d[3], 2, 3) *
         rotation(d[4], 3, 1) * rotation(d[5], 1, 2);
}

Eigen::Matrix<double, 6, 1> residualVector(const LorentzTransform& l, const NoncommMatrix& target,
                                           const NoncommMatrix& ref) {
  const NoncommMatrix c = conjugateTheta(l, ref);
  Eigen::Matrix<double, 6, 1> r;
  for (int s = 0; s < 6; ++s) r[s] = c.upper()[s] - target.upper()[s];
  return r;
}

FourVector normalizeNull(const FourVector& v) {
  const double s = v.cwiseAbs().maxCoeff();
  if (!(s > 0) || !std::isfinite(s)) throw InvalidWedge("null covector must be nonzero and finite");
  return v / s;
}

}  // namespace

int NoncommMatrix::slot(int mu, int nu) {
  for (int s = 0; s < 6; ++s)
    if (kPairs[s][0] == mu && kPairs[s][1] == nu) return s;
  return -1;
}

NoncommMatrix NoncommMatrix::fromMatrix(const Matrix4& m) { return NoncommMatrix(upperOf(m)); }

double NoncommMatrix::operator()(int mu, int nu) const {
  if (mu == nu) return 0;
  if (mu < nu) return u_[slot(mu, nu)];
  return -u_[slot(nu, mu)];
}

Matrix4 NoncommMatrix::matrix() const {
  Matrix4 m = Matrix4::Zero();
  for (int s = 0; s < 6; ++s) {
    m(kPairs[s][0], kPairs[s][1]) = u_[s];
    m(kPairs[s][1], kPairs[s][0]) = -u_[s];
  }
  return m;
}

bool NoncommMatrix::isZero() const {
  return std::all_of(u_.begin(), u_.end(), [](double v) { return v == 0; });
}

NoncommMatrix NoncommMatrix::operator-() const { return *this * -1.0; }

NoncommMatrix NoncommMatrix::operator+(const NoncommMatrix& o) const {
  Upper u;
  for (int s = 0; s < 6; ++s) u[s] = u_[s] + o.u_[s];
  return NoncommMatrix(u);
}

NoncommMatrix NoncommMatrix::operator-(const NoncommMatrix& o) const {
  Upper u;
  for (int s = 0; s < 6; ++s) u[s] = u_[s] - o.u_[s];
  return NoncommMatrix(u);
}

NoncommMatrix NoncommMatrix::operator*(double f) const {
  Upper u;
  for (int s = 0; s < 6; ++s) u[s] = u_[s] * f;
  return NoncommMatrix(u);
}

double thetaBilinear(const NoncommMatrix& theta, const FourVector& p, const FourVector& q) {
  double sum = 0;
  for (int s = 0; s < 6; ++s) {
    const int a = kPairs[s][0], b = kPairs[s][1];
    const double pa = kEta[a] * p(a), pb = kEta[b] * p(b);
    const double qa = kEta[a] * q(a), qb = kEta[b] * q(b);
    sum += theta.upper()[s] * (pa * qb - pb * qa);
  }
  return sum;
}

FourVector thetaAction(const NoncommMatrix& theta, const FourVector& p) {
  return theta.matrix() * lowered(p);
}

NoncommMatrix referenceTheta(const OrbitParams& params) {
  return NoncommMatrix({params.kappaE, 0, 0, 0, 0, params.kappaM});
}

OrbitInvariants orbitInvariants(const NoncommMatrix& theta) {
  const auto& u = theta.upper();
  double lowered = 0;
  for (int s = 0; s < 6; ++s) lowered += 2 * kEta[kPairs[s][0]] * kEta[kPairs[s][1]] * u[s] * u[s];
  OrbitInvariants inv;
  inv.quadratic = -lowered;
  inv.pseudoscalar = -8 * (u[0] * u[5] - u[1] * u[4] + u[2] * u[3]);
  return inv;
}

bool isOnOrbit(const NoncommMatrix& theta, const OrbitParams& params, double tol) {
  const OrbitInvariants inv = orbitInvariants(theta);
  const double q = 2 * (params.kappaE * params.kappaE - params.kappaM * params.kappaM);
  const double ps = -8 * params.kappaE * params.kappaM;
  return std::abs(inv.quadratic - q) < tol && std::abs(inv.pseudoscalar - ps) < tol;
}

NoncommMatrix conjugateTheta(const LorentzTransform& a, const NoncommMatrix& theta) {
  return NoncommMatrix::fromMatrix(a.matrix() * theta.matrix() * a.matrix().transpose());
}

double sectionResidual(const LorentzTransform& lambda, const NoncommMatrix& theta,
                       const OrbitParams& params) {
  return residualVector(lambda, theta, referenceTheta(params)).cwiseAbs().maxCoeff();
}

LorentzTransform lambdaTheta(const NoncommMatrix& theta, const OrbitParams& params) {
  if (params.kappaE == 0 || params.kappaM == 0)
    throw DegenerateOrbit("kappaE and kappaM must both be nonzero");
  const OrbitInvariants inv = orbitInvariants(theta);
  const double scale = std::max({1.0, std::abs(inv.quadratic), std::abs(inv.pseudoscalar)});
  if (!isOnOrbit(theta, params, 1e-6 * scale)) throw NotOnOrbit("invariants do not match");

  const NoncommMatrix ref = referenceTheta(params);
  // Seed: Lambda_c theta Lambda_c^T ~ theta_1, so Lambda_c^{-1} is the section.
  LorentzTransform lam = alignToReference(theta, params).inverse();

  // Damped Gauss-Newton polish over right-multiplied boosts and rotations.
  auto res = residualVector(lam, theta, ref);
  double norm = res.norm();
  double mu = 1e-6;
  for (int it = 0; it < 200 && res.cwiseAbs().maxCoeff() > 1e-14 * scale; ++it) {
    Eigen::Matrix<double, 6, 6> jac;
    const double h = 1e-7;
    for (int k = 0; k < 6; ++k) {
      Eigen::Matrix<double, 6, 1> d = Eigen::Matrix<double, 6, 1>::Zero();
      d[k] = h;
      const auto rp = residualVector(lam * perturbation(d), theta, ref);
      d[k] = -h;
      const auto rm = residualVector(lam * perturbation(d), theta, ref);
      jac.col(k) = (rp - rm) / (2 * h);
    }
    bool improved = false;
    for (int tries = 0; tries < 20; ++tries) {
      const Eigen::Matrix<double, 6, 6> a =
          jac.transpose() * jac + mu * Eigen::Matrix<double, 6, 6>::Identity();
      const Eigen::Matrix<double, 6, 1> step = -a.ldlt().solve(jac.transpose() * res);
      const LorentzTransform trial = lam * perturbation(step);
      const auto rt = residualVector(trial, theta, ref);
      if (rt.norm() < norm) {
        lam = trial;
        res = rt;
        norm = rt.norm();
        mu = std::max(mu * 0.1, 1e-15);
        improved = true;
        break;
      }
      mu *= 10;
    }
    if (!improved) break;
  }
  if (!(res.cwiseAbs().maxCoeff() < 1e-8)) throw NoConvergence("section residual above 1e-8");
  return lam;
}

Wedge::Wedge(const FourVector& ell1, const FourVector& ell2)
    : l1_(normalizeNull(ell1)), l2_(normalizeNull(ell2)) {
  if (std::abs(minkowskiProduct(l1_, l1_)) > 1e-9 || std::abs(minkowskiProduct(l2_, l2_)) > 1e-9)
    throw InvalidWedge("covectors must be null");
  Eigen::Matrix<double, 4, 2> m;
  m << l1_, l2_;
  if (Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>>(m).singularValues()(1) < 1e-9)
    throw InvalidWedge("covectors must be linearly independent");
}

bool Wedge::contains(const FourVector& x) const {
  return minkowskiProduct(x, l1_) < 0 && minkowskiProduct(x, l2_) < 0;
}

double Wedge::depth(const FourVector& x) const {
  return std::min(-minkowskiProduct(x, l1_), -minkowskiProduct(x, l2_));
}

Wedge standardWedge() { return Wedge(FourVector(1, 1, 0, 0), FourVector(-1, 1, 0, 0)); }

Wedge transformWedge(const LorentzTransform& a, const Wedge& w) {
  return Wedge(a * w.ell1(), a * w.ell2());
}

Wedge oppositeWedge(const Wedge& w) { return Wedge(-w.ell1(), -w.ell2()); }

Wedge wedgeOfTheta(const NoncommMatrix& theta, const OrbitParams& params) {
  const Wedge w = transformWedge(lambdaTheta(theta, params), standardWedge());
  return params.kappaE > 0 ? w : oppositeWedge(w);
}

bool wedgeEquals(const Wedge& a, const Wedge& b, double tol) {
  auto match = [&](const FourVector& l) {
    return (l - b.ell1()).cwiseAbs().maxCoeff() < tol || (l - b.ell2()).cwiseAbs().maxCoeff() < tol;
  };
  return match(a.ell1()) && match(a.ell2());
}

bool wedgeContains(const Wedge& w, const FourVector& x) { return w.contains(x); }

}  // namespace wedgefield
