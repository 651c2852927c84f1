#include "wedgefield/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <unordered_map>

#include "wedgefield/error.hpp"

namespace wedgefield {

namespace {

constexpr double kTwoPiSq = 4 * M_PI * M_PI;
constexpr double kUMax = 4.0;  // exp(-cosh^2 4) underflows.
constexpr double kH0 = 0.25;
constexpr int kMaxLevel = 12;
constexpr double kSigns[4] = {1, -1, -1, -1};

/// Trapezoid nodes for Phi in the substitution t = tanh u, grouped by level:
/// level 0 holds u = k h0 (k >= 0), level L the odd multiples of h0 / 2^L.
struct ProfileNodes {
  std::vector<std::vector<double>> t, w;
  ProfileNodes() : t(kMaxLevel + 1), w(kMaxLevel + 1) {
    for (int level = 0; level <= kMaxLevel; ++level) {
      const double h = kH0 / std::ldexp(1.0, level);
      for (long k = level == 0 ? 0 : 1; k * h <= kUMax; k += level == 0 ? 1 : 2) {
        const double u = k * h;
        const double c = std::cosh(u);
        double weight = std::exp(-c * c) / (c * c);
        if (level == 0 && k == 0) weight *= 0.5;  // u = 0 is counted once in 2 * sum.
        t[level].push_back(std::tanh(u));
        w[level].push_back(weight);
      }
    }
  }
};

const ProfileNodes& profileNodes() {
  static const ProfileNodes nodes;
  return nodes;
}

double levelSum(int level, double omega) {
  const auto& n = profileNodes();
  const auto& t = n.t[level];
  const auto& w = n.w[level];
  double s = 0;
  for (std::size_t i = 0; i < t.size(); ++i) s += w[i] * std::cos(omega * t[i]);
  return s;
}

double computeProfileTransform(double omega) {
  static const double scale = [] {
    double total = 0;
    for (int l = 0; l <= 6; ++l) total += levelSum(l, 0.0);
    return 2 * total * kH0 / 64;
  }();
  double sum = levelSum(0, omega);
  double prev = 2 * sum * kH0;
  for (int level = 1; level <= kMaxLevel; ++level) {
    sum += levelSum(level, omega);
    const double cur = 2 * sum * kH0 / std::ldexp(1.0, level);
    if (level >= 3 && std::abs(cur - prev) <= 1e-13 * scale) return cur;
    prev = cur;
  }
  throw QuadratureFailure("bump profile transform did not converge");
}

struct ProfileMemo {
  std::mutex mu;
  std::unordered_map<double, double> values;
};

ProfileMemo& profileMemo() {
  static ProfileMemo memo;
  return memo;
}

void hashCombine(std::uint64_t& h, double v) {
  std::uint64_t bits;
  if (v == 0) v = 0;  // fold -0 into +0
  std::memcpy(&bits, &v, sizeof bits);
  h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h *= 0xff51afd7ed558ccdULL;
}

bool isSignedPermutation(const Matrix4& m, std::array<int, 4>& perm) {
  if (std::abs(m(0, 0) - 1) > 1e-12) return false;
  perm[0] = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(m(0, i)) > 1e-12 || std::abs(m(i, 0)) > 1e-12) return false;
    int found = -1;
    for (int j = 1; j < 4; ++j) {
      const double v = std::abs(m(i, j));
      if (std::abs(v - 1) <= 1e-12) {
        if (found >= 0) return false;
        found = j;
      } else if (v > 1e-12) {
        return false;
      }
    }
    if (found < 0) return false;
    perm[i] = found;
  }
  return true;
}

SupportBox gaussianBox(const Matrix4& cov, const FourVector& mid, double eps) {
  const double r = 2 * std::log(1 / eps);
  SupportBox b;
  for (int mu = 0; mu < 4; ++mu) {
    const double w = std::sqrt(r * cov(mu, mu));
    b.lo(mu) = mid(mu) - w;
    b.hi(mu) = mid(mu) + w;
  }
  b.eps = eps;
  return b;
}

}  // namespace

GaussianPacket::GaussianPacket(Complex amplitude, const FourVector& center,
                               const Matrix4& precision, const FourVector& wavevector)
    : c_(amplitude), a_(center), s_(0.5 * (precision + precision.transpose())), k_(wavevector) {
  Eigen::LLT<Matrix4> llt(s_);
  if (llt.info() != Eigen::Success) throw Unsupported("Gaussian precision must be positive definite");
  cov_ = llt.solve(Matrix4::Identity());
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  double diagProd = 1;
  for (int i = 0; i < 4; ++i) diagProd *= llt.matrixL()(i, i);
  vol_ = 1 / diagProd;
}

GaussianPacket GaussianPacket::axisAligned(Complex amplitude, const FourVector& center,
                                           const FourVector& widths,
                                           const FourVector& wavevector) {
  const FourVector inv = widths.array().square().inverse();
  return GaussianPacket(amplitude, center, inv.asDiagonal(), wavevector);
}

TestFunction::TestFunction(const BumpPacket& b) : packets_{b} {
  if (!(b.halfWidth.array() > 0).all()) throw Unsupported("bump half-widths must be positive");
}

TestFunction TestFunction::operator+(const TestFunction& o) const {
  std::vector<Packet> p = packets_;
  p.insert(p.end(), o.packets_.begin(), o.packets_.end());
  return TestFunction(std::move(p));
}

TestFunction TestFunction::operator-(const TestFunction& o) const { return *this + o * -1.0; }

TestFunction TestFunction::operator*(Complex s) const {
  std::vector<Packet> out;
  for (const auto& p : packets_) {
    if (const auto* g = std::get_if<GaussianPacket>(&p)) {
      out.emplace_back(GaussianPacket(g->amplitude() * s, g->center(), g->precision(), g->wavevector()));
    } else {
      BumpPacket b = std::get<BumpPacket>(p);
      b.amplitude *= s;
      out.emplace_back(b);
    }
  }
  return TestFunction(std::move(out));
}

std::uint64_t TestFunction::fingerprint() const {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (const auto& p : packets_) {
    if (const auto* g = std::get_if<GaussianPacket>(&p)) {
      hashCombine(h, 1);
      hashCombine(h, g->amplitude().real());
      hashCombine(h, g->amplitude().imag());
      for (int i = 0; i < 4; ++i) hashCombine(h, g->center()(i));
      for (int i = 0; i < 16; ++i) hashCombine(h, g->precision()(i));
      for (int i = 0; i < 4; ++i) hashCombine(h, g->wavevector()(i));
    } else {
      const auto& b = std::get<BumpPacket>(p);
      hashCombine(h, 2);
      hashCombine(h, b.amplitude.real());
      hashCombine(h, b.amplitude.imag());
      for (int i = 0; i < 4; ++i) {
        hashCombine(h, b.center(i));
        hashCombine(h, b.halfWidth(i));
        hashCombine(h, b.wavevector(i));
      }
    }
  }
  return h;
}

double bumpProfile(double t) {
  if (!(std::abs(t) < 1)) return 0;
  return std::exp(-1 / (1 - t * t));
}

double bumpProfileTransform(double omega) {
  omega = std::abs(omega);
  auto& memo = profileMemo();
  {
    std::lock_guard<std::mutex> lock(memo.mu);
    auto it = memo.values.find(omega);
    if (it != memo.values.end()) return it->second;
  }
  const double v = computeProfileTransform(omega);
  std::lock_guard<std::mutex> lock(memo.mu);
  if (memo.values.size() > (1u << 22)) memo.values.clear();
  memo.values.emplace(omega, v);
  return v;
}

Complex evaluate(const TestFunction& f, const FourVector& x) {
  Complex sum = 0;
  for (const auto& p : f.packets()) {
    if (const auto* g = std::get_if<GaussianPacket>(&p)) {
      const FourVector z = x - g->center();
      sum += g->amplitude() * std::exp(Complex(-0.5 * z.dot(g->precision() * z),
                                               minkowskiProduct(g->wavevector(), x)));
    } else {
      const auto& b = std::get<BumpPacket>(p);
      double prof = 1;
      for (int mu = 0; mu < 4 && prof != 0; ++mu)
        prof *= bumpProfile((x(mu) - b.center(mu)) / b.halfWidth(mu));
      if (prof != 0)
        sum += b.amplitude * prof * std::polar(1.0, minkowskiProduct(b.wavevector, x));
    }
  }
  return sum;
}

Complex fourier(const Packet& p, const FourVector& mom) {
  if (const auto* g = std::get_if<GaussianPacket>(&p)) {
    const FourVector q = mom - g->wavevector();
    const FourVector u = lowered(q);
    return g->amplitude() * g->volumeFactor() *
           std::exp(Complex(-0.5 * u.dot(g->covariance() * u), -minkowskiProduct(q, g->center())));
  }
  const auto& b = std::get<BumpPacket>(p);
  const FourVector q = mom - b.wavevector;
  double mag = 1, phase = 0;
  for (int mu = 0; mu < 4; ++mu) {
    mag *= b.halfWidth(mu) * bumpProfileTransform(b.halfWidth(mu) * q(mu));
    phase -= kSigns[mu] * q(mu) * b.center(mu);
  }
  return b.amplitude * (mag / kTwoPiSq) * std::polar(1.0, phase);
}

Complex fourier(const TestFunction& f, const FourVector& p) {
  Complex sum = 0;
  for (const auto& pk : f.packets()) sum += fourier(pk, p);
  return sum;
}

TestFunction translate(const TestFunction& f, const FourVector& y) {
  return poincare(f, y, LorentzTransform());
}

TestFunction poincare(const TestFunction& f, const FourVector& y, const LorentzTransform& a) {
  const Matrix4& l = a.matrix();
  const Matrix4 linv = a.inverse().matrix();
  std::vector<Packet> out;
  for (const auto& p : f.packets()) {
    if (const auto* g = std::get_if<GaussianPacket>(&p)) {
      const FourVector k = l * g->wavevector();
      const Complex c = g->amplitude() * std::polar(1.0, -minkowskiProduct(k, y));
      out.emplace_back(GaussianPacket(c, l * g->center() + y,
                                      linv.transpose() * g->precision() * linv, k));
    } else {
      const auto& b = std::get<BumpPacket>(p);
      std::array<int, 4> perm;
      if (!isSignedPermutation(l, perm))
        throw Unsupported("bump packets only admit spatial signed permutations");
      BumpPacket nb;
      nb.wavevector = l * b.wavevector;
      nb.center = l * b.center + y;
      for (int i = 0; i < 4; ++i) nb.halfWidth(i) = b.halfWidth(perm[i]);
      nb.amplitude = b.amplitude * std::polar(1.0, -minkowskiProduct(nb.wavevector, y));
      out.emplace_back(nb);
    }
  }
  return TestFunction(std::move(out));
}

TestFunction starInvolution(const TestFunction& f) {
  std::vector<Packet> out;
  for (const auto& p : f.packets()) {
    if (const auto* g = std::get_if<GaussianPacket>(&p)) {
      out.emplace_back(GaussianPacket(std::conj(g->amplitude()), g->center(), g->precision(),
                                      -g->wavevector()));
    } else {
      BumpPacket b = std::get<BumpPacket>(p);
      b.amplitude = std::conj(b.amplitude);
      b.wavevector = -b.wavevector;
      out.emplace_back(b);
    }
  }
  return TestFunction(std::move(out));
}

TestFunction jInvolution(const TestFunction& f) {
  std::vector<Packet> out;
  for (const auto& p : f.packets()) {
    if (const auto* g = std::get_if<GaussianPacket>(&p)) {
      out.emplace_back(GaussianPacket(std::conj(g->amplitude()), -g->center(), g->precision(),
                                      g->wavevector()));
    } else {
      BumpPacket b = std::get<BumpPacket>(p);
      b.amplitude = std::conj(b.amplitude);
      b.center = -b.center;
      out.emplace_back(b);
    }
  }
  return TestFunction(std::move(out));
}

SupportBox SupportBox::united(const SupportBox& o) const {
  SupportBox b;
  b.lo = lo.cwiseMin(o.lo);
  b.hi = hi.cwiseMax(o.hi);
  b.exact = exact && o.exact;
  b.eps = std::max(eps, o.eps);
  return b;
}

std::vector<FourVector> SupportBox::corners() const {
  std::vector<FourVector> out;
  for (int m = 0; m < 16; ++m) {
    FourVector c;
    for (int mu = 0; mu < 4; ++mu) c(mu) = (m >> mu) & 1 ? hi(mu) : lo(mu);
    out.push_back(c);
  }
  return out;
}

double bumpTransformTail(double eps) {
  static std::mutex mu;
  static std::map<double, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(eps);
    if (it != cache.end()) return it->second;
  }
  const double peak = bumpProfileTransform(0);
  const double step = 0.25;
  double last = 0;
  for (double w = 0; w - last < 60 && w < 5000; w += step)
    if (std::abs(bumpProfileTransform(w)) >= eps * peak) last = w;
  const double tail = last + step;
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(eps, tail);
  return tail;
}

SupportBox epsSupport(const TestFunction& f, double eps, SupportSpace space) {
  if (!(eps > 0)) throw Unsupported("eps must be positive");
  bool first = true;
  SupportBox out;
  for (const auto& p : f.packets()) {
    SupportBox b;
    if (const auto* g = std::get_if<GaussianPacket>(&p)) {
      b = space == SupportSpace::Position ? gaussianBox(g->covariance(), g->center(), eps)
                                          : gaussianBox(g->precision(), g->wavevector(), eps);
    } else {
      const auto& bp = std::get<BumpPacket>(p);
      if (space == SupportSpace::Position) {
        b.lo = bp.center - bp.halfWidth;
        b.hi = bp.center + bp.halfWidth;
        b.exact = true;
      } else {
        const double w = bumpTransformTail(eps);
        b.lo = bp.wavevector - w * bp.halfWidth.cwiseInverse();
        b.hi = bp.wavevector + w * bp.halfWidth.cwiseInverse();
        b.eps = eps;
      }
    }
    out = first ? b : out.united(b);
    first = false;
  }
  if (first) out.exact = true;
  if (f.packets().size() > 1 && !out.exact) out.eps = eps;
  return out;
}

}  // namespace wedgefield
