#include "wedgefield/freefield.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <list>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "fastmath.hpp"

namespace wedgefield {

namespace {

constexpr double kScanStep = 0.25;
constexpr double kInteriorFraction = 0.8;
// Contractions not coupled to any other cost O(N); they get this node multiple.
constexpr int kUncoupledRefine = 2;
// Nodes below this fraction of the largest weight are dropped from cube rules.
constexpr double kPruneRatio = 1e-18;

/// Shell nodes of one contraction with weights 2 pi W / (2 omega) folded into v.
struct PairData {
  std::vector<double> q0, q1, q2, q3;
  std::vector<Complex> v;
  std::vector<double> vr, vi;
  std::vector<double> interior;
  Complex sum = 0, sumInterior = 0;
  double sumAbs = 0;

  std::size_t size() const { return v.size(); }
  FourVector q(std::size_t n) const { return {q0[n], q1[n], q2[n], q3[n]}; }
};

using PairDataPtr = std::shared_ptr<const PairData>;

/// Drops negligible nodes (if pruneRatio > 0), fills the split arrays and sums.
void finalize(PairData& d, double pruneRatio) {
  double peak = 0;
  for (const auto& v : d.v) peak = std::max(peak, std::abs(v));
  std::size_t kept = 0;
  for (std::size_t n = 0; n < d.v.size(); ++n) {
    if (pruneRatio > 0 && std::abs(d.v[n]) <= pruneRatio * peak) continue;
    d.q0[kept] = d.q0[n];
    d.q1[kept] = d.q1[n];
    d.q2[kept] = d.q2[n];
    d.q3[kept] = d.q3[n];
    d.v[kept] = d.v[n];
    d.interior[kept] = d.interior[n];
    ++kept;
  }
  for (auto* a : {&d.q0, &d.q1, &d.q2, &d.q3, &d.interior}) a->resize(kept);
  d.v.resize(kept);
  d.vr.resize(kept);
  d.vi.resize(kept);
  for (std::size_t n = 0; n < kept; ++n) {
    d.vr[n] = d.v[n].real();
    d.vi[n] = d.v[n].imag();
    d.sum += d.v[n];
    d.sumInterior += d.v[n] * d.interior[n];
    d.sumAbs += std::abs(d.v[n]);
  }
}

struct RuleShape {
  double radius = 0;
  std::array<int, 3> nodes{};
};

std::vector<Eigen::Vector3d> scanDirections() {
  std::vector<Eigen::Vector3d> dirs;
  for (int a = 0; a < 3; ++a)
    for (double s : {1.0, -1.0}) {
      Eigen::Vector3d d = Eigen::Vector3d::Zero();
      d(a) = s;
      dirs.push_back(d);
    }
  const int n = 140;
  const double golden = M_PI * (3 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1 - 2 * (i + 0.5) / n;
    const double r = std::sqrt(1 - z * z);
    dirs.emplace_back(r * std::cos(golden * i), r * std::sin(golden * i), z);
  }
  return dirs;
}

double pairIntegrandAbs(const TestFunction& fi, const TestFunction& fj, double mass,
                        const Eigen::Vector3d& q) {
  const FourVector p = onShell(mass, q);
  return std::abs(fourier(fi, p) * fourier(fj, FourVector(-p))) / (2 * p(0));
}

/// Effective half-extent of a packet along axis mu in position space.
double packetExtent(const Packet& p, int mu) {
  if (const auto* g = std::get_if<GaussianPacket>(&p)) return 2 * std::sqrt(g->covariance()(mu, mu));
  return std::get<BumpPacket>(p).halfWidth(mu);
}

FourVector packetCenter(const Packet& p) {
  if (const auto* g = std::get_if<GaussianPacket>(&p)) return g->center();
  return std::get<BumpPacket>(p).center;
}

/// Largest |x_mu - y_mu| over the effective supports of fi and fj.
FourVector positionSpread(const TestFunction& fi, const TestFunction& fj) {
  FourVector s = FourVector::Zero();
  for (const auto& a : fi.packets())
    for (const auto& b : fj.packets())
      for (int mu = 0; mu < 4; ++mu)
        s(mu) = std::max(s(mu), std::abs(packetCenter(a)(mu) - packetCenter(b)(mu)) +
                                    packetExtent(a, mu) + packetExtent(b, mu));
  return s;
}

class ShellCache {
 public:
  static ShellCache& instance() {
    static ShellCache c;
    return c;
  }

  double radius(const TestFunction& fi, const TestFunction& fj, const MassShellMeasure& mu) {
    const auto key = std::make_tuple(fi.fingerprint(), fj.fingerprint(), mu.mass, mu.cutoff, mu.pairEps);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = radii_.find(key);
      if (it != radii_.end()) return it->second;
    }
    static const std::vector<Eigen::Vector3d> dirs = scanDirections();
    const int steps = std::max(1, static_cast<int>(std::ceil(mu.cutoff / kScanStep)));
    std::vector<double> maxAt(steps + 1, 0.0);
    maxAt[0] = pairIntegrandAbs(fi, fj, mu.mass, Eigen::Vector3d::Zero());
    parallelChunks(steps, [&](std::size_t s) {
      const double r = std::min(mu.cutoff, (s + 1) * kScanStep);
      double m = 0;
      for (const auto& d : dirs) m = std::max(m, pairIntegrandAbs(fi, fj, mu.mass, r * d));
      maxAt[s + 1] = m;
    });
    const double peak = *std::max_element(maxAt.begin(), maxAt.end());
    int last = 0;
    for (int s = 0; s <= steps; ++s)
      if (maxAt[s] >= mu.pairEps * peak) last = s;
    const double r = peak == 0 ? kScanStep : std::min(mu.cutoff, (last + 1) * kScanStep);
    std::lock_guard<std::mutex> lock(mu_);
    radii_.emplace(key, r);
    return r;
  }

  PairDataPtr rule(const TestFunction& fi, const TestFunction& fj, const MassShellMeasure& mu,
                   const RuleShape& shape) {
    const auto key = std::make_tuple(fi.fingerprint(), fj.fingerprint(), mu.mass, shape.radius,
                                     shape.nodes[0], shape.nodes[1], shape.nodes[2]);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = rules_.find(key);
      if (it != rules_.end()) return it->second;
    }
    PairDataPtr data = build(fi, fj, mu.mass, shape);
    std::lock_guard<std::mutex> lock(mu_);
    rules_.emplace(key, data);
    order_.push_back(key);
    held_ += data->size();
    while (held_ > kMaxHeldNodes && order_.size() > 1) {
      auto old = rules_.find(order_.front());
      held_ -= old->second->size();
      rules_.erase(old);
      order_.pop_front();
    }
    return data;
  }

  void clear() {
    std::lock_guard<std::mutex> lock(mu_);
    radii_.clear();
    rules_.clear();
    order_.clear();
    held_ = 0;
  }

 private:
  using RadiusKey = std::tuple<std::uint64_t, std::uint64_t, double, double, double>;
  using RuleKey = std::tuple<std::uint64_t, std::uint64_t, double, double, int, int, int>;
  static constexpr std::size_t kMaxHeldNodes = 6'000'000;

  static PairDataPtr build(const TestFunction& fi, const TestFunction& fj, double mass,
                           const RuleShape& shape) {
    const double r = shape.radius;
    std::array<GaussLegendreRule, 3> rules;
    for (int a = 0; a < 3; ++a) rules[a] = gaussLegendre(shape.nodes[a], -r, r);
    const int n1 = shape.nodes[0], n2 = shape.nodes[1], n3 = shape.nodes[2];
    auto data = std::make_shared<PairData>();
    const std::size_t total = static_cast<std::size_t>(n1) * n2 * n3;
    data->q0.resize(total);
    data->q1.resize(total);
    data->q2.resize(total);
    data->q3.resize(total);
    data->v.resize(total);
    data->interior.resize(total);
    parallelChunks(n1, [&](std::size_t i1) {
      for (int i2 = 0; i2 < n2; ++i2)
        for (int i3 = 0; i3 < n3; ++i3) {
          const std::size_t idx = (i1 * n2 + i2) * static_cast<std::size_t>(n3) + i3;
          const Eigen::Vector3d qs(rules[0].nodes[i1], rules[1].nodes[i2], rules[2].nodes[i3]);
          const FourVector q = onShell(mass, qs);
          const double w = rules[0].weights[i1] * rules[1].weights[i2] * rules[2].weights[i3] *
                           2 * M_PI / (2 * q(0));
          data->q0[idx] = q(0);
          data->q1[idx] = q(1);
          data->q2[idx] = q(2);
          data->q3[idx] = q(3);
          data->v[idx] = w * fourier(fi, q) * fourier(fj, FourVector(-q));
          data->interior[idx] = qs.cwiseAbs().maxCoeff() <= kInteriorFraction * r ? 1.0 : 0.0;
        }
    });
    finalize(*data, kPruneRatio);
    return data;
  }

  std::mutex mu_;
  std::map<RadiusKey, double> radii_;
  std::map<RuleKey, PairDataPtr> rules_;
  std::list<RuleKey> order_;
  std::size_t held_ = 0;
};

PairDataPtr latticeRule(const TestFunction& fi, const TestFunction& fj, double mass,
                        const ShellLattice& lat) {
  auto data = std::make_shared<PairData>();
  const std::size_t n = lat.size();
  data->q0.resize(n);
  data->q1.resize(n);
  data->q2.resize(n);
  data->q3.resize(n);
  data->v.resize(n);
  data->interior.assign(n, 1.0);
  for (std::size_t a = 0; a < n; ++a) {
    const FourVector q = onShell(mass, lat.momenta[a]);
    data->q0[a] = q(0);
    data->q1[a] = q(1);
    data->q2[a] = q(2);
    data->q3[a] = q(3);
    data->v[a] = lat.weights[a] * 2 * M_PI / (2 * q(0)) * fourier(fi, q) * fourier(fj, FourVector(-q));
  }
  finalize(*data, 0);
  return data;
}

/// sum_n v[n] exp(i c.q[n]), also restricted to interior nodes.
struct InnerSum {
  Complex all, interior;
};

InnerSum innerSum(const PairData& d, const double c[4]) {
  if (c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0) return {d.sum, d.sumInterior};
  constexpr std::size_t kBlock = 256;
  double ang[kBlock], sn[kBlock], cs[kBlock];
  double ar = 0, ai = 0, ir = 0, ii = 0;
  const std::size_t n = d.size();
  for (std::size_t b = 0; b < n; b += kBlock) {
    const std::size_t m = std::min(kBlock, n - b);
    const double* q0 = d.q0.data() + b;
    const double* q1 = d.q1.data() + b;
    const double* q2 = d.q2.data() + b;
    const double* q3 = d.q3.data() + b;
    for (std::size_t k = 0; k < m; ++k) ang[k] = c[0] * q0[k] + c[1] * q1[k] + c[2] * q2[k] + c[3] * q3[k];
    detail::sincosBlock(ang, sn, cs, m);
    const double* vr = d.vr.data() + b;
    const double* vi = d.vi.data() + b;
    const double* in = d.interior.data() + b;
    for (std::size_t k = 0; k < m; ++k) {
      const double tr = vr[k] * cs[k] - vi[k] * sn[k];
      const double ti = vr[k] * sn[k] + vi[k] * cs[k];
      ar += tr;
      ai += ti;
      ir += tr * in[k];
      ii += ti * in[k];
    }
  }
  return {{ar, ai}, {ir, ii}};
}

struct PartialValue {
  Complex all = 0, interior = 0;
  double abs = 0;
};

enum class Variant { Fine, Half };

/// One Wick pairing of one term, prepared for evaluation.
struct PairingPlan {
  const TwistedTensor* term = nullptr;
  Pairing pairs;
  std::vector<int> pairOfLeg;
  std::vector<double> signOfLeg;
  // exponent = -1/2 sum_{a<b} q_a^T G[a][b] q_b (phase twists only)
  std::vector<std::vector<Matrix4>> g;
  std::vector<std::vector<bool>> coupled;
  std::vector<RuleShape> fine, half;
};

PairDataPtr pairData(const PairingPlan& plan, int a, const MassShellMeasure& mu, Variant var) {
  const auto& t = *plan.term;
  const auto [i, j] = plan.pairs[a];
  if (mu.lattice) return latticeRule(t.factor(i), t.factor(j), mu.mass, *mu.lattice);
  const RuleShape& s = var == Variant::Fine ? plan.fine[a] : plan.half[a];
  return ShellCache::instance().rule(t.factor(i), t.factor(j), mu, s);
}

PairingPlan makePlan(const TwistedTensor& term, const Pairing& pairing, const MassShellMeasure& mu) {
  PairingPlan plan;
  plan.term = &term;
  plan.pairs = pairing;
  const int n = term.degree(), k = static_cast<int>(pairing.size());
  plan.pairOfLeg.assign(n, -1);
  plan.signOfLeg.assign(n, 0);
  for (int a = 0; a < k; ++a) {
    plan.pairOfLeg[pairing[a].first] = a;
    plan.pairOfLeg[pairing[a].second] = a;
    plan.signOfLeg[pairing[a].first] = 1;
    plan.signOfLeg[pairing[a].second] = -1;
  }
  plan.g.assign(k, std::vector<Matrix4>(k, Matrix4::Zero()));
  plan.coupled.assign(k, std::vector<bool>(k, false));
  const Matrix4 eta = metric();
  for (int l = 0; l < n; ++l)
    for (int r = l + 1; r < n; ++r) {
      const NoncommMatrix& th = term.pairTwist(l, r);
      if (th.isZero()) continue;
      const int a = plan.pairOfLeg[l], b = plan.pairOfLeg[r];
      if (a == b) continue;  // q Theta q = 0
      const Matrix4 m = plan.signOfLeg[l] * plan.signOfLeg[r] * (eta * th.matrix() * eta);
      if (a < b)
        plan.g[a][b] += m;
      else
        plan.g[b][a] += m.transpose();
    }
  // Non-phase twists do not cancel pairwise, so every pair couples.
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      plan.coupled[a][b] = plan.coupled[b][a] = term.isPhase() ? !plan.g[a][b].isZero(0) : true;
  if (mu.lattice) return plan;

  std::vector<double> radius(k);
  for (int a = 0; a < k; ++a)
    radius[a] = ShellCache::instance().radius(term.factor(pairing[a].first),
                                              term.factor(pairing[a].second), mu);
  for (int a = 0; a < k; ++a) {
    const FourVector spread = positionSpread(term.factor(pairing[a].first), term.factor(pairing[a].second));
    // Frequency added to q_a by the twist phases: 1/2 |G^T q_b| over the partner cubes.
    Eigen::Vector4d extra = Eigen::Vector4d::Zero();
    for (int b = 0; b < k; ++b) {
      if (b == a || !plan.coupled[a][b]) continue;
      const Matrix4 gm = a < b ? plan.g[a][b] : Matrix4(plan.g[b][a].transpose());
      const FourVector qmax(std::sqrt(3 * radius[b] * radius[b] + mu.mass * mu.mass), radius[b],
                            radius[b], radius[b]);
      extra += 0.5 * gm.cwiseAbs().transpose() * qmax;
    }
    bool alone = true;
    for (int b = 0; b < k; ++b)
      if (b != a && plan.coupled[a][b]) alone = false;
    RuleShape fine, half;
    fine.radius = half.radius = radius[a];
    for (int ax = 0; ax < 3; ++ax) {
      const double freq = spread(ax + 1) + spread(0) + extra(ax + 1) + extra(0);
      // Round the allowance so that nearby configurations share cached rules.
      const int allowance = 2 * static_cast<int>(std::ceil(0.5 * mu.oscillation * freq * radius[a]));
      fine.nodes[ax] = (mu.nodesPerAxis + allowance) * (alone ? kUncoupledRefine : 1);
      half.nodes[ax] = std::max(2, fine.nodes[ax] / 2);
    }
    plan.fine.push_back(fine);
    plan.half.push_back(half);
  }
  return plan;
}

/// Components of the coupling graph, each ordered with the largest rule last.
std::vector<std::vector<int>> components(const PairingPlan& plan,
                                         const std::vector<PairDataPtr>& data) {
  const int k = static_cast<int>(plan.pairs.size());
  std::vector<int> label(k, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < k; ++s) {
    if (label[s] >= 0) continue;
    std::vector<int> comp{s};
    label[s] = static_cast<int>(out.size());
    for (std::size_t h = 0; h < comp.size(); ++h)
      for (int b = 0; b < k; ++b)
        if (label[b] < 0 && plan.coupled[comp[h]][b]) {
          label[b] = label[s];
          comp.push_back(b);
        }
    std::stable_sort(comp.begin(), comp.end(),
                     [&](int x, int y) { return data[x]->size() < data[y]->size(); });
    out.push_back(comp);
  }
  return out;
}

/// B with exponent term -1/2 q_x^T B q_y for pairs x, y in evaluation order.
Matrix4 bilinear(const PairingPlan& plan, int x, int y) {
  return x < y ? plan.g[x][y] : Matrix4(plan.g[y][x].transpose());
}

PartialValue evalPhaseComponent(const PairingPlan& plan, const std::vector<int>& comp,
                                const std::vector<PairDataPtr>& data) {
  PartialValue out;
  out.abs = 1;
  for (int a : comp) out.abs *= data[a]->sumAbs;
  if (comp.size() == 1) {
    out.all = data[comp[0]]->sum;
    out.interior = data[comp[0]]->sumInterior;
    return out;
  }
  const std::size_t chunks = 64;
  std::vector<PartialValue> parts(chunks);
  if (comp.size() == 2) {
    const PairData& d1 = *data[comp[0]];
    const PairData& d2 = *data[comp[1]];
    const Matrix4 b12 = bilinear(plan, comp[0], comp[1]);
    const std::size_t n1 = d1.size();
    parallelChunks(chunks, [&](std::size_t c) {
      PartialValue p;
      for (std::size_t m = c * n1 / chunks; m < (c + 1) * n1 / chunks; ++m) {
        const FourVector cv = -0.5 * b12.transpose() * d1.q(m);
        const double cc[4] = {cv(0), cv(1), cv(2), cv(3)};
        const InnerSum s = innerSum(d2, cc);
        p.all += d1.v[m] * s.all;
        p.interior += d1.v[m] * d1.interior[m] * s.interior;
      }
      parts[c] = p;
    });
  } else if (comp.size() == 3) {
    const PairData& d1 = *data[comp[0]];
    const PairData& d2 = *data[comp[1]];
    const PairData& d3 = *data[comp[2]];
    const Matrix4 b12 = bilinear(plan, comp[0], comp[1]);
    const Matrix4 b13 = bilinear(plan, comp[0], comp[2]);
    const Matrix4 b23 = bilinear(plan, comp[1], comp[2]);
    const std::size_t n1 = d1.size();
    parallelChunks(chunks, [&](std::size_t c) {
      PartialValue p;
      for (std::size_t m1 = c * n1 / chunks; m1 < (c + 1) * n1 / chunks; ++m1) {
        const FourVector q1 = d1.q(m1);
        const FourVector c2 = -0.5 * b12.transpose() * q1;
        const FourVector c3a = -0.5 * b13.transpose() * q1;
        for (std::size_t m2 = 0; m2 < d2.size(); ++m2) {
          const FourVector q2 = d2.q(m2);
          const FourVector cv = c3a - 0.5 * b23.transpose() * q2;
          const double cc[4] = {cv(0), cv(1), cv(2), cv(3)};
          const InnerSum s = innerSum(d3, cc);
          const Complex w = d1.v[m1] * d2.v[m2] * std::polar(1.0, c2.dot(q2));
          p.all += w * s.all;
          p.interior += w * d1.interior[m1] * d2.interior[m2] * s.interior;
        }
      }
      parts[c] = p;
    });
  } else {
    throw DegreeTooLarge("at most three coupled contractions");
  }
  for (const auto& p : parts) {
    out.all += p.all;
    out.interior += p.interior;
  }
  return out;
}

/// Nested evaluation with the full twist product at every node tuple.
PartialValue evalGeneric(const PairingPlan& plan, const std::vector<PairDataPtr>& data) {
  const TwistedTensor& t = *plan.term;
  const int k = static_cast<int>(plan.pairs.size());
  PartialValue out;
  out.abs = 1;
  for (const auto& d : data) out.abs *= d->sumAbs;
  std::vector<std::size_t> idx(k, 0);
  std::vector<FourVector> legs(t.degree());
  while (true) {
    Complex w = 1.0;
    double inside = 1;
    for (int a = 0; a < k; ++a) {
      const FourVector q = data[a]->q(idx[a]);
      legs[plan.pairs[a].first] = q;
      legs[plan.pairs[a].second] = -q;
      w *= data[a]->v[idx[a]];
      inside *= data[a]->interior[idx[a]];
    }
    w *= twistFactor(t, legs);
    out.all += w;
    out.interior += w * inside;
    int a = k - 1;
    while (a >= 0 && ++idx[a] == data[a]->size()) idx[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

PartialValue evalPairing(const PairingPlan& plan, const MassShellMeasure& mu, Variant var) {
  const int k = static_cast<int>(plan.pairs.size());
  std::vector<PairDataPtr> data(k);
  for (int a = 0; a < k; ++a) data[a] = pairData(plan, a, mu, var);
  if (!plan.term->isPhase()) return evalGeneric(plan, data);
  PartialValue out;
  out.all = out.interior = 1.0;
  out.abs = 1;
  for (const auto& comp : components(plan, data)) {
    const PartialValue c = evalPhaseComponent(plan, comp, data);
    out.all *= c.all;
    out.interior *= c.interior;
    out.abs *= c.abs;
  }
  return out;
}

}  // namespace

ShellLattice ShellLattice::gaussLegendreGrid(int n, double cutoff) {
  const GaussLegendreRule r = gaussLegendre(n, -cutoff, cutoff);
  ShellLattice lat;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        lat.momenta.emplace_back(r.nodes[i], r.nodes[j], r.nodes[k]);
        lat.weights.push_back(r.weights[i] * r.weights[j] * r.weights[k]);
      }
  return lat;
}

MassShellMeasure MassShellMeasure::certified(double mass, double cutoff, int nodesPerAxis) {
  if (!(mass > 0) || !(cutoff > 0) || nodesPerAxis < 2)
    throw ConfigError("measure needs mass > 0, cutoff > 0, nodes >= 2");
  MassShellMeasure mu;
  mu.mass = mass;
  mu.cutoff = cutoff;
  mu.nodesPerAxis = nodesPerAxis;
  MassShellMeasure doubled = mu;
  doubled.nodesPerAxis = 2 * nodesPerAxis;
  const TestFunction f = GaussianPacket::axisAligned(1.0, FourVector::Zero(), FourVector::Ones(),
                                                     FourVector::Zero());
  const TestFunction g = GaussianPacket::axisAligned(1.0, FourVector(0, 0.5, 0, 0),
                                                     FourVector::Ones(), FourVector::Zero());
  const Complex a = twoPoint(f, g, mu), b = twoPoint(f, g, doubled);
  if (!(std::abs(a - b) <= 1e-8 * std::abs(b)))
    throw QuadratureFailure("measure fails the node-doubling certification");
  return mu;
}

MassShellMeasure MassShellMeasure::onLattice(double mass, ShellLattice lattice) {
  MassShellMeasure mu;
  mu.mass = mass;
  mu.lattice = std::move(lattice);
  return mu;
}

double shellEnergy(double mass, const Eigen::Vector3d& q) { return std::sqrt(q.squaredNorm() + mass * mass); }

FourVector onShell(double mass, const Eigen::Vector3d& q) {
  return {shellEnergy(mass, q), q(0), q(1), q(2)};
}

std::vector<Pairing> wickPairings(int n) {
  std::vector<Pairing> out;
  if (n < 0 || n % 2 == 1) return out;
  std::function<void(std::vector<int>, Pairing)> rec = [&](std::vector<int> rest, Pairing cur) {
    if (rest.empty()) {
      out.push_back(cur);
      return;
    }
    const int i = rest.front();
    for (std::size_t k = 1; k < rest.size(); ++k) {
      std::vector<int> next;
      for (std::size_t m = 1; m < rest.size(); ++m)
        if (m != k) next.push_back(rest[m]);
      Pairing p = cur;
      p.emplace_back(i, rest[k]);
      rec(next, p);
    }
  };
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  rec(all, {});
  return out;
}

Estimated vacuumFunctional(const TensorPoly& f, const MassShellMeasure& mu) {
  Complex fine = 0, half = 0, tail = 0;
  double abs = 0;
  for (const auto& term : f.terms) {
    if (term.degree() > 6) throw DegreeTooLarge("vacuumFunctional supports degree <= 6");
    const Complex c = term.coefficient();
    if (term.degree() == 0) {
      fine += c;
      half += c;
      abs += std::abs(c);
      continue;
    }
    for (const auto& pairing : wickPairings(term.degree())) {
      const PairingPlan plan = makePlan(term, pairing, mu);
      const PartialValue vf = evalPairing(plan, mu, Variant::Fine);
      const PartialValue vh = mu.lattice ? vf : evalPairing(plan, mu, Variant::Half);
      fine += c * vf.all;
      half += c * vh.all;
      tail += c * (vf.all - vf.interior);
      abs += std::abs(c) * vf.abs;
    }
  }
  Estimated out;
  out.value = fine;
  out.estimate = std::abs(fine - half) + 1e-14 * abs;
  if (!mu.lattice) out.estimate += std::abs(tail);
  if (!std::isfinite(out.estimate) || !std::isfinite(std::abs(fine)))
    throw QuadratureFailure("non-finite shell quadrature");
  return out;
}

Estimated twoPointEstimated(const TestFunction& f, const TestFunction& g, const MassShellMeasure& mu) {
  return vacuumFunctional(TensorPoly(plainJoin(tensorOf(f), tensorOf(g))), mu);
}

Complex twoPoint(const TestFunction& f, const TestFunction& g, const MassShellMeasure& mu) {
  return twoPointEstimated(f, g, mu).value;
}

Estimated innerProductTheta(const TensorPoly& f, const TensorPoly& g, const NoncommMatrix& theta,
                            const MassShellMeasure& mu) {
  return vacuumFunctional(uThetaMultiplier(plainJoin(starInvolutionTensor(f), g), theta), mu);
}

void clearShellCache() { ShellCache::instance().clear(); }

}  // namespace wedgefield
