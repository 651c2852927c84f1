#include "wedgefield/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SVD>

namespace wedgefield {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

FourVector uniformVector(Rng& rng, double lo, double hi) {
  FourVector v;
  for (int mu = 0; mu < 4; ++mu) v(mu) = uniform(rng, lo, hi);
  return v;
}

TestFunction randomGaussian(Rng& rng) {
  const Complex amp(uniform(rng, -1, 1), uniform(rng, -1, 1));
  const FourVector center = uniformVector(rng, -1, 1);
  const FourVector widths = uniformVector(rng, 0.5, 1.5);
  const FourVector k = uniformVector(rng, -1, 1);
  return GaussianPacket::axisAligned(amp, center, widths, k);
}

NoncommMatrix randomOrbitTheta(Rng& rng) {
  const OrbitParams k{uniform(rng, 0.2, 1.0), uniform(rng, 0.2, 1.0)};
  return conjugateTheta(randomLorentz(rng, 3, 1.0), referenceTheta(k));
}

double relative(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

double operatorNorm(const Matrix4& m) {
  return Eigen::JacobiSVD<Matrix4>(m).singularValues()(0);
}

struct Max {
  double value = 0;
  void operator()(double v) { value = std::max(value, v); }
};

FourVector vectorAt(const Json& cfg, const char* key) { return fourVectorFromJson(cfg.at(key)); }

ThetaSpec thetaAt(const Json& cfg) { return thetaSpecFromJson(cfg.at("theta")); }

MassShellMeasure measureAt(const Json& cfg) { return measureFromJson(cfg.at("measure")); }

TensorPoly tensorAt(const Json& cfg) {
  return cfg.at("tensor").is_null() ? TensorPoly(referenceGaussianTensor()) : tensorPolyFromJson(cfg.at("tensor"));
}

UndeformedS parseS0(const std::string& spec) {
  UndeformedS s;
  if (spec == "unit") return s;
  const std::string prefix = "phase:";
  if (spec.rfind(prefix, 0) != 0) throw ConfigError("s0 is 'unit' or 'phase:c,s0'");
  std::istringstream in(spec.substr(prefix.size()));
  char comma = 0;
  if (!(in >> s.c >> comma >> s.s0) || comma != ',') throw ConfigError("s0 is 'unit' or 'phase:c,s0'");
  s.unit = false;
  return s;
}

// ---------------------------------------------------------------- orbit

Json runOrbit(const Json& cfg) {
  const OrbitParams params{cfg.at("kappaE").get<double>(), cfg.at("kappaM").get<double>()};
  const NoncommMatrix theta1 = referenceTheta(params);
  const OrbitInvariants inv = orbitInvariants(theta1);
  Json res;
  res["theta"] = toJson(theta1);
  res["invariants"] = {inv.quadratic, inv.pseudoscalar};
  res["expected"] = {2 * (params.kappaE * params.kappaE - params.kappaM * params.kappaM),
                     -8 * params.kappaE * params.kappaM};
  if (params.kappaE != 0 && params.kappaM != 0) {
    const LorentzTransform l = lambdaTheta(theta1, params);
    const Wedge w = wedgeOfTheta(theta1, params);
    res["sectionResidual"] = sectionResidual(l, theta1, params);
    res["wedge"] = {{"ell1", toJson(w.ell1())}, {"ell2", toJson(w.ell2())}};
  } else {
    res["wedge"] = nullptr;
  }
  if (!cfg.at("check").get<bool>()) return res;

  Rng rng(cfg.at("seed").get<std::uint64_t>());
  Json checks;
  {
    const int n = cfg.at("samples").get<int>();
    Max worst;
    for (int i = 0; i < n; ++i) {
      const OrbitParams k{uniform(rng, -2, 2), uniform(rng, -2, 2)};
      const NoncommMatrix th = conjugateTheta(randomLorentz(rng, 3, 2.0), referenceTheta(k));
      const OrbitInvariants v = orbitInvariants(th);
      worst(std::abs(v.quadratic - 2 * (k.kappaE * k.kappaE - k.kappaM * k.kappaM)));
      worst(std::abs(v.pseudoscalar + 8 * k.kappaE * k.kappaM));
    }
    checks["invariance"] = {{"samples", n}, {"maxResidual", worst.value}};
  }
  {
    const int n = cfg.at("sectionSamples").get<int>();
    Max worst;
    std::bernoulli_distribution sign(0.5);
    for (int i = 0; i < n; ++i) {
      const double e = uniform(rng, 0.2, 2) * (sign(rng) ? 1 : -1);
      const double m = uniform(rng, 0.2, 2) * (sign(rng) ? 1 : -1);
      const OrbitParams k{e, m};
      const NoncommMatrix th = conjugateTheta(randomLorentz(rng, 3, 2.0), referenceTheta(k));
      worst(sectionResidual(lambdaTheta(th, k), th, k));
    }
    checks["section"] = {{"samples", n}, {"maxResidual", worst.value}};
  }
  {
    const int n = cfg.at("w4Samples").get<int>();
    const Wedge w1 = standardWedge();
    double minSlack = INFINITY;
    for (int i = 0; i < n; ++i) {
      const OrbitParams k{uniform(rng, 1e-3, 2), uniform(rng, -2, 2)};
      Eigen::Vector3d s;
      do {
        s = Eigen::Vector3d(uniform(rng, -10, 10), uniform(rng, -10, 10), uniform(rng, -10, 10));
      } while (s.norm() >= 10);
      const FourVector p(uniform(rng, s.norm(), 10), s(0), s(1), s(2));
      const FourVector x = thetaAction(referenceTheta(k), p);
      minSlack = std::min(minSlack, w1.depth(-x));
    }
    checks["w4"] = {{"samples", n}, {"minSlack", minSlack}};
  }
  {
    // Distinct wedges: each holds a sampled point outside the other.
    const int pairs = 50;
    int separated = 0;
    for (int i = 0; i < pairs; ++i) {
      const Wedge a = transformWedge(randomLorentz(rng, 3, 1.0), standardWedge());
      const Wedge b = transformWedge(randomLorentz(rng, 3, 1.0), standardWedge());
      bool aOnly = false, bOnly = false;
      for (int t = 0; t < 4000 && !(aOnly && bOnly); ++t) {
        const FourVector x = uniformVector(rng, -5, 5);
        aOnly = aOnly || (a.contains(x) && !b.contains(x));
        bOnly = bOnly || (b.contains(x) && !a.contains(x));
      }
      if (wedgeEquals(a, b, 1e-9) || (aOnly && bOnly)) ++separated;
    }
    checks["w1"] = {{"pairs", pairs}, {"separated", separated}};
  }
  {
    // Points of W and -W are spacelike separated.
    int violations = 0, tested = 0;
    for (int i = 0; i < 20; ++i) {
      const Wedge w = transformWedge(randomLorentz(rng, 3, 1.0), standardWedge());
      for (int t = 0; t < 500; ++t) {
        const FourVector x = uniformVector(rng, -5, 5), y = uniformVector(rng, -5, 5);
        if (!w.contains(x) || !oppositeWedge(w).contains(y)) continue;
        ++tested;
        const FourVector d = x - y;
        if (minkowskiProduct(d, d) >= 0) ++violations;
      }
    }
    checks["w2"] = {{"pairsTested", tested}, {"violations", violations}};
  }
  {
    int mismatches = 0;
    const int n = 20;
    for (int i = 0; i < n; ++i) {
      const OrbitParams k{uniform(rng, 0.2, 2), uniform(rng, 0.2, 2)};
      const NoncommMatrix th = conjugateTheta(randomLorentz(rng, 3, 1.0), referenceTheta(k));
      if (!wedgeEquals(wedgeOfTheta(-th, k), oppositeWedge(wedgeOfTheta(th, k)), 1e-8)) ++mismatches;
    }
    checks["w3"] = {{"samples", n}, {"mismatches", mismatches}};
  }
  if (params.kappaE != 0 && params.kappaM != 0) {
    Max worst;
    bool wedgeFixed = true;
    for (int i = 0; i < 10; ++i) {
      const LorentzTransform s = boost(uniform(rng, -2, 2), 1) * rotation(uniform(rng, -3, 3), 2, 3);
      const NoncommMatrix moved = conjugateTheta(s, theta1);
      for (int j = 0; j < 6; ++j) worst(std::abs(moved.upper()[j] - theta1.upper()[j]));
      wedgeFixed = wedgeFixed && wedgeEquals(transformWedge(s, wedgeOfTheta(theta1, params)),
                                             wedgeOfTheta(theta1, params), 1e-9);
    }
    checks["stabilizer"] = {{"maxThetaResidual", worst.value}, {"wedgeFixed", wedgeFixed}};
  }
  res["checks"] = checks;
  return res;
}

// ---------------------------------------------------------------- identities

Json runIdentities(const Json& cfg) {
  Rng rng(cfg.at("seed").get<std::uint64_t>());
  const int samples = cfg.at("samples").get<int>();
  const int pairs = cfg.at("pairs").get<int>();
  Max assoc, exchange, covariance, star, starTwice, jinv, jTwice, uInverse, uPlain, uZero, rho, damped, mixed;
  int structural = 0, contViolations = 0;
  double contWorst = 0;
  for (int pi = 0; pi < pairs; ++pi) {
    const TestFunction f = randomGaussian(rng), g = randomGaussian(rng), h = randomGaussian(rng);
    const NoncommMatrix th = randomOrbitTheta(rng);
    const NoncommMatrix th2 = randomOrbitTheta(rng);
    const TwistedTensor tf = tensorOf(f), tg = tensorOf(g), th_ = tensorOf(h);
    const TwistedTensor left = moyalProduct(moyalProduct(tf, tg, th), th_, th);
    const TwistedTensor right = moyalProduct(tf, moyalProduct(tg, th_, th), th);
    for (int l = 0; l < 3; ++l)
      for (int r = l + 1; r < 3; ++r)
        if (!(left.pairTwist(l, r) == right.pairTwist(l, r))) ++structural;
    const TwistedTensor exA = moyalProduct(tf, moyalProduct(tg, th_, -th), th);
    const TwistedTensor exB = moyalProduct(tg, moyalProduct(tf, th_, th), -th);
    const TwistedTensor fg = moyalProduct(tf, tg, th);
    const LorentzTransform lambda = randomLorentz(rng, 3, 0.5);
    const FourVector y = uniformVector(rng, -1, 1);
    const TwistedTensor moved = poincareAct(fg, y, lambda);
    const TwistedTensor starred = starInvolutionTensor(fg);
    const TwistedTensor starExpected =
        moyalProduct(tensorOf(starInvolution(g)), tensorOf(starInvolution(f)), th);
    const TwistedTensor jed = jInvolutionTensor(fg);
    const TwistedTensor jExpected = moyalProduct(tensorOf(jInvolution(f)), tensorOf(jInvolution(g)), -th);
    const TwistedTensor plain3 = plainJoin(plainJoin(tf, tg), th_);
    const TwistedTensor uRound = uThetaMultiplier(uThetaMultiplier(plain3, -th), th);
    const TwistedTensor uFg = uThetaMultiplier(plainJoin(tf, tg), th);
    const TwistedTensor uNone = uThetaMultiplier(plain3, NoncommMatrix());
    const TwistedTensor rhoStd = rhoProduct(tf, tg, th, TwistFunction::standard());
    const TwistFunction dampedRho = TwistFunction::damped(uniform(rng, 0.01, 1));
    const double dTheta = operatorNorm(th.matrix() - th2.matrix());
    const TwistedTensor fg2 = moyalProduct(tf, tg, th2);

    const int perPair = samples / pairs + (pi < samples % pairs ? 1 : 0);
    for (int s = 0; s < perPair; ++s) {
      const FourVector p1 = uniformVector(rng, -2, 2), p2 = uniformVector(rng, -2, 2),
                       p3 = uniformVector(rng, -2, 2);
      assoc(relative(momentumKernel(left, {p1, p2, p3}), momentumKernel(right, {p1, p2, p3})));
      exchange(relative(momentumKernel(exA, {p2, p1, p3}), momentumKernel(exB, {p1, p2, p3})));
      const Complex shift = std::polar(1.0, -minkowskiProduct(y, FourVector(p1 + p2)));
      const LorentzTransform inv = lambda.inverse();
      covariance(relative(momentumKernel(moved, {p1, p2}),
                          shift * momentumKernel(fg, {FourVector(inv * p1), FourVector(inv * p2)})));
      star(relative(momentumKernel(starred, {p1, p2}), momentumKernel(starExpected, {p1, p2})));
      starTwice(relative(momentumKernel(starInvolutionTensor(starred), {p1, p2}), momentumKernel(fg, {p1, p2})));
      jinv(relative(momentumKernel(jed, {p1, p2}), momentumKernel(jExpected, {p1, p2})));
      jTwice(relative(momentumKernel(jInvolutionTensor(jed), {p1, p2}), momentumKernel(fg, {p1, p2})));
      uInverse(relative(momentumKernel(uRound, {p1, p2, p3}), momentumKernel(plain3, {p1, p2, p3})));
      uPlain(relative(momentumKernel(uFg, {p1, p2}), momentumKernel(fg, {p1, p2})));
      uZero(relative(momentumKernel(uNone, {p1, p2, p3}), momentumKernel(plain3, {p1, p2, p3})));
      rho(relative(momentumKernel(rhoStd, {p1, p2}), momentumKernel(fg, {p1, p2})));
      const double lam = uniform(rng, -10, 10);
      damped(std::max(std::abs(dampedRho(0) - 1.0), relative(dampedRho(-lam), std::conj(dampedRho(lam)))));
      mixed(mixedAssociativityGap(f, g, h, th, th, {p1, p2, p3}));
      const double bound = 0.5 * p1.norm() * p2.norm() * dTheta * std::abs(fourier(f, p1)) *
                           std::abs(fourier(g, p2));
      const double diff = std::abs(momentumKernel(fg, {p1, p2}) - momentumKernel(fg2, {p1, p2}));
      if (diff > bound) ++contViolations;
      if (bound > 0) contWorst = std::max(contWorst, diff / bound);
    }
  }
  Json res;
  res["residuals"] = {{"associativity", assoc.value},
                      {"exchange", exchange.value},
                      {"covariance", covariance.value},
                      {"starInvolution", star.value},
                      {"starTwice", starTwice.value},
                      {"jInvolution", jinv.value},
                      {"jTwice", jTwice.value},
                      {"uThetaInverse", uInverse.value},
                      {"uThetaPlain", uPlain.value},
                      {"uThetaZero", uZero.value},
                      {"rhoStandard", rho.value},
                      {"rhoDamped", damped.value},
                      {"sameThetaAssociativityGap", mixed.value}};
  double worst = 0;
  for (const auto& [k, v] : res["residuals"].items()) worst = std::max(worst, v.get<double>());
  res["maxResidual"] = worst;
  res["structuralMismatches"] = structural;
  res["continuity"] = {{"samples", samples}, {"violations", contViolations}, {"maxRatio", contWorst}};
  res["residualKind"] = "relative";
  return res;
}

// ---------------------------------------------------------------- npoint

Json runNpoint(const Json& cfg) {
  const ThetaSpec th = thetaAt(cfg);
  const MassShellMeasure mu = measureAt(cfg);
  TensorPoly f = tensorAt(cfg);
  if (cfg.at("uniformTwist").get<bool>()) f = uThetaMultiplier(f, th.theta);
  const Estimated v = vacuumFunctional(f, mu);
  Json res;
  res["value"] = toJson(v);
  res["degree"] = f.maxDegree();

  const Json& pos = cfg.at("positivity");
  const int n = pos.at("samples").get<int>();
  if (n > 0) {
    Rng rng(cfg.at("seed").get<std::uint64_t>());
    MassShellMeasure small = mu;
    small.cutoff = pos.at("cutoff").get<double>();
    small.nodesPerAxis = pos.at("nodes").get<int>();
    const TwistFunction rho = TwistFunction::damped(pos.at("sigma").get<double>());
    Json rows = Json::array();
    for (int i = 0; i < n; ++i) {
      const TwistedTensor t = plainJoin(tensorOf(randomGaussian(rng)), tensorOf(randomGaussian(rng)));
      const Estimated e = vacuumFunctional(TensorPoly(rhoProduct(starInvolutionTensor(t), t, th.theta, rho)), small);
      rows.push_back({{"value", toJson(e.value)},
                      {"estimate", e.estimate},
                      {"nonnegative", e.value.real() >= -10 * e.estimate}});
    }
    res["dampedPositivity"] = {{"sigma", rho.sigma()}, {"rows", rows}};
  }
  return res;
}

// ---------------------------------------------------------------- locality

Json runLocality(const Json& cfg) {
  const LocalityConfig base = localityConfigFromJson(cfg.at("locality"));
  Json res;
  const LocalityReport canonical = wedgeLocalityExperiment(base);
  res["wedge"] = toJson(canonical);
  bool all = canonical.verdict == "pass";
  Json reps = Json::array();
  for (const auto& r : localityReplicas(base, cfg.at("seed").get<std::uint64_t>(), cfg.at("replicas").get<int>())) {
    const LocalityReport rep = wedgeLocalityExperiment(r.config);
    all = all && rep.verdict == "pass";
    reps.push_back({{"lambda", toJson(r.lambda.matrix())},
                    {"translation", toJson(r.translation)},
                    {"halfWidths", {toJson(r.config.f1.halfWidth), toJson(r.config.f2.halfWidth)}},
                    {"report", toJson(rep)}});
  }
  res["replicas"] = reps;
  res["allPass"] = all;
  if (cfg.at("undeformed").get<bool>()) res["undeformed"] = toJson(undeformedLocalityExperiment(base));
  if (cfg.at("support").get<bool>()) {
    const TestFunction g = GaussianPacket::axisAligned(1.0, FourVector::Zero(), FourVector::Constant(2.0),
                                                       FourVector(1, 0.5, 0, 0));
    const SupportReport s = supportCheckExperiment(base.f1, g, base.theta);
    res["support"] = {{"predictedLo", toJson(s.predicted.lo)},
                      {"predictedHi", toJson(s.predicted.hi)},
                      {"peak", s.peak},
                      {"maxOutsideRatio", s.maxOutsideRatio},
                      {"outsideSamples", s.outsideSamples},
                      {"pass", s.pass}};
  }
  return res;
}

// ---------------------------------------------------------------- smatrix

Json runSMatrix(const Json& cfg) {
  SMatrixInput in;
  in.p = vectorAt(cfg, "p");
  in.q = vectorAt(cfg, "q");
  in.pPrime = vectorAt(cfg, "pp");
  in.qPrime = vectorAt(cfg, "qp");
  const ThetaSpec th = thetaAt(cfg);
  in.theta = th.theta;
  in.params = th.params;
  in.mass = cfg.at("mass").get<double>();
  in.undeformed = parseS0(cfg.at("s0").get<std::string>());
  const bool ordering = in.theta.isZero() || (wedgeOrderingCheck(in.p, in.q, in.theta, in.params) &&
                                              wedgeOrderingCheck(in.pPrime, in.qPrime, in.theta, in.params));
  Json res;
  res["ordering"] = ordering;
  const Complex v = deformedSMatrixElement(in);
  const FourVector total = in.p + in.q;
  const Complex s0 = in.undeformed(minkowskiProduct(total, total));
  res["value"] = toJson(v);
  res["undeformed"] = toJson(s0);
  res["phaseShift"] = smatrixPhaseShift(in);
  res["modulusDifference"] = std::abs(v) - std::abs(s0);
  if (!in.theta.isZero()) {
    // A boost along the first axis of the frame selected by Lambda_theta
    // stabilizes theta.
    const LorentzTransform frame = lambdaTheta(in.theta, in.params);
    const LorentzTransform stab = frame * boost(0.4, 1) * frame.inverse();
    const auto [kept, both] = covarianceBreakDemo(in, stab);
    res["stabilizer"] = {{"momentaOnly", toJson(kept)}, {"momentaAndTheta", toJson(both)},
                         {"maxDeviation", std::max(std::abs(kept - v), std::abs(both - v))}};
  }
  return res;
}

// ---------------------------------------------------------------- limit

Json runLimit(const Json& cfg) {
  const ThetaSpec th = thetaAt(cfg);
  const MassShellMeasure mu = measureAt(cfg);
  const TensorPoly f = tensorAt(cfg);
  const Estimated base = vacuumFunctional(f, mu);
  Json rows = Json::array();
  double previous = NAN;
  bool monotone = true, ratiosOk = true;
  for (const auto& sj : cfg.at("scales")) {
    const double s = sj.get<double>();
    const Estimated v = vacuumFunctional(uThetaMultiplier(f, th.theta * s), mu);
    const double delta = std::abs(v.value - base.value);
    Json row = {{"scale", s}, {"value", toJson(v.value)}, {"delta", delta},
                {"estimate", v.estimate + base.estimate}};
    if (!std::isnan(previous)) {
      const double ratio = delta / previous;
      row["ratio"] = ratio;
      monotone = monotone && delta <= previous;
      ratiosOk = ratiosOk && ratio >= 0.3 && ratio <= 0.7;
    } else {
      row["ratio"] = nullptr;
    }
    previous = delta;
    rows.push_back(row);
  }
  Json res;
  res["undeformed"] = toJson(base);
  res["monotone"] = monotone;
  res["ratiosInRange"] = ratiosOk;
  res["rows"] = rows;
  return res;
}

// ---------------------------------------------------------------- oracle

Json runOracle(const Json& cfg) {
  Rng rng(cfg.at("seed").get<std::uint64_t>());
  const ThetaSpec th = thetaAt(cfg);
  const double mass = cfg.at("mass").get<double>();
  const ShellLattice lattice =
      ShellLattice::gaussLegendreGrid(cfg.at("latticeNodes").get<int>(), cfg.at("latticeCutoff").get<double>());
  const MassShellMeasure mu = MassShellMeasure::onLattice(mass, lattice);
  Json rows = Json::array();
  double worst = 0;
  for (int i = 0; i < cfg.at("configs").get<int>(); ++i) {
    std::vector<TestFunction> factors;
    for (int j = 0; j < 4; ++j) factors.push_back(randomGaussian(rng));
    const TwistedTensor plain(factors);
    const Estimated quad = vacuumFunctional(TensorPoly(uThetaMultiplier(plain, th.theta)), mu);
    const Complex fock = fockOracle(TensorPoly(plain), th.theta, lattice, mass);
    const double rel = std::abs(quad.value - fock) / std::abs(fock);
    worst = std::max(worst, rel);
    rows.push_back({{"quadrature", toJson(quad.value)}, {"fock", toJson(fock)}, {"relativeDifference", rel}});
  }
  Json res;
  res["latticeModes"] = lattice.size();
  res["rows"] = rows;
  res["maxRelativeDifference"] = worst;
  return res;
}

Json measureDefaults(double cutoff, int nodes, double pairEps) {
  return toJson(MassShellMeasure{1.0, cutoff, nodes, pairEps, 0.4, std::nullopt});
}

Json thetaDefault() { return toJson(ThetaSpec{{0.5, 0.3}, referenceTheta({0.5, 0.3})}); }

}  // namespace

const std::vector<std::string>& experimentNames() {
  static const std::vector<std::string> names{"orbit", "identities", "npoint", "locality",
                                              "smatrix", "limit", "oracle"};
  return names;
}

Json defaultConfig(const std::string& experiment) {
  Json c = {{"seed", 0}};
  if (experiment == "orbit") {
    c.update({{"kappaE", 1.0}, {"kappaM", 2.0}, {"check", false}, {"samples", 100},
              {"sectionSamples", 50}, {"w4Samples", 10000}});
  } else if (experiment == "identities") {
    c.update({{"samples", 1000}, {"pairs", 20}});
  } else if (experiment == "npoint") {
    c.update({{"theta", thetaDefault()},
              {"tensor", nullptr},
              {"uniformTwist", true},
              {"measure", measureDefaults(6, 12, 1e-8)},
              {"positivity", {{"samples", 3}, {"sigma", 0.1}, {"cutoff", 5.0}, {"nodes", 6}}}});
  } else if (experiment == "locality") {
    c.update({{"locality", nullptr}, {"replicas", 5}, {"undeformed", true}, {"support", true}});
  } else if (experiment == "smatrix") {
    const double e = std::sqrt(2.0);
    c.update({{"p", {e, -1, 0, 0}},
              {"q", {e, 1, 0, 0}},
              {"pp", toJson(onShell(1, {-0.5, 0.3, 0}))},
              {"qp", toJson(onShell(1, {0.8, -0.2, 0.1}))},
              {"theta", thetaDefault()},
              {"s0", "unit"},
              {"mass", 1.0}});
  } else if (experiment == "limit") {
    c.update({{"theta", thetaDefault()},
              {"tensor", nullptr},
              {"scales", {1.0, 0.5, 0.25, 0.125}},
              {"measure", measureDefaults(6, 12, 1e-8)}});
  } else if (experiment == "oracle") {
    c.update({{"theta", thetaDefault()}, {"configs", 5}, {"latticeNodes", 5}, {"latticeCutoff", 3.0}, {"mass", 1.0}});
  } else {
    throw ConfigError("unknown experiment '" + experiment + "'");
  }
  return c;
}

Json resolveConfig(const std::string& experiment, const Json& config) {
  Json out = defaultConfig(experiment);
  if (!config.is_null() && !config.is_object()) throw ConfigError("config must be a JSON object");
  if (config.is_object())
    for (const auto& [key, value] : config.items()) {
      if (!out.contains(key)) throw ConfigError("unknown key '" + key + "' for " + experiment);
      if ((key == "measure" || key == "positivity") && value.is_object()) {
        for (const auto& [k, v] : value.items()) {
          if (key == "positivity" && !out[key].contains(k)) throw ConfigError("unknown positivity key '" + k + "'");
          out[key][k] = v;
        }
      } else {
        out[key] = value;
      }
    }
  if (experiment == "locality" && out["locality"].is_null()) out["locality"] = toJson(canonicalLocalityConfig());
  if (out.contains("tensor") && out["tensor"].is_null()) out["tensor"] = toJson(TensorPoly(referenceGaussianTensor()));
  try {
    // Parse once so that malformed sections fail before any work starts.
    if (out.contains("theta")) thetaSpecFromJson(out["theta"]);
    if (out.contains("measure")) measureFromJson(out["measure"]);
    if (out.contains("tensor")) tensorPolyFromJson(out["tensor"]);
    if (out.contains("locality")) localityConfigFromJson(out["locality"]);
    if (experiment == "smatrix") parseS0(out["s0"].get<std::string>());
    if (!out["seed"].is_number_integer() || out["seed"].get<long long>() < 0)
      throw ConfigError("seed must be a non-negative integer");
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  }
  return out;
}

Json runExperiment(const std::string& experiment, const Json& resolved) {
  Json res;
  try {
    if (experiment == "orbit") res = runOrbit(resolved);
    else if (experiment == "identities") res = runIdentities(resolved);
    else if (experiment == "npoint") res = runNpoint(resolved);
    else if (experiment == "locality") res = runLocality(resolved);
    else if (experiment == "smatrix") res = runSMatrix(resolved);
    else if (experiment == "limit") res = runLimit(resolved);
    else if (experiment == "oracle") res = runOracle(resolved);
    else throw ConfigError("unknown experiment '" + experiment + "'");
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  }
  return {{"experiment", experiment}, {"config", resolved}, {"results", res}};
}

std::vector<LocalityReplica> localityReplicas(const LocalityConfig& base, std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<LocalityReplica> out;
  for (int i = 0; i < count; ++i) {
    LocalityReplica r;
    r.lambda = randomLorentz(rng, 3, 0.5);
    r.translation = uniformVector(rng, -1, 1);
    r.config = transformedLocalityConfig(r.lambda, r.translation, base);
    out.push_back(std::move(r));
  }
  return out;
}

TwistedTensor referenceGaussianTensor() {
  const FourVector ones = FourVector::Ones();
  return TwistedTensor({GaussianPacket::axisAligned(1.0, FourVector(0, 0, 0, 0), ones, FourVector(-1.2, 0.3, 0, 0)),
                        GaussianPacket::axisAligned(1.0, FourVector(0.5, 1, 0, 0), ones, FourVector(1.2, 0.4, -0.2, 0)),
                        GaussianPacket::axisAligned(1.0, FourVector(-0.3, 0, 1, 0), ones, FourVector(-1.1, -0.5, 0.3, 0.2)),
                        GaussianPacket::axisAligned(1.0, FourVector(0.2, 0, 0, 1), ones, FourVector(1.3, 0.2, 0, -0.4))});
}

}  // namespace wedgefield
