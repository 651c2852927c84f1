// Acceptance run: one PASS/FAIL line per criterion.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "wedgefield/experiments.hpp"
#include "wedgefield/quadrature.hpp"

#ifndef WEDGEFIELD_CLI_PATH
#define WEDGEFIELD_CLI_PATH "wedgefield"
#endif

using namespace wedgefield;

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

FourVector uniformVector(Rng& rng, double lo, double hi) {
  return FourVector(uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi));
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* name, double v) {
  std::ostringstream s;
  s << name << '=' << v;
  return s.str();
}

Outcome orbitInvariance() {
  Rng rng(101);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double e = uniform(rng, -2, 2), m = uniform(rng, -2, 2);
    const NoncommMatrix th = conjugateTheta(randomLorentz(rng, 3, 2.0), referenceTheta({e, m}));
    const OrbitInvariants inv = orbitInvariants(th);
    worst = std::max({worst, std::abs(inv.quadratic - 2 * (e * e - m * m)), std::abs(inv.pseudoscalar + 8 * e * m)});
  }
  return {worst < 1e-10, fmt("maxResidual", worst)};
}

Outcome section() {
  Rng rng(102);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const double e = uniform(rng, 0.2, 2) * (i % 2 ? 1 : -1);
    const double m = uniform(rng, 0.2, 2) * (i % 3 ? 1 : -1);
    const NoncommMatrix th = conjugateTheta(randomLorentz(rng, 3, 2.0), referenceTheta({e, m}));
    worst = std::max(worst, sectionResidual(lambdaTheta(th, {e, m}), th, {e, m}));
  }
  return {worst < 1e-8, fmt("maxResidual", worst)};
}

Outcome w4() {
  Rng rng(103);
  const Wedge w = standardWedge();
  double slack = std::numeric_limits<double>::infinity();
  int n = 0;
  while (n < 10000) {
    const FourVector p = uniformVector(rng, -10, 10);
    if (!(p(0) > p.tail<3>().norm())) continue;
    ++n;
    const NoncommMatrix th = referenceTheta({uniform(rng, 1e-3, 2), uniform(rng, -2, 2)});
    // theta_1 p in -closure(W_1) means -theta_1 p has depth >= 0 in W_1.
    const FourVector x = thetaAction(th, p);
    slack = std::min(slack, w.depth(-x));
  }
  return {slack >= -1e-12, fmt("minSlack", slack)};
}

Json identities;

Outcome kernelSuite() {
  identities = runExperiment("identities", resolveConfig("identities", {{"samples", 1000}, {"pairs", 20}, {"seed", 7}}));
  const Json& r = identities["results"];
  const double worst = r["maxResidual"].get<double>();
  const int structural = r["structuralMismatches"].get<int>();
  return {worst < 1e-12 && structural == 0, fmt("maxResidual", worst) + " " + fmt("structuralMismatches", structural)};
}

Outcome continuity() {
  const Json& c = identities["results"]["continuity"];
  const int violations = c["violations"].get<int>();
  return {c["samples"].get<int>() == 1000 && violations == 0,
          fmt("violations", violations) + " " + fmt("maxRatio", c["maxRatio"].get<double>())};
}

Outcome gaussianTransform() {
  Rng rng(106);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const Complex amp(uniform(rng, -1, 1), uniform(rng, -1, 1));
    const FourVector a = uniformVector(rng, -1, 1), w = uniformVector(rng, 0.5, 1.5), k = uniformVector(rng, -1, 1);
    const FourVector p = uniformVector(rng, -2, 2);
    const TestFunction g = GaussianPacket::axisAligned(amp, a, w, k);
    Complex q = amp;
    for (int mu = 0; mu < 4; ++mu) {
      auto f = [&](double x) {
        const double u = (x - a(mu)) / w(mu);
        return std::exp(-0.5 * u * u) * std::polar(1.0, oracle::kEta[mu] * (k(mu) - p(mu)) * x);
      };
      q *= adaptiveIntegrate(f, a(mu) - 14 * w(mu), a(mu) + 14 * w(mu), 1e-12, 1e-300).value / std::sqrt(2 * M_PI);
    }
    worst = std::max(worst, std::abs(fourier(g, p) - q) / std::abs(q));
  }
  return {worst < 1e-10, fmt("maxRelativeError", worst)};
}

Outcome commutatorConventions() {
  Rng rng(107);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const NoncommMatrix th = conjugateTheta(randomLorentz(rng, 3, 1.0), referenceTheta({0.5, 0.3}));
    const FourVector p1 = onShell(1, {uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)});
    const FourVector p2 = onShell(1, {uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)});
    const FourVector x = uniformVector(rng, -3, 3), y = uniformVector(rng, -3, 3);
    // -2i (e^{i(p1 x + p2 y)} - e^{i(p2 x + p1 y)}) sin(p1 theta p2 / 2), written out here.
    const double s = std::sin(0.5 * oracle::bilinear(th.upper(), p1, p2));
    const Complex closed = Complex(0, -2) *
                           (std::polar(1.0, minkowskiProduct(p1, x) + minkowskiProduct(p2, y)) -
                            std::polar(1.0, minkowskiProduct(p2, x) + minkowskiProduct(p1, y))) * s;
    worst = std::max(worst, std::abs(twoParticleCommutatorKernel(th, th, x, y, p1, p2) - closed));
  }
  return {worst < 1e-12, fmt("maxResidual", worst)};
}

Outcome oracleEquivalence() {
  const Json r = runExperiment("oracle", resolveConfig("oracle", Json::object()))["results"];
  const double worst = r["maxRelativeDifference"].get<double>();
  return {r["rows"].size() == 5 && r["latticeModes"] == 125 && worst < 1e-3, fmt("maxRelativeDifference", worst)};
}

Outcome wedgeLocality() {
  const Json r = runExperiment("locality", resolveConfig("locality", {{"undeformed", false}, {"support", false}}))["results"];
  std::ostringstream s;
  const auto line = [&](const Json& rep) {
    s << rep["verdict"].get<std::string>() << '(' << rep["magnitude"].get<double>() << '/'
      << rep["quadratureEstimate"].get<double>() << '/' << rep["controlMagnitude"].get<double>() << ") ";
  };
  s << "canonical ";
  line(r["wedge"]);
  s << "replicas ";
  for (const auto& rep : r["replicas"]) line(rep["report"]);
  return {r["allPass"].get<bool>() && r["replicas"].size() == 5, s.str()};
}

Outcome undeformedLocality() {
  const LocalityReport r = undeformedLocalityExperiment(canonicalLocalityConfig());
  return {r.verdict == "pass" && r.magnitude <= 10 * r.quadratureEstimate,
          fmt("magnitude", r.magnitude) + " " + fmt("estimate", r.quadratureEstimate)};
}

Outcome commutativeLimit() {
  const Json r = runExperiment("limit", resolveConfig("limit", Json::object()))["results"];
  std::ostringstream s;
  bool ok = r["rows"].size() == 4;
  double previous = -1;
  for (const auto& row : r["rows"]) {
    const double d = row["delta"].get<double>();
    s << "delta=" << d << ' ';
    if (previous >= 0) {
      const double ratio = d / previous;
      ok = ok && d <= previous && ratio >= 0.3 && ratio <= 0.7;
      s << "ratio=" << ratio << ' ';
    }
    previous = d;
  }
  return {ok, s.str()};
}

Outcome smatrix() {
  SMatrixInput in;
  const double e = std::sqrt(2.0);
  in.p = FourVector(e, -1, 0, 0);
  in.q = FourVector(e, 1, 0, 0);
  in.pPrime = onShell(1, {-0.5, 0.3, 0});
  in.qPrime = onShell(1, {0.8, -0.2, 0.1});
  in.params = {0.5, 0.3};
  in.theta = referenceTheta(in.params);
  in.undeformed = UndeformedS{false, 0.8, 1.5};
  const Complex v = deformedSMatrixElement(in);
  const FourVector total = in.p + in.q;
  const Complex s0 = in.undeformed(minkowskiProduct(total, total));
  const double modulus = std::abs(std::abs(v) - std::abs(s0));
  const double phase = -0.5 * (oracle::bilinear(in.theta.upper(), in.p, in.q) +
                               oracle::bilinear(in.theta.upper(), in.pPrime, in.qPrime));
  const double phaseErr = std::max(std::abs(smatrixPhaseShift(in) - phase), std::abs(v - s0 * std::polar(1.0, phase)));
  double stab = 0;
  for (double r : {-1.0, 0.3, 0.9})
    for (double a : {0.0, 0.7}) {
      const auto [kept, both] = covarianceBreakDemo(in, boost(r, 1) * rotation(a, 2, 3));
      stab = std::max({stab, std::abs(kept - v), std::abs(both - v)});
    }
  bool raised = false;
  SMatrixInput bad = in;
  std::swap(bad.p, bad.q);
  try {
    deformedSMatrixElement(bad);
  } catch (const WedgeOrderViolation&) {
    raised = true;
  }
  const bool ok = modulus <= 4 * std::numeric_limits<double>::epsilon() && phaseErr < 1e-12 && stab < 1e-12 && raised;
  return {ok, fmt("modulusGap", modulus) + " " + fmt("phaseError", phaseErr) + " " + fmt("stabilizerDeviation", stab) +
                  " orderViolationRaised=" + (raised ? "yes" : "no")};
}

Outcome isometry() {
  Rng rng(113);
  MassShellMeasure mu;
  mu.cutoff = 6;
  mu.nodesPerAxis = 12;
  mu.pairEps = 1e-8;
  mu.oscillation = 0.4;
  auto gaussian = [&] {
    return TestFunction(GaussianPacket::axisAligned(Complex(uniform(rng, -1, 1), uniform(rng, -1, 1)),
                                                    uniformVector(rng, -1, 1), uniformVector(rng, 0.7, 1.3),
                                                    uniformVector(rng, -1.5, 1.5)));
  };
  auto tensor = [&](int degree) {
    TwistedTensor t = tensorOf(gaussian());
    for (int d = 1; d < degree; ++d) t = plainJoin(t, tensorOf(gaussian()));
    return t;
  };
  double worstRatio = 0;
  bool ok = true;
  for (int i = 0; i < 10; ++i) {
    const NoncommMatrix th = conjugateTheta(randomLorentz(rng, 3, 0.5), referenceTheta({0.5, 0.3}));
    const TensorPoly f = tensor(2), g = tensor(2);
    const Estimated a = innerProductTheta(uThetaMultiplier(f, th), uThetaMultiplier(g, th), NoncommMatrix(), mu);
    const Estimated b = innerProductTheta(f, g, th, mu);
    const double gap = std::abs(a.value - b.value), bound = 10 * (a.estimate + b.estimate);
    ok = ok && gap < bound;
    if (bound > 0) worstRatio = std::max(worstRatio, gap / bound);
  }
  return {ok, fmt("maxGapOverBound", worstRatio)};
}

Outcome reproducibility() {
  auto run = [] {
    const std::string cmd = std::string("\"") + WEDGEFIELD_CLI_PATH + "\" identities --seed 7";
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return std::pair<std::string, int>{"", -1};
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    return std::pair<std::string, int>{out, pclose(pipe)};
  };
  const auto [a, ca] = run();
  const auto [b, cb] = run();
  return {ca == 0 && cb == 0 && !a.empty() && a == b, fmt("bytes", static_cast<double>(a.size()))};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, orbitInvariance},     {2, section},          {3, w4},
      {4, kernelSuite},         {5, continuity},       {6, gaussianTransform},
      {7, commutatorConventions}, {8, oracleEquivalence}, {9, wedgeLocality},
      {10, undeformedLocality}, {11, commutativeLimit}, {12, smatrix},
      {13, isometry},           {14, reproducibility}};
  int failed = 0;
  const char* only = std::getenv("ACCEPTANCE_ONLY");
  for (const auto& [id, run] : criteria) {
    if (only && std::to_string(id) != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  [" << o.detail << "] ("
              << secs << " s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
