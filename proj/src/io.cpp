#include "wedgefield/io.hpp"

#include <string>

namespace wedgefield {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ConfigError(std::string(what) + " must be an integer");
  return j.get<int>();
}

Json twistJson(const TwistFunction& rho) {
  if (rho.isStandard()) return {{"kind", "standard"}};
  return {{"kind", "damped"}, {"sigma", rho.sigma()}};
}

TwistFunction twistFromJson(const Json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "standard") return TwistFunction::standard();
  if (kind == "damped") return TwistFunction::damped(number(require(j, "sigma"), "sigma"));
  throw ConfigError("unknown twist kind '" + kind + "'");
}

}  // namespace

Json toJson(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json toJson(const FourVector& v) { return Json::array({v(0), v(1), v(2), v(3)}); }

Json toJson(const Matrix4& m) {
  Json out = Json::array();
  for (int i = 0; i < 4; ++i) out.push_back(toJson(FourVector(m.row(i).transpose())));
  return out;
}

Json toJson(const NoncommMatrix& theta) { return Json(theta.upper()); }

Json toJson(const ThetaSpec& spec) {
  return {{"kappaE", spec.params.kappaE}, {"kappaM", spec.params.kappaM}, {"upper", toJson(spec.theta)}};
}

Json toJson(const Packet& p) {
  if (const auto* g = std::get_if<GaussianPacket>(&p))
    return {{"type", "gaussian"},
            {"amplitude", toJson(g->amplitude())},
            {"center", toJson(g->center())},
            {"precision", toJson(g->precision())},
            {"wavevector", toJson(g->wavevector())}};
  const auto& b = std::get<BumpPacket>(p);
  return {{"type", "bump"},
          {"amplitude", toJson(b.amplitude)},
          {"center", toJson(b.center)},
          {"halfwidth", toJson(b.halfWidth)},
          {"wavevector", toJson(b.wavevector)}};
}

Json toJson(const TestFunction& f) {
  Json out = Json::array();
  for (const auto& p : f.packets()) out.push_back(toJson(p));
  return out;
}

Json toJson(const TwistedTensor& t) {
  Json factors = Json::array();
  for (const auto& f : t.factors()) factors.push_back(toJson(f));
  Json pairs = Json::array();
  for (int l = 0; l < t.degree(); ++l)
    for (int r = l + 1; r < t.degree(); ++r)
      if (!t.pairTwist(l, r).isZero() || !t.pairRho(l, r).isStandard())
        pairs.push_back({{"l", l},
                         {"r", r},
                         {"theta", toJson(t.pairTwist(l, r))},
                         {"twist", twistJson(t.pairRho(l, r))}});
  return {{"coefficient", toJson(t.coefficient())}, {"factors", factors}, {"pairs", pairs}};
}

Json toJson(const TensorPoly& p) {
  Json out = Json::array();
  for (const auto& t : p.terms) out.push_back(toJson(t));
  return out;
}

Json toJson(const MassShellMeasure& mu) {
  Json out = {{"mass", mu.mass},
              {"cutoff", mu.cutoff},
              {"nodes", mu.nodesPerAxis},
              {"pairEps", mu.pairEps},
              {"oscillation", mu.oscillation}};
  if (mu.lattice) out["latticeModes"] = mu.lattice->size();
  return out;
}

Json toJson(const LocalityConfig& c) {
  Json spectators = Json::array();
  for (const auto& s : c.spectators)
    spectators.push_back({{"label", s.label}, {"g", toJson(s.g)}, {"h", toJson(s.h)}});
  return {{"theta", toJson(ThetaSpec{c.params, c.theta})},
          {"translation", toJson(c.translation)},
          {"f1", toJson(Packet(c.f1))},
          {"f2", toJson(Packet(c.f2))},
          {"spectators", spectators},
          {"measure", toJson(c.measure)}};
}

Json toJson(const Estimated& e) { return {{"value", toJson(e.value)}, {"estimate", e.estimate}}; }

Json toJson(const LocalityReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"label", row.label}, {"wedge", toJson(row.wedge)}, {"control", toJson(row.control)}});
  return {{"magnitude", r.magnitude},
          {"quadratureEstimate", r.quadratureEstimate},
          {"controlMagnitude", r.controlMagnitude},
          {"verdict", r.verdict},
          {"spectators", rows}};
}

Complex complexFromJson(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError("complex numbers are [re, im] pairs");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

FourVector fourVectorFromJson(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw ConfigError("four-vectors need 4 components");
  return {number(j[0], "component"), number(j[1], "component"), number(j[2], "component"),
          number(j[3], "component")};
}

Matrix4 matrixFromJson(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw ConfigError("matrices need 4 rows");
  Matrix4 m;
  for (int i = 0; i < 4; ++i) m.row(i) = fourVectorFromJson(j[i]).transpose();
  return m;
}

LorentzTransform lorentzFromJson(const Json& j) {
  try {
    if (j.contains("matrix")) return LorentzTransform(matrixFromJson(j.at("matrix")));
    LorentzTransform out;
    for (const auto& f : require(j, "factors")) {
      if (f.contains("boost")) {
        out = out * boost(number(require(f, "rapidity"), "rapidity"), integer(f.at("boost"), "boost axis"));
      } else if (f.contains("rotation")) {
        const Json& plane = f.at("rotation");
        if (!plane.is_array() || plane.size() != 2) throw ConfigError("rotation plane is [i, j]");
        out = out * rotation(number(require(f, "angle"), "angle"), integer(plane[0], "axis"),
                             integer(plane[1], "axis"));
      } else {
        throw ConfigError("Lorentz factors are boosts or rotations");
      }
    }
    return out;
  } catch (const InvalidTransform& e) {
    throw ConfigError(e.what());
  }
}

ThetaSpec thetaSpecFromJson(const Json& j) {
  ThetaSpec spec;
  spec.params = {number(require(j, "kappaE"), "kappaE"), number(require(j, "kappaM"), "kappaM")};
  if (j.contains("upper")) {
    const Json& u = j.at("upper");
    if (!u.is_array() || u.size() != 6) throw ConfigError("upper needs 6 entries");
    NoncommMatrix::Upper up;
    for (int i = 0; i < 6; ++i) up[i] = number(u[i], "upper entry");
    spec.theta = NoncommMatrix(up);
  } else if (j.contains("lorentz")) {
    spec.theta = conjugateTheta(lorentzFromJson(j.at("lorentz")), referenceTheta(spec.params));
  } else {
    spec.theta = referenceTheta(spec.params);
  }
  return spec;
}

Packet packetFromJson(const Json& j) {
  const std::string type = require(j, "type").get<std::string>();
  const Complex amp = j.contains("amplitude") ? complexFromJson(j.at("amplitude")) : Complex(1);
  const FourVector center = j.contains("center") ? fourVectorFromJson(j.at("center")) : FourVector::Zero();
  const FourVector k = j.contains("wavevector") ? fourVectorFromJson(j.at("wavevector")) : FourVector::Zero();
  if (type == "gaussian") {
    try {
      if (j.contains("precision")) return GaussianPacket(amp, center, matrixFromJson(j.at("precision")), k);
      const FourVector w = j.contains("widths") ? fourVectorFromJson(j.at("widths")) : FourVector::Ones();
      return GaussianPacket::axisAligned(amp, center, w, k);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (type == "bump") {
    BumpPacket b;
    b.amplitude = amp;
    b.center = center;
    b.wavevector = k;
    if (j.contains("halfwidth")) b.halfWidth = fourVectorFromJson(j.at("halfwidth"));
    if ((b.halfWidth.array() <= 0).any()) throw ConfigError("bump half-widths must be positive");
    return b;
  }
  throw ConfigError("unknown packet type '" + type + "'");
}

TestFunction testFunctionFromJson(const Json& j) {
  if (j.is_object()) return TestFunction(std::vector<Packet>{packetFromJson(j)});
  if (!j.is_array()) throw ConfigError("test functions are packet lists");
  std::vector<Packet> packets;
  for (const auto& p : j) packets.push_back(packetFromJson(p));
  return TestFunction(std::move(packets));
}

BumpPacket bumpFromJson(const Json& j) {
  const TestFunction f = testFunctionFromJson(j);
  if (f.packets().size() != 1 || !std::holds_alternative<BumpPacket>(f.packets()[0]))
    throw ConfigError("expected a single bump packet");
  return std::get<BumpPacket>(f.packets()[0]);
}

TwistedTensor tensorFromJson(const Json& j) {
  if (!j.is_object()) throw ConfigError("tensors are objects");
  std::vector<TestFunction> factors;
  if (j.contains("factors"))
    for (const auto& f : j.at("factors")) factors.push_back(testFunctionFromJson(f));
  const Complex c = j.contains("coefficient") ? complexFromJson(j.at("coefficient")) : Complex(1);
  TwistedTensor t = factors.empty() ? TwistedTensor(c) : TwistedTensor(std::move(factors), c);
  if (j.contains("pairs"))
    for (const auto& p : j.at("pairs")) {
      const int l = integer(require(p, "l"), "l"), r = integer(require(p, "r"), "r");
      if (l < 0 || r <= l || r >= t.degree()) throw ConfigError("pair indices out of range");
      const ThetaSpec th = thetaSpecFromJson({{"kappaE", 0}, {"kappaM", 0}, {"upper", require(p, "theta")}});
      t.setPair(l, r, th.theta, p.contains("twist") ? twistFromJson(p.at("twist")) : TwistFunction::standard());
    }
  return t;
}

TensorPoly tensorPolyFromJson(const Json& j) {
  if (j.is_object()) return TensorPoly(tensorFromJson(j));
  if (!j.is_array()) throw ConfigError("tensor polynomials are tensor lists");
  TensorPoly out;
  for (const auto& t : j) out.terms.push_back(tensorFromJson(t));
  return out;
}

MassShellMeasure measureFromJson(const Json& j, MassShellMeasure base) {
  if (!j.is_object()) throw ConfigError("measure must be an object");
  if (j.contains("mass")) base.mass = number(j.at("mass"), "mass");
  if (j.contains("cutoff")) base.cutoff = number(j.at("cutoff"), "cutoff");
  if (j.contains("nodes")) base.nodesPerAxis = integer(j.at("nodes"), "nodes");
  if (j.contains("pairEps")) base.pairEps = number(j.at("pairEps"), "pairEps");
  if (j.contains("oscillation")) base.oscillation = number(j.at("oscillation"), "oscillation");
  if (base.mass <= 0 || base.cutoff <= 0 || base.nodesPerAxis < 2 || base.pairEps <= 0)
    throw ConfigError("measure needs mass > 0, cutoff > 0, nodes >= 2, pairEps > 0");
  return base;
}

LocalityConfig localityConfigFromJson(const Json& j) {
  LocalityConfig c = canonicalLocalityConfig();
  if (!j.is_object()) throw ConfigError("locality config must be an object");
  if (j.contains("theta")) {
    const ThetaSpec t = thetaSpecFromJson(j.at("theta"));
    c.params = t.params;
    c.theta = t.theta;
  }
  if (j.contains("translation")) c.translation = fourVectorFromJson(j.at("translation"));
  if (j.contains("f1")) c.f1 = bumpFromJson(j.at("f1"));
  if (j.contains("f2")) c.f2 = bumpFromJson(j.at("f2"));
  if (j.contains("spectators")) {
    c.spectators.clear();
    for (const auto& s : j.at("spectators"))
      c.spectators.push_back({s.value("label", std::string("spectator")), tensorPolyFromJson(require(s, "g")),
                              tensorPolyFromJson(require(s, "h"))});
  }
  if (j.contains("measure")) c.measure = measureFromJson(j.at("measure"), c.measure);
  return c;
}

}  // namespace wedgefield
