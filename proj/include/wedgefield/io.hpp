#pragma once

#include <json.hpp>

#include "wedgefield/locality.hpp"
#include "wedgefield/scattering.hpp"

namespace wedgefield {

using Json = nlohmann::json;

/// theta together with the orbit it was resolved on.
struct ThetaSpec {
  OrbitParams params;
  NoncommMatrix theta;
};

Json toJson(const Complex& z);
Json toJson(const FourVector& v);
Json toJson(const Matrix4& m);
Json toJson(const NoncommMatrix& theta);
Json toJson(const ThetaSpec& spec);
Json toJson(const Packet& p);
Json toJson(const TestFunction& f);
Json toJson(const TwistedTensor& t);
Json toJson(const TensorPoly& p);
Json toJson(const MassShellMeasure& mu);
Json toJson(const LocalityConfig& c);
Json toJson(const LocalityReport& r);
Json toJson(const Estimated& e);

/// All parsers throw ConfigError on malformed input.
Complex complexFromJson(const Json& j);
FourVector fourVectorFromJson(const Json& j);
Matrix4 matrixFromJson(const Json& j);
/// {"factors": [{"boost": axis, "rapidity": r} | {"rotation": [i, j], "angle": a}, ...]}
/// or {"matrix": [[...] x4]}.
LorentzTransform lorentzFromJson(const Json& j);
/// {"kappaE", "kappaM", "upper": [6]} or {"kappaE", "kappaM", "lorentz": {...}}
/// (the transform applied to theta_1); neither gives theta_1 itself.
ThetaSpec thetaSpecFromJson(const Json& j);
Packet packetFromJson(const Json& j);
/// A packet list or a single packet.
TestFunction testFunctionFromJson(const Json& j);
BumpPacket bumpFromJson(const Json& j);
TwistedTensor tensorFromJson(const Json& j);
TensorPoly tensorPolyFromJson(const Json& j);
/// Missing keys keep the defaults of base.
MassShellMeasure measureFromJson(const Json& j, MassShellMeasure base = {});
/// Missing keys keep the canonical configuration.
LocalityConfig localityConfigFromJson(const Json& j);

}  // namespace wedgefield
