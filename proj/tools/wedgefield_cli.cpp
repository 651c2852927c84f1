#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "wedgefield/experiments.hpp"

namespace wf = wedgefield;

namespace {

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  bool seedSet = false;
  std::string output, csv;
  std::optional<double> mass, cutoff;
  std::optional<int> nodes, latticeNodes;
  std::optional<double> kappaE, kappaM;
  bool check = false;
  std::optional<int> samples;
  std::string scales;
  std::string p, q, pp, qp, theta, s0;
};

std::vector<double> parseList(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw wf::ConfigError("bad number '" + item + "' in '" + text + "'");
    }
  }
  return out;
}

wf::Json parseVector(const std::string& text) {
  const auto v = parseList(text);
  if (v.size() != 4) throw wf::ConfigError("four-vector needs 4 components: '" + text + "'");
  return v;
}

wf::Json parseTheta(const std::string& text) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
    try {
      return wf::Json::parse(text);
    } catch (const wf::Json::exception& e) {
      throw wf::ConfigError(e.what());
    }
  }
  const auto k = parseList(text);
  if (k.size() != 2) throw wf::ConfigError("--theta takes JSON or 'kappaE,kappaM'");
  return {{"kappaE", k[0]}, {"kappaM", k[1]}};
}

wf::Json loadConfig(const std::string& path) {
  if (path.empty()) return wf::Json::object();
  std::ifstream in(path);
  if (!in) throw wf::ConfigError("cannot read config '" + path + "'");
  try {
    return wf::Json::parse(in);
  } catch (const wf::Json::exception& e) {
    throw wf::ConfigError(e.what());
  }
}

/// Command-line flags override the config file.
wf::Json overlayFlags(const std::string& name, wf::Json cfg, const Options& o) {
  if (!cfg.is_object()) throw wf::ConfigError("config must be a JSON object");
  if (o.seedSet) cfg["seed"] = o.seed;
  wf::Json measure;
  if (o.mass) measure["mass"] = *o.mass;
  if (o.cutoff) measure["cutoff"] = *o.cutoff;
  if (o.nodes) measure["nodes"] = *o.nodes;
  if (!measure.is_null()) {
    if (name == "locality") {
      for (const auto& [k, v] : measure.items()) cfg["locality"]["measure"][k] = v;
    } else if (name == "oracle" || name == "smatrix") {
      if (o.mass) cfg["mass"] = *o.mass;
      if (o.cutoff || o.nodes) throw wf::ConfigError("--cutoff/--nodes do not apply to " + name);
    } else if (name == "npoint" || name == "limit") {
      for (const auto& [k, v] : measure.items()) cfg["measure"][k] = v;
    } else {
      throw wf::ConfigError("measure flags do not apply to " + name);
    }
  }
  if (o.latticeNodes) cfg["latticeNodes"] = *o.latticeNodes;
  if (o.kappaE) cfg["kappaE"] = *o.kappaE;
  if (o.kappaM) cfg["kappaM"] = *o.kappaM;
  if (o.check) cfg["check"] = true;
  if (o.samples) cfg["samples"] = *o.samples;
  if (!o.scales.empty()) cfg["scales"] = parseList(o.scales);
  if (!o.p.empty()) cfg["p"] = parseVector(o.p);
  if (!o.q.empty()) cfg["q"] = parseVector(o.q);
  if (!o.pp.empty()) cfg["pp"] = parseVector(o.pp);
  if (!o.qp.empty()) cfg["qp"] = parseVector(o.qp);
  if (!o.theta.empty()) cfg["theta"] = parseTheta(o.theta);
  if (!o.s0.empty()) cfg["s0"] = o.s0;
  return cfg;
}

std::string cell(const wf::Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

/// Sweep rows as CSV; complex values split into _re and _im columns.
void writeCsv(const std::string& path, const wf::Json& rows) {
  std::ofstream out(path);
  if (!out) throw wf::ConfigError("cannot write '" + path + "'");
  if (rows.empty()) return;
  std::vector<std::string> header;
  for (const auto& [k, v] : rows.front().items()) {
    if (v.is_array() && v.size() == 2) {
      header.push_back(k + "_re");
      header.push_back(k + "_im");
    } else {
      header.push_back(k);
    }
  }
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    bool first = true;
    for (const auto& [k, v] : row.items()) {
      if (v.is_array() && v.size() == 2) {
        out << (first ? "" : ",") << cell(v[0]) << ',' << cell(v[1]);
      } else {
        out << (first ? "" : ",") << cell(v);
      }
      first = false;
    }
    out << '\n';
  }
}

std::string render(const std::string& name, const wf::Json& doc) {
  if (name != "limit") return doc.dump(2) + '\n';
  // Sweeps: header document, then one line per row.
  wf::Json head = doc;
  head["results"].erase("rows");
  std::string text = head.dump() + '\n';
  for (const auto& row : doc["results"]["rows"]) text += row.dump() + '\n';
  return text;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path);
  if (!out) throw wf::ConfigError("cannot write '" + path + "'");
  out << text;
}

void diagnostic(const std::string& what) {
  const auto colon = what.find(':');
  const std::string type = colon == std::string::npos ? "Error" : what.substr(0, colon);
  const std::string message = colon == std::string::npos ? what : what.substr(colon + 2);
  std::cerr << wf::Json{{"error", type}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformed free-field experiments"};
  app.require_subcommand(1);
  Options o;
  auto* seedOpt = app.add_option("--seed", o.seed, "Random seed (default 0)");
  app.add_option("--config", o.config, "JSON config file");
  app.add_option("--output", o.output, "Write JSON here instead of stdout");
  app.add_option("--csv", o.csv, "Write sweep rows as CSV");
  app.add_option("--mass", o.mass, "Field mass");
  app.add_option("--cutoff", o.cutoff, "Shell momentum cutoff");
  app.add_option("--nodes", o.nodes, "Shell nodes per axis");
  app.add_option("--lattice-nodes", o.latticeNodes, "Oracle lattice nodes per axis");

  std::map<std::string, CLI::App*> subs;
  for (const auto& name : wf::experimentNames()) subs[name] = app.add_subcommand(name);
  subs["orbit"]->add_option("--kappa-e", o.kappaE);
  subs["orbit"]->add_option("--kappa-m", o.kappaM);
  subs["orbit"]->add_flag("--check", o.check, "Run the randomized orbit and wedge checks");
  subs["identities"]->add_option("--samples", o.samples);
  subs["limit"]->add_option("--scales", o.scales, "Comma-separated theta scales");
  subs["smatrix"]->add_option("--p", o.p);
  subs["smatrix"]->add_option("--q", o.q);
  subs["smatrix"]->add_option("--pp", o.pp);
  subs["smatrix"]->add_option("--qp", o.qp);
  subs["smatrix"]->add_option("--s0", o.s0, "unit or phase:c,s0");
  for (const char* name : {"smatrix", "npoint", "limit", "oracle"})
    subs[name]->add_option("--theta", o.theta, "JSON theta spec or kappaE,kappaM");
  for (auto& [name, sub] : subs) {
    sub->fallthrough();
    sub->add_option("--seed", o.seed);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  o.seedSet = seedOpt->count() > 0;
  for (auto& [name, sub] : subs)
    if (sub->get_option("--seed")->count() > 0) o.seedSet = true;

  const std::string name = app.get_subcommands().front()->get_name();
  wf::Json resolved;
  try {
    resolved = wf::resolveConfig(name, overlayFlags(name, loadConfig(o.config), o));
  } catch (const wf::Error& e) {
    diagnostic(e.what());
    return 2;
  }
  try {
    const wf::Json doc = wf::runExperiment(name, resolved);
    if (!o.csv.empty()) writeCsv(o.csv, doc["results"].value("rows", wf::Json::array()));
    emit(render(name, doc), o.output);
  } catch (const wf::ConfigError& e) {
    diagnostic(e.what());
    return 2;
  } catch (const wf::Error& e) {
    diagnostic(e.what());
    return 3;
  }
  return 0;
}
