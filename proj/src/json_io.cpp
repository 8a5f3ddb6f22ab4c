#include "contrib/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace contrib {

static double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(std::string("missing or non-numeric field '") + key + "'", where);
  return j[key].get<double>();
}

static std::string get_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string())
    throw ParseError(std::string("missing or non-string field '") + key + "'", where);
  return j[key].get<std::string>();
}

json scalar_to_json(const ScalarFn& f) {
  json j;
  switch (f.kind()) {
    case ScalarFn::Kind::Linear:
      j["kind"] = "linear";
      j["a"] = f.coef_a();
      break;
    case ScalarFn::Kind::Power:
      j["kind"] = "power";
      j["a"] = f.coef_a();
      j["k"] = f.exponent_k();
      if (std::isfinite(f.cap())) j["cap"] = f.cap();
      break;
    case ScalarFn::Kind::PiecewiseLinear: {
      j["kind"] = "piecewise_linear";
      json pts = json::array();
      for (const auto& [x, y] : f.points()) pts.push_back({x, y});
      j["points"] = pts;
      break;
    }
  }
  return j;
}

ScalarFn scalar_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError("scalar fn must be an object", where);
  std::string kind = get_string(j, "kind", where);
  try {
    if (kind == "linear") return ScalarFn::linear(get_number(j, "a", where));
    if (kind == "power") {
      double a = get_number(j, "a", where);
      double k = get_number(j, "k", where);
      if (j.contains("cap")) return ScalarFn::power_capped(a, k, get_number(j, "cap", where));
      return ScalarFn::power(a, k);
    }
    if (kind == "piecewise_linear") {
      if (!j.contains("points") || !j["points"].is_array())
        throw ParseError("piecewise_linear needs a 'points' array", where);
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : j["points"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          throw ParseError("each point must be [x, value]", where);
        pts.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      return ScalarFn::piecewise_linear(std::move(pts));
    }
  } catch (const ParseError& e) {
    if (e.where.empty()) throw ParseError(e.what(), where);
    throw;
  }
  throw ParseError("unknown scalar fn kind '" + kind + "'", where);
}

json reward_to_json(const RewardSpec& r) {
  json j;
  j["type"] = r.kind_name();
  switch (r.kind()) {
    case RewardSpec::Kind::WeightedSum:
    case RewardSpec::Kind::WeightedProduct:
      j["c"] = r.coef();
      break;
    case RewardSpec::Kind::PolyCompose: {
      json terms = json::array();
      for (const auto& t : r.poly().terms()) terms.push_back({t.i, t.j, t.coef});
      j["poly"] = terms;
      j["outer"] = scalar_to_json(r.scalar());
      break;
    }
    case RewardSpec::Kind::MinEffort:
    case RewardSpec::Kind::MaxEffort:
      j["h"] = scalar_to_json(r.scalar());
      break;
  }
  return j;
}

RewardSpec reward_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError("reward must be an object", where);
  std::string type = get_string(j, "type", where);
  try {
    if (type == "weighted_sum") return RewardSpec::weighted_sum(get_number(j, "c", where));
    if (type == "weighted_product") return RewardSpec::weighted_product(get_number(j, "c", where));
    if (type == "poly_convex") {
      if (!j.contains("poly") || !j["poly"].is_array())
        throw ParseError("poly_convex needs a 'poly' array of [i, j, coef]", where);
      std::vector<SymPoly::Term> terms;
      for (const auto& t : j["poly"]) {
        if (!t.is_array() || t.size() != 3)
          throw ParseError("each monomial must be [i, j, coef]", where);
        terms.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<double>()});
      }
      if (!j.contains("outer")) throw ParseError("poly_convex needs an 'outer' scalar fn", where);
      return RewardSpec::poly_compose(SymPoly(std::move(terms)),
                                      scalar_from_json(j["outer"], where + "/outer"));
    }
    if (type == "min_effort" || type == "max_effort") {
      if (!j.contains("h")) throw ParseError(type + " needs an 'h' scalar fn", where);
      ScalarFn h = scalar_from_json(j["h"], where + "/h");
      return type == "min_effort" ? RewardSpec::min_effort(std::move(h))
                                  : RewardSpec::max_effort(std::move(h));
    }
  } catch (const ParseError& e) {
    if (e.where.empty()) throw ParseError(e.what(), where);
    throw;
  }
  throw ParseError("unknown reward type '" + type + "'", where);
}

json game_to_json(const Game& g) {
  json nodes = json::array();
  for (int v = 0; v < g.node_count(); ++v)
    nodes.push_back({{"id", g.node(v).name}, {"budget", g.node(v).budget}});
  json edges = json::array();
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    edges.push_back({{"id", ed.name},
                     {"u", g.node(ed.u).name},
                     {"v", g.node(ed.v).name},
                     {"reward", reward_to_json(ed.reward)}});
  }
  return json{{"nodes", nodes}, {"edges", edges}};
}

Game game_from_json(const json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
    throw ParseError("game must be an object with 'nodes' and 'edges'", "");
  Game g;
  for (const auto& n : j["nodes"]) {
    std::string id = get_string(n, "id", "nodes");
    g.add_node(id, get_number(n, "budget", "node " + id));
  }
  for (const auto& e : j["edges"]) {
    std::string id = get_string(e, "id", "edges");
    std::string where = "edge " + id;
    std::string un = get_string(e, "u", where);
    std::string vn = get_string(e, "v", where);
    auto u = g.find_node(un), v = g.find_node(vn);
    if (!u) throw ParseError("unknown node '" + un + "'", where);
    if (!v) throw ParseError("unknown node '" + vn + "'", where);
    if (!e.contains("reward")) throw ParseError("missing reward", where);
    g.add_edge(id, *u, *v, reward_from_json(e["reward"], where + "/reward"));
  }
  return g;
}

std::string save_game(const Game& g) { return game_to_json(g).dump(2) + "\n"; }

Game load_game(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), "");
  }
  return game_from_json(j);
}

json profile_to_json(const Game& g, const Profile& s) {
  json j = json::object();
  for (int v = 0; v < g.node_count(); ++v) {
    json row = json::object();
    const auto& inc = g.incident(v);
    for (size_t i = 0; i < inc.size(); ++i)
      if (s.row(v)[i] != 0.0) row[g.edge(inc[i]).name] = s.row(v)[i];
    j[g.node(v).name] = row;
  }
  return j;
}

Profile profile_from_json(const Game& g, const json& j) {
  if (!j.is_object()) throw ParseError("profile must be an object keyed by node id", "");
  Profile s = Profile::zeros(g);
  for (const auto& [node_name, row] : j.items()) {
    auto v = g.find_node(node_name);
    if (!v) throw ParseError("unknown node '" + node_name + "'", "profile");
    if (!row.is_object()) throw ParseError("node entry must map edge id to effort", node_name);
    for (const auto& [edge_name, val] : row.items()) {
      auto e = g.find_edge(edge_name);
      if (!e) throw ParseError("unknown edge '" + edge_name + "'", "profile/" + node_name);
      if (!val.is_number()) throw ParseError("effort must be a number", node_name + "/" + edge_name);
      if (g.incident_index(*v, *e) < 0)
        throw ParseError("effort on non-incident edge", node_name + "/" + edge_name);
      s.set_effort(g, *v, *e, val.get<double>());
    }
  }
  return s;
}

std::string save_profile(const Game& g, const Profile& s) {
  return profile_to_json(g, s).dump(2) + "\n";
}

Profile load_profile(const Game& g, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), "");
  }
  return profile_from_json(g, j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file", path);
  out << text;
}

Game load_game_file(const std::string& path) { return load_game(read_file(path)); }

Profile load_profile_file(const Game& g, const std::string& path) {
  return load_profile(g, read_file(path));
}

}  // namespace contrib
