#include "msc/json_io.hpp"

#include <fstream>

namespace msc {

Json space_to_json(const Space& s) {
  Json j;
  j["points"] = s.point_ids;
  Json rows = Json::array();
  for (int i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < s.size(); ++k) row.push_back(s.dist(i, k));
    rows.push_back(std::move(row));
  }
  j["dist"] = std::move(rows);
  j["weights"] = s.weights;
  j["epsilon"] = s.epsilon;
  return j;
}

SpacePtr space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("dist") ||
      !j.contains("weights") || !j.contains("epsilon"))
    throw SchemaError("space document needs points, dist, weights, epsilon");
  if (!j["points"].is_array() || !j["dist"].is_array() || !j["weights"].is_array() ||
      !j["epsilon"].is_number())
    throw SchemaError("space document field types are wrong");
  std::vector<std::string> points;
  for (const auto& p : j["points"]) {
    if (!p.is_string()) throw SchemaError("point ids must be strings");
    points.push_back(p.get<std::string>());
  }
  std::vector<std::vector<double>> dist;
  for (const auto& row : j["dist"]) {
    if (!row.is_array()) throw SchemaError("dist must be a matrix");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw SchemaError("dist entries must be numbers");
      r.push_back(v.get<double>());
    }
    dist.push_back(std::move(r));
  }
  std::vector<double> weights;
  for (const auto& v : j["weights"]) {
    if (!v.is_number()) throw SchemaError("weights must be numbers");
    weights.push_back(v.get<double>());
  }
  return build_space(std::move(points), dist, std::move(weights), j["epsilon"].get<double>());
}

Json map_to_json(const MetricMap& u) {
  Json j;
  j["source"] = space_to_json(*u.source);
  j["target"] = space_to_json(*u.target);
  Json m = Json::object();
  for (int x = 0; x < u.source->size(); ++x)
    m[u.source->point_ids[x]] = u.target->point_ids[u.u(x)];
  j["map"] = std::move(m);
  if (u.eps_auto)
    j["target_epsilon"] = nullptr;
  else
    j["target_epsilon"] = u.eps_y;
  return j;
}

MetricMap map_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("map"))
    throw SchemaError("map document needs source, target, map");
  SpacePtr X = space_from_json(j["source"]);
  SpacePtr Y = space_from_json(j["target"]);
  if (!j["map"].is_object()) throw SchemaError("map must be an object of point assignments");
  std::vector<int> assign(X->size(), -1);
  for (const auto& [k, v] : j["map"].items()) {
    if (!v.is_string()) throw SchemaError("map values must be target point ids");
    assign[X->index(k)] = Y->index(v.get<std::string>());
  }
  for (int x = 0; x < X->size(); ++x)
    if (assign[x] < 0) throw SchemaError("map misses source point " + X->point_ids[x]);
  std::optional<double> eps;
  if (j.contains("target_epsilon") && !j["target_epsilon"].is_null()) {
    if (!j["target_epsilon"].is_number()) throw SchemaError("target_epsilon must be a number");
    eps = j["target_epsilon"].get<double>();
  }
  return make_metric_map(X, Y, std::move(assign), eps);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

Json du_report(const Differential& du) {
  const MetricMap& u = du.map;
  Json j;
  j["target_epsilon"] = u.eps_y;
  j["target_epsilon_auto"] = u.eps_auto;
  Json slope = Json::object(), opn = Json::object(), res = Json::object();
  for (int x = 0; x < u.source->size(); ++x) {
    const std::string& id = u.source->point_ids[x];
    slope[id] = u.slope.v[x];
    opn[id] = du.opnorm.v[x];
    res[id] = u.slope.v[x] - du.opnorm.v[x];
  }
  j["mdug"] = std::move(slope);
  j["du_norm"] = std::move(opn);
  j["samenorm_residual"] = std::move(res);
  Json mu;
  Json mass = Json::object();
  for (int q = 0; q < u.target->size(); ++q) mass[u.target->point_ids[q]] = u.mu.mass[q];
  mu["mass"] = std::move(mass);
  Json supp = Json::array();
  for (int q : u.mu.support) supp.push_back(u.target->point_ids[q]);
  mu["support"] = std::move(supp);
  mu["total"] = u.mu.total;
  j["pushforward"] = std::move(mu);
  Json compat = Json::array();
  for (const auto& viol : u.compat.violations) {
    Json e;
    e["x"] = u.source->point_ids[viol.x];
    e["y"] = u.source->point_ids[viol.y];
    compat.push_back(std::move(e));
  }
  j["compatibility_violations"] = std::move(compat);
  return j;
}

}  // namespace msc
