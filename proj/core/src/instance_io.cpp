#include "mechlab/instance_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

#include "mechlab/errors.hpp"

namespace mechlab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json rational_field(const Rational& v) { return to_string(v); }

Rational parse_field(const json& j, const char* what) {
  if (!j.is_string()) throw ConfigError(std::string("expected rational string for ") + what);
  return parse_rational(j.get<std::string>());
}

}  // namespace

CostMatrix InstanceDocument::as_matrix() const {
  if (is_matrix()) return matrix();
  return expand_clustered(clustered());
}

std::string write_instance_json(const CostMatrix& matrix) {
  ordered_json doc;
  doc["version"] = 1;
  doc["kind"] = "matrix";
  doc["n"] = matrix.machines();
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < matrix.machines(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < matrix.tasks(); ++j) row.push_back(to_string(matrix.at(i, j)));
    rows.push_back(std::move(row));
  }
  doc["values"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string write_instance_json(const ClusteredInstance& ci) {
  ordered_json doc;
  doc["version"] = 1;
  doc["kind"] = "clustered";
  doc["n"] = ci.players();
  doc["ell"] = ci.ell();
  doc["theta"] = rational_field(ci.theta());
  doc["B"] = rational_field(ci.big_b());
  ordered_json clusters = ordered_json::array();
  for (int c = 1; c <= ci.cluster_count(); ++c) {
    ordered_json cluster = ordered_json::array();
    for (int j = 0; j <= ci.ell(); ++j) {
      ordered_json task;
      task["t"] = rational_field(ci.task(c, j).t);
      task["s"] = rational_field(ci.task(c, j).s);
      cluster.push_back(std::move(task));
    }
    clusters.push_back(std::move(cluster));
  }
  doc["clusters"] = std::move(clusters);
  ordered_json dummies = ordered_json::array();
  for (int i = 0; i < ci.players(); ++i) dummies.push_back(rational_field(ci.dummy(i)));
  doc["dummies"] = std::move(dummies);
  return doc.dump(2) + "\n";
}

InstanceDocument read_instance_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid instance JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("instance file must be a JSON object");
  const int version = doc.value("version", 1);
  if (version != 1) throw ConfigError("unsupported instance file version");
  if (!doc.contains("kind")) throw ConfigError("instance file missing 'kind'");
  const std::string kind = doc["kind"].get<std::string>();

  InstanceDocument out{CostMatrix(2, 1, {{Rational(0)}, {Rational(0)}}), std::nullopt};
  if (kind == "matrix") {
    const int n = doc.at("n").get<int>();
    const auto& rows = doc.at("values");
    if (!rows.is_array() || rows.empty()) throw ConfigError("matrix 'values' must be rows");
    std::vector<std::vector<Rational>> values;
    for (const auto& row : rows) {
      std::vector<Rational> r;
      for (const auto& cell : row) r.push_back(parse_field(cell, "matrix entry"));
      values.push_back(std::move(r));
    }
    const int m = static_cast<int>(values.front().size());
    try {
      out.payload = CostMatrix(n, m, std::move(values));
    } catch (const ContractError& e) {
      throw ConfigError(std::string("invalid matrix instance: ") + e.what());
    }
  } else if (kind == "clustered") {
    const int n = doc.at("n").get<int>();
    const int ell = doc.at("ell").get<int>();
    const Rational theta = parse_field(doc.at("theta"), "theta");
    const Rational big_b = parse_field(doc.at("B"), "B");
    std::vector<std::vector<TaskValue>> clusters;
    for (const auto& cluster : doc.at("clusters")) {
      std::vector<TaskValue> tasks;
      for (const auto& task : cluster)
        tasks.push_back(TaskValue{parse_field(task.at("t"), "t"), parse_field(task.at("s"), "s")});
      clusters.push_back(std::move(tasks));
    }
    std::vector<Rational> dummies;
    for (const auto& d : doc.at("dummies")) dummies.push_back(parse_field(d, "dummy"));
    try {
      out.payload = ClusteredInstance(n, ell, std::move(clusters), std::move(dummies), theta, big_b);
    } catch (const ContractError& e) {
      throw ConfigError(std::string("invalid clustered instance: ") + e.what());
    }
  } else {
    throw ConfigError("unknown instance kind: '" + kind + "'");
  }
  if (doc.contains("mechanism")) out.mechanism_config_json = doc["mechanism"].dump();
  return out;
}

InstanceDocument load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return read_instance_json(buf.str());
}

void save_instance_file(const std::string& path, const std::string& json_text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << json_text;
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace mechlab
