#pragma once

#include <optional>
#include <string>
#include <variant>

#include "mechlab/clustered.hpp"
#include "mechlab/cost_matrix.hpp"

namespace mechlab {

/// Parsed instance file: either a raw matrix or a clustered instance, plus
/// an optional mechanism config block carried verbatim (JSON text).
///
/// File format (version 1), rationals as strings "p/q" or "p":
///   {"version":1,"kind":"matrix","n":2,"values":[["1","2"],["3","4"]]}
///   {"version":1,"kind":"clustered","n":3,"ell":1,"theta":"...","B":"...",
///    "clusters":[[{"t":"...","s":"..."},...],...],"dummies":["...","...","..."]}
/// Either may carry a sibling "mechanism" object.
struct InstanceDocument {
  std::variant<CostMatrix, ClusteredInstance> payload;
  std::optional<std::string> mechanism_config_json;

  bool is_matrix() const { return std::holds_alternative<CostMatrix>(payload); }
  const CostMatrix& matrix() const { return std::get<CostMatrix>(payload); }
  const ClusteredInstance& clustered() const { return std::get<ClusteredInstance>(payload); }

  /// Matrix view regardless of kind (clustered instances are expanded).
  CostMatrix as_matrix() const;
};

std::string write_instance_json(const CostMatrix& matrix);
std::string write_instance_json(const ClusteredInstance& ci);

InstanceDocument read_instance_json(const std::string& text);
InstanceDocument load_instance_file(const std::string& path);
void save_instance_file(const std::string& path, const std::string& json_text);

}  // namespace mechlab
