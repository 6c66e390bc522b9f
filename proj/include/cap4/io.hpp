#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cap4/decide.hpp"
#include "json.hpp"

namespace cap4 {

using json = nlohmann::json;

// malformed instance or certificate; the message names the offending field or line
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json field_to_json(const Field& F);
FieldPtr field_from_json(const json& j, const std::string& path = "field");

// rationals as "a/b", finite elements as the packed integer, multiquadratic elements as coordinate lists
json fe_to_json(const Fe& x);
Fe fe_from_json(const FieldPtr& F, const json& j, const std::string& path);
json vec_to_json(const Vec& v);
Vec vec_from_json(const FieldPtr& F, const json& j, const std::string& path, int expected_len = -1);
json form_to_json(const QuadForm& q);
QuadForm form_from_json(const FieldPtr& F, const json& j, const std::string& path);

json certificate_to_json(const DecompositionCertificate& c);
DecompositionCertificate certificate_from_json(const FieldPtr& F, const json& j, int dim);

struct Instance {
  std::string name;
  FieldPtr F;
  std::vector<InvolutionPtr> factors;
  InvolutionPtr s;
  std::optional<BiquadraticL> L;
  int height_bound = 200;
  uint64_t seed = 0;
  json meta = json::object();
};

Instance instance_from_json(const json& j);
json read_json_file(const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace cap4
