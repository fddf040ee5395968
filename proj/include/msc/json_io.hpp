#pragma once

#include <string>

#include <json.hpp>

#include "msc/differential.hpp"

namespace msc {

using Json = nlohmann::ordered_json;

/// Thrown on malformed documents (missing fields, wrong shapes).
struct SchemaError : Error {
  using Error::Error;
};

Json space_to_json(const Space& s);
SpacePtr space_from_json(const Json& j);  // validating (metric axioms included)

Json map_to_json(const MetricMap& u);
MetricMap map_from_json(const Json& j);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Report for the du command: |Du|, mu, compatibility, |du| and the
/// eq. |du| = |Du| residual field.
Json du_report(const Differential& du);

}  // namespace msc
