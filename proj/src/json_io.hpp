#pragma once

// JSON mapping shared by the schema file and the model document.

#include <json.hpp>

#include "chaid/schema.hpp"

namespace chaid::detail {

nlohmann::ordered_json schema_to_json(const DatasetSchema& schema);
DatasetSchema schema_from_json(const nlohmann::ordered_json& doc);

}  // namespace chaid::detail
