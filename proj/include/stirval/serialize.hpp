#pragma once

#include "stirval/tree.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace stirval {

const char* version();

/// TreeDocument: constants, levels, leaves, status, child statistics and build
/// metadata. The timestamp is emitted only when given so output stays byte-stable.
nlohmann::json tree_document(const PTree& tree, const std::optional<std::string>& timestamp = std::nullopt);

/// One graph node per digit string labeled by its digits; leaves drawn as dashed boxes.
std::string tree_dot(const PTree& tree);

} // namespace stirval
