#pragma once

#include <memory>
#include <string>

#include "freeprod/free_product.hpp"
#include "freeprod/group_action.hpp"

namespace freeprod {

/// A space (plus optional group pair) assembled from a JSON config document.
struct LoadedSpace {
  std::shared_ptr<FpSpace> space;
  std::shared_ptr<FreeProductAction> action;  // null when no groups declared
};

/// Parses and assembles a config. Malformed JSON raises ParseError; schema
/// and invariant violations raise DomainError carrying a JSON path.
LoadedSpace load_space_config(const std::string& json_text);
LoadedSpace load_space_file(const std::string& path);

}  // namespace freeprod
