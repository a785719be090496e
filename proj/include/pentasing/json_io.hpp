#pragma once

#include <string>

#include "pentasing/model.hpp"

namespace pentasing {

// On-disk design description: {"base": [[x,y,z] x5], "platform": [r x5]}
// with optional "name"/"description"; entries are JSON numbers or exact
// fraction strings like "-1/2".
struct DesignFile {
  Design design;
  std::string name;
  std::string description;
};

DesignFile parse_design(const std::string& json_text);  // throws parse_error
DesignFile load_design(const std::string& path);        // throws parse_error
std::string serialize_design(const DesignFile& f);

}  // namespace pentasing
