#include "pentasing/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace pentasing {

namespace {

double number_from(const nlohmann::json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string())
    throw parse_error(where + ": expected a number or a fraction string");

  std::string s = j.get<std::string>();
  // tolerate the typographic minus sign U+2212
  for (std::string::size_type k; (k = s.find("\xe2\x88\x92")) != std::string::npos;)
    s.replace(k, 3, "-");
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw parse_error(where + ": empty numeric string");

  const auto slash = s.find('/');
  const std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "" : s.substr(slash + 1);

  double a = 0.0, b = 1.0;
  try {
    std::size_t used = 0;
    a = std::stod(num, &used);
    if (used != num.size()) throw std::invalid_argument(num);
    if (!den.empty()) {
      b = std::stod(den, &used);
      if (used != den.size()) throw std::invalid_argument(den);
    }
  } catch (const std::exception&) {
    throw parse_error(where + ": cannot parse '" + s + "' as a number");
  }
  if (b == 0.0) throw parse_error(where + ": zero denominator in '" + s + "'");
  const double v = a / b;
  if (!std::isfinite(v)) throw parse_error(where + ": non-finite value '" + s + "'");
  return v;
}

}  // namespace

DesignFile parse_design(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("design file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw parse_error("design file must be a JSON object");

  DesignFile f;
  if (j.contains("name")) f.name = j["name"].get<std::string>();
  if (j.contains("description")) f.description = j["description"].get<std::string>();

  const auto base = j.find("base");
  const auto platform = j.find("platform");
  if (base == j.end() || !base->is_array() || base->size() != 5)
    throw parse_error("'base' must be an array of five [x,y,z] points");
  if (platform == j.end() || !platform->is_array() || platform->size() != 5)
    throw parse_error("'platform' must be an array of five offsets");

  for (std::size_t i = 0; i < 5; ++i) {
    const auto& pt = (*base)[i];
    if (!pt.is_array() || pt.size() != 3)
      throw parse_error("base point " + std::to_string(i + 1) +
                        " must be an [x,y,z] triple");
    for (std::size_t k = 0; k < 3; ++k)
      f.design.base[i][k] = number_from(
          pt[k], "base point " + std::to_string(i + 1));
    f.design.platform[i] =
        number_from((*platform)[i], "platform offset " + std::to_string(i + 1));
  }
  return f;
}

DesignFile load_design(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open design file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_design(buf.str());
}

std::string serialize_design(const DesignFile& f) {
  nlohmann::json j;
  if (!f.name.empty()) j["name"] = f.name;
  if (!f.description.empty()) j["description"] = f.description;
  j["base"] = nlohmann::json::array();
  for (const auto& m : f.design.base) j["base"].push_back({m[0], m[1], m[2]});
  j["platform"] = f.design.platform;
  return j.dump(2) + "\n";
}

}  // namespace pentasing
