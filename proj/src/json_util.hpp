#pragma once

// Field access helpers that turn schema problems into InputError messages
// naming the offending field and record.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "modalshift/common.hpp"
#include "modalshift/geometry.hpp"

namespace modalshift::detail {

using nlohmann::json;

inline json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": malformed document: " + e.what());
  }
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InputError("schema violation: " + where + " is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw InputError(std::string("schema violation: missing field '") + key + "' in " + where);
  }
  return *it;
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("schema violation: field '") + key + "' in " + where +
                     " has the wrong type");
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return get<T>(obj, key, where);
}

inline Point get_point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw InputError("schema violation: " + where + " must be an [x, y] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

inline std::vector<Point> get_points(const json& v, const std::string& where) {
  if (!v.is_array()) throw InputError("schema violation: " + where + " must be an array of points");
  std::vector<Point> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_point(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline json to_json(Point p) { return json::array({p.x, p.y}); }

inline json to_json(const std::vector<Point>& pts) {
  json arr = json::array();
  for (const Point& p : pts) arr.push_back(to_json(p));
  return arr;
}

}  // namespace modalshift::detail
