#pragma once

// Strict accessors over yaml-cpp nodes: unknown keys and type mismatches
// become DomainErrors naming the key.

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "ubcost/types.hpp"

namespace ubcost::yaml {

inline YAML::Node parse_map(std::string_view text, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw DomainError(std::string(source) + ": malformed YAML: " + e.what());
  }
  if (root.IsNull()) return YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw DomainError(std::string(source) + ": expected a key/value mapping");
  return root;
}

inline void reject_unknown(const YAML::Node& map, std::initializer_list<std::string_view> known,
                           std::string_view source) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw DomainError(std::string(source) + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const YAML::Node& node, std::string_view key, std::string_view source) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw DomainError(std::string(source) + ": key '" + std::string(key) +
                      "' has an invalid value");
  }
}

template <typename T>
void read(const YAML::Node& map, std::string_view key, T& out, std::string_view source) {
  if (auto n = map[std::string(key)]) out = get<T>(n, key, source);
}

template <typename T>
T require(const YAML::Node& map, std::string_view key, std::string_view source) {
  auto n = map[std::string(key)];
  if (!n) throw DomainError(std::string(source) + ": missing required key '" + std::string(key) + "'");
  return get<T>(n, key, source);
}

inline std::vector<double> number_list(const YAML::Node& node, std::string_view key,
                                       std::string_view source) {
  if (!node.IsSequence())
    throw DomainError(std::string(source) + ": key '" + std::string(key) + "' must be a list");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(get<double>(item, key, source));
  return out;
}

}  // namespace ubcost::yaml
