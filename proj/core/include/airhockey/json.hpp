#pragma once

#include <nlohmann/json.hpp>

namespace airhockey {

using Json = nlohmann::ordered_json;

// Overwrites `out` with j[key] when present.
template <typename T>
void read_if(const Json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

}  // namespace airhockey
