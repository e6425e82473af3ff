#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace stride {

/// Invalid configuration: unknown key, wrong type or out-of-range value.
/// The message always starts with the dotted key path.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Reads one JSON object strictly: every key must be consumed by get(),
/// require() or child(), otherwise finish() reports the first unknown key.
class ObjectReader
{
public:
  ObjectReader(const nlohmann::json& object, std::string path);

  /// Leaves `out` untouched when the key is absent.
  template <class T>
  void get(const char* key, T& out)
  {
    if (const auto* v = find(key)) convert(key, *v, out);
  }

  template <class T>
  void require(const char* key, T& out)
  {
    const auto* v = find(key);
    if (v == nullptr) throw ConfigError(path_of(key) + ": missing required key");
    convert(key, *v, out);
  }

  /// Returns nullptr when absent.
  const nlohmann::json* child(const char* key) { return find(key); }

  std::string path_of(const char* key) const;
  void finish() const;

private:
  const nlohmann::json* find(const char* key);

  template <class T>
  void convert(const char* key, const nlohmann::json& v, T& out) const
  {
    try {
      out = v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path_of(key) + ": " + e.what());
    }
  }

  const nlohmann::json& object_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace stride
