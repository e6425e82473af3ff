#include "stride/common/json_reader.hpp"

namespace stride {

ObjectReader::ObjectReader(const nlohmann::json& object, std::string path) : object_(object), path_(std::move(path))
{
  if (!object_.is_object()) throw ConfigError((path_.empty() ? std::string("<root>") : path_) + ": expected an object");
}

std::string ObjectReader::path_of(const char* key) const
{
  return path_.empty() ? std::string(key) : path_ + "." + key;
}

const nlohmann::json* ObjectReader::find(const char* key)
{
  used_.insert(key);
  auto it = object_.find(key);
  return it == object_.end() ? nullptr : &*it;
}

void ObjectReader::finish() const
{
  for (const auto& [key, value] : object_.items()) {
    if (!used_.contains(key)) throw ConfigError(path_of(key.c_str()) + ": unknown key");
  }
}

}  // namespace stride
