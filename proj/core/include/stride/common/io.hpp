#pragma once

#include <stdexcept>
#include <string>

namespace stride {

/// A file could not be read or written.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);

/// Writes through a temporary file in the same directory and renames it, so
/// readers never see a partial file. Creates missing parent directories.
void write_file(const std::string& path, const std::string& contents);

}  // namespace stride
