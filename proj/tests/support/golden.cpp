#include "golden.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "stride/common/io.hpp"

namespace stride::testkit {

std::string test_data_dir()
{
  return STRIDE_TEST_DATA_DIR;
}

void expect_golden(const std::string& name, const std::string& actual)
{
  const auto path = (std::filesystem::path(test_data_dir()) / "golden" / name).string();
  const char* update = std::getenv("STRIDE_UPDATE_GOLDEN");
  if (update != nullptr && std::string(update) == "1") {
    write_file(path, actual);
    return;
  }
  ASSERT_TRUE(std::filesystem::exists(path)) << "missing golden file " << path
                                             << " (run with STRIDE_UPDATE_GOLDEN=1 to create it)";
  EXPECT_EQ(read_file(path), actual) << "golden mismatch: " << path;
}

}  // namespace stride::testkit
