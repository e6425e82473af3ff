#pragma once

#include <string>

namespace stride::testkit {

/// Directory holding tests/golden and tests/fixtures.
std::string test_data_dir();

/// Compares `actual` with tests/golden/<name>. With STRIDE_UPDATE_GOLDEN=1
/// in the environment the file is rewritten instead.
void expect_golden(const std::string& name, const std::string& actual);

}  // namespace stride::testkit
