#pragma once

#include <string>
#include <vector>

namespace il::cli {

// Exit codes: 0 success / equivalent / holds, 1 definite negative,
// 2 unknown (fuel exhausted), 3 usage or parse error.
int run(const std::vector<std::string>& args);

}  // namespace il::cli
