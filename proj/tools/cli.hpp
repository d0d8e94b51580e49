#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace itermean::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitMathFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace itermean::cli
