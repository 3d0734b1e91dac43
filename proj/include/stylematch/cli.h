#pragma once

#include <iosfwd>

namespace stylematch::cli {

// Exit codes: 0 success, 1 usage error, 2 input or parse error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace stylematch::cli
