#pragma once

#include <iosfwd>

namespace gpcpd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gpcpd
