#pragma once

#include <iosfwd>

namespace gnpb::cli {

/// Exit codes: 0 pass, 1 usage or parse error, 2 verification failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gnpb::cli
