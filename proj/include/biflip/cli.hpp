#pragma once

#include <iosfwd>

namespace biflip {

// Exit status: 0 on success, 1 on geometric errors, 2 on malformed input or
// bad arguments.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace biflip
