#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "biflip/io.hpp"

namespace biflip {

// One entry point per core operation, shared by the CLI and the service so
// that both print the same bytes for the same request.
//
// Requests carry the scene under "scene" plus operation parameters:
//   encode, classify, quaternion/lift   {"biflipper"}
//   compose, linked                     {"first", "second", "mode"?: "strict" | "fallback"}
//   equivalent                          {"a", "b", "tol"?}
//   rebase                              {"biflipper", "flipper", "side": "tail" | "head", "tol"?}
//   reduce                              {"word"}
//   spaces                              {}
const std::vector<std::string>& operation_names();
bool has_operation(std::string_view name);
Json run_operation(std::string_view name, const Json& request);

} // namespace biflip
