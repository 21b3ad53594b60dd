#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "biflip/headtotail.hpp"

namespace biflip {

// Failures come back as empty optionals. Serial kernels are the reference; parallel ones use OpenMP and must agree
// element by element.
enum class Exec { Serial, Parallel };

std::vector<Isometry> encode_all(const std::vector<Biflipper>& items, Exec exec = Exec::Parallel);
std::vector<std::optional<IsometryClass>> classify_all(const std::vector<Isometry>& items, Exec exec = Exec::Parallel);
std::vector<std::optional<Biflipper>> decompose_all(const std::vector<Isometry>& items, Exec exec = Exec::Parallel);

// Relative distance between encode(head_to_tail(first, second)) and the
// matrix product. Failures report +infinity.
std::vector<double> head_to_tail_errors(const std::vector<std::pair<Biflipper, Biflipper>>& pairs,
                                        Mode mode = Mode::Fallback, Exec exec = Exec::Parallel);

int worker_count();

} // namespace biflip
