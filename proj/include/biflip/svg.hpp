#pragma once

#include <string>

#include "biflip/headtotail.hpp"

namespace biflip {

// Figure of a head-to-tail construction: one <g class="move"> per step in
// step order, then the operands and the result. E2 is drawn as is, H2 in
// the Poincare disk, S2 and RP2 by orthographic projection from above, E1
// on a line. E3, H3 and MOEB get a projection sketch onto the first two
// coordinates of their chart.
std::string render_svg(const Biflipper& first, const Biflipper& second, const H2TResult& result);

} // namespace biflip
