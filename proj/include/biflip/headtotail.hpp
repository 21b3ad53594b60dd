#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "biflip/biflipper.hpp"

namespace biflip {

enum class MoveKind { RotateAboutCenter, TranslateAlongAxis, ScrewAdjust, Rebase, CommutingTransform };

std::string_view to_string(MoveKind kind);

// Which biflipper a move acts on. Middle refers to an intermediate pair
// formed from the head of the first and the tail of the second biflipper.
enum class MoveTarget { First, Second, Middle, Result };

std::string_view to_string(MoveTarget target);

// One equivalence-preserving step: encode(before) equals encode(after).
struct Move {
    MoveKind kind = MoveKind::Rebase;
    MoveTarget target = MoveTarget::First;
    Biflipper before;
    Biflipper after;
};

struct H2TResult {
    Biflipper biflipper;
    std::vector<Move> steps;
};

enum class Mode { Strict, Fallback };

// Composes `second` after `first`: the result encodes encode(second) o encode(first).
H2TResult head_to_tail(const Biflipper& first, const Biflipper& second, Mode mode = Mode::Fallback);

// A flipper E with rebase(t, E, head) and rebase(s, E, tail) both defined.
std::optional<Flipper> linked(const Isometry& s, const Isometry& t);

// Composition of two screw biflippers (pairs of lines) of E3 along the
// common perpendicular of their axes. Parallel and intersecting axes are
// resolved deterministically.
H2TResult compose_screws(const Biflipper& first, const Biflipper& second);

// Biflipper for s o t through the reductions used when no common flipper exists.
H2TResult compose_with_fallback(const Isometry& s, const Isometry& t);

// Common perpendicular of two lines of E3 (see compose_screws for the
// degenerate cases). Lines are given by a point and a direction.
Flipper common_perpendicular(const Vec& p1, const Vec& u1, const Vec& p2, const Vec& u2);

} // namespace biflip
