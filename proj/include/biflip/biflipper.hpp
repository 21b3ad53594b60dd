#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "biflip/flips.hpp"

namespace biflip {

// Ordered pair of flippers encoding F_head o F_tail.
struct Biflipper {
    Flipper tail;
    Flipper head;

    Space space() const { return tail.space; }
    bool proper() const { return tail.kind != FlipperKind::Whole && head.kind != FlipperKind::Whole; }
};

Biflipper make_biflipper(const Flipper& tail, const Flipper& head);   // throws SpaceMismatch
Biflipper swapped(const Biflipper& b);

Isometry encode(const Biflipper& b);

enum class ClassLabel {
    Identity,
    Translation,
    Rotation,
    Reflection,
    GlideReflection,
    PointSymmetry,
    LineSymmetry,
    CentralSymmetry,
    ScrewMotion,
    RotaryReflection,
    GlideLineSymmetry,
    ParallelMotion,
    HyperbolicTranslation,
    Elliptic,
    Parabolic,
    Loxodromic,
    OrientationReversingMoebius,
};

std::string_view to_string(ClassLabel label);
ClassLabel class_label_from_string(std::string_view name);

// Parameters present per label:
//   translation            vector, length
//   rotation (E2)          center, angle          point-symmetry: center, angle = pi
//   rotation (S2, RP2)     axis_direction, angle
//   reflection (E1)        center
//   reflection (E2)        axis_point, axis_direction; glide-reflection adds vector, length
//   rotation, line-symmetry, screw-motion, glide-line-symmetry (E3)
//                          axis_point, axis_direction, angle; screws add vector, length
//   reflection, glide-reflection (E3)   axis_point (on the plane), normal; glides add vector, length
//   reflection (S2)        normal
//   rotary-reflection      center (E3 only), axis_direction, angle
//   central-symmetry       center (E3 only)
//   rotation (H2)          center, angle
//   hyperbolic-translation, glide-reflection (H2)
//                          axis_point, axis_direction (unit tangent), normal, length
//   reflection (H2)        axis_point, normal
//   parallel-motion        ideal_point, vector
//   elliptic, parabolic, loxodromic, orientation-reversing-moebius
//                          angle and length of the rotational and translational parts
// Hyperbolic points are hyperboloid vectors; axis_point is the foot of the
// perpendicular from the model origin.
struct IsometryClass {
    Space space = Space::E2;
    ClassLabel label = ClassLabel::Identity;
    std::optional<Vec> center;
    std::optional<Vec> axis_point;
    std::optional<Vec> axis_direction;
    std::optional<Vec> normal;
    std::optional<Vec> vector;
    std::optional<Vec> ideal_point;
    std::optional<double> angle;
    std::optional<double> length;
};

IsometryClass classify(const Isometry& t, double eps = default_eps);
// Rebuilds the isometry from its class data. H3 and MOEB classes are coarse
// and cannot be synthesized (UnsupportedSpace).
Isometry synthesize(const IsometryClass& c);

// Canonical biflipper per class; encode(decompose(t)) reproduces t.
Biflipper decompose(const Isometry& t);

bool equivalent(const Biflipper& a, const Biflipper& b, Tolerance tol = {});

// (A, B) -> (A', B') with F_A' = F_A o F_C and F_B' = F_B o F_C.
Biflipper transform_commuting(const Biflipper& b, const Flipper& c, double eps = 1e-9);
// (A, B) -> (T(A), T(B)) for T in the centralizer of the encoded isometry.
Biflipper conjugate(const Biflipper& b, const Isometry& t, double eps = 1e-9);

enum class Side { Tail, Head };
std::string_view to_string(Side side);

// Side::Tail returns (E, B) with F_B = T o F_E; Side::Head returns (A, E)
// with F_A = F_E o T. Throws NotCompatible when that product is not a flip.
Biflipper rebase(const Isometry& t, const Flipper& e, Side side, double eps = default_eps);

std::optional<std::pair<Flipper, Flipper>> strong_reversibility_witness(const Isometry& t);

// Direct product of Euclidean biflippers (A x C, B x D).
Biflipper product_biflipper(const Biflipper& first, const Biflipper& second);
Flipper product_flipper(const Flipper& first, const Flipper& second);
Isometry product_isometry(const Isometry& first, const Isometry& second);

enum class PencilKind { Elliptic, Parabolic, Hyperbolic };
std::string_view to_string(PencilKind kind);

// Lines of H2 through a point (elliptic), through an absolute point
// (parabolic) or perpendicular to an axis (hyperbolic). The carrier is the
// point, the null vector, or the normal of the axis.
struct Pencil {
    PencilKind kind = PencilKind::Elliptic;
    Vec carrier;

    bool contains(const Flipper& line, double eps = 1e-9) const;
    // Member line through a point of H2 (or through a second absolute point).
    Flipper line_through(const Vec& point) const;
};

Pencil invariant_pencil(const Isometry& t, double eps = default_eps);

} // namespace biflip
