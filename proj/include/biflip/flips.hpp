#pragma once

#include <string_view>
#include <utility>

#include "biflip/numkernel.hpp"

namespace biflip {

enum class FlipperKind { Whole, Point, Line, Plane, PointPair, Circle };

std::string_view to_string(FlipperKind kind);
FlipperKind flipper_kind_from_string(std::string_view name);
bool is_admissible(Space space, FlipperKind kind);

// The fixed set of a flip.
//
// Euclidean spaces keep an affine subspace: `anchor` is the foot of the
// perpendicular from the origin and `basis` an orthonormal direction basis.
// The linear models keep the fixed linear subspace of the model in `basis`
// and leave `anchor` empty. RP2 flippers are always stored by their pole
// point: a line and its pole have the same flip.
struct Flipper {
    Space space = Space::E2;
    FlipperKind kind = FlipperKind::Whole;
    Vec anchor;
    Mat basis;

    int dim() const { return static_cast<int>(basis.cols()); }
};

Flipper whole_flipper(Space space);
Flipper affine_flipper(Space space, const AffineSubspace& sub);
Flipper point_flipper(Space space, const Vec& point);
Flipper line_flipper(Space space, const Vec& point, const Vec& direction);   // E2, E3
Flipper plane_flipper(const Vec& point, const Vec& normal);                  // E3
// Great circle of S2, line of RP2 (stored as its pole), line of H2, plane of
// H3, circle of MOEB.
Flipper polar_flipper(Space space, const Vec& normal);
Flipper pair_flipper(const Vec& v);   // antipodal pair of S2
// Line of H3 or point-pair of MOEB given by two distinct null vectors.
Flipper ideal_line_flipper(Space space, const Vec& a, const Vec& b);
// Flipper with the given fixed linear subspace (linear models only).
Flipper flipper_from_fixed(Space space, const LinearSubspace& fixed);

// Accessors for the natural coordinates of a flipper.
Vec representative(const Flipper& f);            // the vector of a 1-dimensional fixed set
Vec normal(const Flipper& f);                    // codimension-one flippers and E2 lines
Vec direction(const Flipper& f);                 // Euclidean lines
std::pair<Vec, Vec> endpoints(const Flipper& f); // H3 lines, MOEB point-pairs

Isometry flip_of(const Flipper& f);
Flipper flipper_of_involution(const Isometry& t, double eps = default_eps);

// Flippers are equal iff their flips are.
bool same_flipper(const Flipper& a, const Flipper& b, double eps = 1e-8);
// Image t(f), obtained from the conjugated flip.
Flipper image(const Isometry& t, const Flipper& f);
bool commute(const Isometry& a, const Isometry& b, double eps = 1e-9);

} // namespace biflip
