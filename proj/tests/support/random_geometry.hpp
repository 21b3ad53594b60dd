#pragma once

#include <cmath>
#include <random>
#include <utility>

#include "biflip/biflipper.hpp"

namespace biflip::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec random_vec(Rng& rng, int n, double lo = -10.0, double hi = 10.0) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
    return v;
}

inline Vec random_unit(Rng& rng, int n) {
    std::normal_distribution<double> gauss;
    Vec v(n);
    do {
        for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    } while (v.norm() < 1e-3);
    return v.normalized();
}

// Hyperboloid point whose Poincare image lies within the given radius.
inline Vec random_hyperbolic_point(Rng& rng, int dim, double radius = 0.8) {
    const Vec dir = random_unit(rng, dim);
    const double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
    return model_convert(Vec(r * dir), dim == 2 ? Chart::PoincareDisk : Chart::PoincareBall, Chart::Hyperboloid);
}

inline Vec random_null(Rng& rng, int dim) {
    Vec v(dim + 1);
    v << 1.0, random_unit(rng, dim);
    return v;
}

// Spacelike normal of a hyperplane that meets the ball of the given radius.
inline Vec random_spacelike(Rng& rng, int dim, double radius = 0.8) {
    Vec v(dim + 1);
    v << uniform(rng, -radius, radius), random_unit(rng, dim);
    return v;
}

inline Flipper random_flipper(Rng& rng, Space space, FlipperKind kind) {
    switch (space) {
    case Space::E1:
    case Space::E2:
    case Space::E3: {
        const int d = intrinsic_dim(space);
        const Vec p = random_vec(rng, d);
        switch (kind) {
        case FlipperKind::Point: return point_flipper(space, p);
        case FlipperKind::Line: return line_flipper(space, p, random_unit(rng, d));
        case FlipperKind::Plane: return plane_flipper(p, random_unit(rng, 3));
        default: return whole_flipper(space);
        }
    }
    case Space::S2:
        if (kind == FlipperKind::PointPair) return pair_flipper(random_unit(rng, 3));
        if (kind == FlipperKind::Circle) return polar_flipper(space, random_unit(rng, 3));
        return whole_flipper(space);
    case Space::RP2:
        if (kind == FlipperKind::Point) return point_flipper(space, random_unit(rng, 3));
        return whole_flipper(space);
    case Space::H2:
        if (kind == FlipperKind::Point) return point_flipper(space, random_hyperbolic_point(rng, 2));
        if (kind == FlipperKind::Line) return polar_flipper(space, random_spacelike(rng, 2));
        return whole_flipper(space);
    case Space::H3:
    case Space::Moeb:
        if (kind == FlipperKind::Point) return point_flipper(space, random_hyperbolic_point(rng, 3));
        if (kind == FlipperKind::Line || kind == FlipperKind::PointPair)
            return ideal_line_flipper(space, random_null(rng, 3), random_null(rng, 3));
        if (kind == FlipperKind::Plane || kind == FlipperKind::Circle)
            return polar_flipper(space, random_spacelike(rng, 3));
        return whole_flipper(space);
    }
    return whole_flipper(space);
}

inline std::vector<FlipperKind> proper_kinds(Space space) {
    switch (space) {
    case Space::E1: return {FlipperKind::Point};
    case Space::E2:
    case Space::H2: return {FlipperKind::Point, FlipperKind::Line};
    case Space::E3:
    case Space::H3: return {FlipperKind::Point, FlipperKind::Line, FlipperKind::Plane};
    case Space::S2:
    case Space::Moeb: return {FlipperKind::PointPair, FlipperKind::Circle};
    case Space::RP2: return {FlipperKind::Point};
    }
    return {};
}

inline Flipper random_proper_flipper(Rng& rng, Space space) {
    const auto kinds = proper_kinds(space);
    return random_flipper(rng, space, kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)]);
}

inline Biflipper random_biflipper(Rng& rng, Space space) {
    return {random_proper_flipper(rng, space), random_proper_flipper(rng, space)};
}

inline Isometry random_isometry(Rng& rng, Space space) { return encode(random_biflipper(rng, space)); }

// Screw motion with a random axis, angle and pitch.
inline Isometry random_screw(Rng& rng) {
    const Flipper a = line_flipper(Space::E3, random_vec(rng, 3, -5, 5), random_unit(rng, 3));
    const Flipper b = line_flipper(Space::E3, random_vec(rng, 3, -5, 5), random_unit(rng, 3));
    return encode(Biflipper{a, b});
}

// Rotary reflection with center c about the axis through c along u.
inline Isometry rotary_reflection(const Vec& c, const Vec& u, double angle) {
    const Vec n = u.normalized();
    const Mat lin = rotation_matrix(n, angle) * (Mat::Identity(3, 3) - 2.0 * n * n.transpose());
    Mat m = Mat::Identity(4, 4);
    m.topLeftCorner(3, 3) = lin;
    m.topRightCorner(3, 1) = c - lin * c;
    return {Space::E3, m};
}

// Two rotary reflections with skew axes whose common perpendicular misses
// both centers. Such a pair has no common flipper.
inline std::pair<Isometry, Isometry> unlinked_rotary_pair(Rng& rng) {
    const Vec p1 = random_vec(rng, 3, -3, 3);
    const Vec u1 = random_unit(rng, 3);
    Vec z = random_unit(rng, 3);
    z = (z - z.dot(u1) * u1).normalized();
    Vec u2 = random_unit(rng, 3);
    u2 = (u2 - u2.dot(z) * z).normalized();
    if (std::abs(u2.dot(u1)) > 0.9) u2 = Vec(cross3(z, u1)).normalized();
    const Vec p2 = p1 + uniform(rng, 1.0, 3.0) * z;
    auto angle = [&rng] { return (rng() % 2 ? 1.0 : -1.0) * uniform(rng, 0.3, 2.8); };
    auto offset = [&rng] { return (rng() % 2 ? 1.0 : -1.0) * uniform(rng, 0.5, 2.5); };
    const Vec c1 = p1 + offset() * u1;
    const Vec c2 = p2 + offset() * u2;
    return {rotary_reflection(c1, u1, angle()), rotary_reflection(c2, u2, angle())};
}

} // namespace biflip::testing
