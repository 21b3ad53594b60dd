#include <gtest/gtest.h>

#include <numbers>

#include "biflip/headtotail.hpp"
#include "support/random_geometry.hpp"

using namespace biflip;
using biflip::testing::Rng;
using std::numbers::pi;

namespace {

Vec v(std::initializer_list<double> xs) {
    Vec r(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) r(i++) = x;
    return r;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const GeometryError& e) {
        return e.code();
    }
    return ErrorCode::MalformedInput;
}

Isometry affine2(double a, double b, double c, double d, double tx, double ty) {
    Mat m(3, 3);
    m << a, b, tx, c, d, ty, 0, 0, 1;
    return {Space::E2, m};
}

Isometry rotation2(double angle, double cx, double cy) {
    const double c = std::cos(angle), s = std::sin(angle);
    return affine2(c, -s, s, c, cx - c * cx + s * cy, cy - s * cx - c * cy);
}

double gap(const Isometry& a, const Isometry& b) {
    const double scale = std::max(1.0, max_abs(b.matrix));
    return distance(a, b, a.space == Space::RP2) / scale;
}

void expect_sound(const H2TResult& r, const Biflipper& first, const Biflipper& second) {
    EXPECT_LE(gap(encode(r.biflipper), encode(second) * encode(first)), 1e-8);
    for (const Move& m : r.steps) EXPECT_LE(gap(encode(m.after), encode(m.before)), 1e-8) << to_string(m.kind);
}

} // namespace

TEST(HeadToTail, TwoQuarterTurnsGiveHalfTurn) {
    const Biflipper t = decompose(rotation2(pi / 2, 0, 0));
    const Biflipper s = decompose(rotation2(pi / 2, 2, 0));
    const H2TResult r = head_to_tail(t, s, Mode::Strict);
    const IsometryClass c = classify(encode(r.biflipper));
    EXPECT_EQ(c.label, ClassLabel::PointSymmetry);
    EXPECT_LE((*c.center - v({1, -1})).norm(), 1e-12);
    expect_sound(r, t, s);
}

TEST(HeadToTail, SphereHalfTurnsAboutXThenZ) {
    Mat rx = Mat::Identity(3, 3), rz = Mat::Identity(3, 3);
    rx(1, 1) = rx(2, 2) = -1;
    rz(0, 0) = rz(1, 1) = -1;
    const H2TResult r = head_to_tail(decompose({Space::S2, rx}), decompose({Space::S2, rz}), Mode::Strict);
    const IsometryClass c = classify(encode(r.biflipper));
    EXPECT_EQ(c.label, ClassLabel::Rotation);
    EXPECT_NEAR(std::abs(*c.angle), pi, 1e-12);
    EXPECT_NEAR(std::abs((*c.axis_direction)(1)), 1.0, 1e-12);
}

TEST(HeadToTail, PerpendicularGlidesGiveHalfTurn) {
    const Biflipper t = decompose(affine2(1, 0, 0, -1, 1, 0));
    const Biflipper s = decompose(affine2(-1, 0, 0, 1, 0, 1));
    const H2TResult r = head_to_tail(t, s, Mode::Strict);
    const IsometryClass c = classify(encode(r.biflipper));
    EXPECT_EQ(c.label, ClassLabel::PointSymmetry);
    EXPECT_LE((*c.center - v({-0.5, 0.5})).norm(), 1e-12);
    expect_sound(r, t, s);
}

TEST(HeadToTail, StepsHaveCommonMiddleFlipper) {
    const Biflipper t = decompose(rotation2(0.7, 1, 2));
    const Biflipper s = decompose(affine2(1, 0, 0, 1, 3, -1));
    const H2TResult r = head_to_tail(t, s, Mode::Strict);
    ASSERT_EQ(r.steps.size(), 2u);
    EXPECT_TRUE(same_flipper(r.steps[0].after.head, r.steps[1].after.tail));
    EXPECT_EQ(r.steps[0].kind, MoveKind::RotateAboutCenter);
}

TEST(HeadToTail, SpaceMismatch) {
    EXPECT_EQ(code_of([] { head_to_tail(decompose(Isometry::identity(Space::E2)), decompose(Isometry::identity(Space::S2))); }),
              ErrorCode::SpaceMismatch);
}

TEST(HeadToTail, RandomPairsAreSound) {
    Rng rng(11);
    for (Space space : {Space::E1, Space::E2, Space::S2, Space::RP2, Space::H2, Space::E3, Space::H3, Space::Moeb}) {
        for (int i = 0; i < 200; ++i) {
            const Biflipper t = biflip::testing::random_biflipper(rng, space);
            const Biflipper s = biflip::testing::random_biflipper(rng, space);
            SCOPED_TRACE(std::string(to_string(space)) + " #" + std::to_string(i));
            expect_sound(head_to_tail(t, s), t, s);
        }
    }
}

TEST(HeadToTail, PlaneAndSphereAlwaysLinked) {
    Rng rng(12);
    for (Space space : {Space::E1, Space::E2, Space::S2, Space::RP2}) {
        for (int i = 0; i < 300; ++i) {
            const Isometry t = biflip::testing::random_isometry(rng, space);
            const Isometry s = biflip::testing::random_isometry(rng, space);
            EXPECT_TRUE(linked(s, t).has_value()) << to_string(space) << " #" << i;
        }
    }
}

TEST(HeadToTail, ScrewPairsAreLinked) {
    Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        const Isometry t = biflip::testing::random_screw(rng), s = biflip::testing::random_screw(rng);
        EXPECT_TRUE(linked(s, t).has_value()) << i;
    }
}

TEST(HeadToTail, IdentityIsLinkedWithEverything) {
    Rng rng(14);
    for (Space space : {Space::E2, Space::E3, Space::H2, Space::H3}) {
        const Isometry t = biflip::testing::random_isometry(rng, space);
        EXPECT_TRUE(linked(t, Isometry::identity(space)).has_value());
        EXPECT_TRUE(linked(Isometry::identity(space), t).has_value());
    }
}

TEST(HeadToTail, UnlinkedRotaryReflections) {
    Rng rng(15);
    for (int i = 0; i < 50; ++i) {
        const auto [t, s] = biflip::testing::unlinked_rotary_pair(rng);
        EXPECT_FALSE(linked(s, t).has_value()) << i;
        EXPECT_EQ(code_of([&] { head_to_tail(decompose(t), decompose(s), Mode::Strict); }), ErrorCode::NotLinked);
        const H2TResult r = compose_with_fallback(s, t);
        expect_sound(r, decompose(t), decompose(s));
        bool commuting = false;
        for (const Move& m : r.steps) commuting |= m.kind == MoveKind::CommutingTransform;
        EXPECT_TRUE(commuting) << i;
    }
}

TEST(HeadToTail, RotaryReflectionThenScrew) {
    Rng rng(16);
    for (int i = 0; i < 100; ++i) {
        const Isometry t = biflip::testing::rotary_reflection(biflip::testing::random_vec(rng, 3, -3, 3),
                                                              biflip::testing::random_unit(rng, 3), 0.9);
        const Isometry s = biflip::testing::random_screw(rng);
        const H2TResult forward = compose_with_fallback(s, t);
        expect_sound(forward, decompose(t), decompose(s));
        const H2TResult backward = compose_with_fallback(t, s);
        expect_sound(backward, decompose(s), decompose(t));
    }
}

TEST(HeadToTail, ReversingPairsOfE3) {
    Rng rng(17);
    int found = 0;
    for (int i = 0; i < 400 && found < 100; ++i) {
        const Biflipper t = biflip::testing::random_biflipper(rng, Space::E3);
        const Biflipper s = biflip::testing::random_biflipper(rng, Space::E3);
        if (encode(t).matrix.determinant() > 0 || encode(s).matrix.determinant() > 0) continue;
        ++found;
        expect_sound(head_to_tail(t, s), t, s);
    }
    EXPECT_GT(found, 20);
}

TEST(HeadToTail, DegenerateHyperbolicPairs) {
    // A parallel motion at xi and a translation along an axis ending at xi share no line.
    Rng rng(18);
    using biflip::testing::random_hyperbolic_point;
    using biflip::testing::random_null;
    for (int i = 0; i < 100; ++i) {
        const Vec xi = random_null(rng, 2);
        const Biflipper parallel{polar_flipper(Space::H2, lorentz_cross(xi, random_hyperbolic_point(rng, 2))),
                                 polar_flipper(Space::H2, lorentz_cross(xi, random_hyperbolic_point(rng, 2)))};
        const Vec n = lorentz_cross(xi, random_null(rng, 2));
        const Biflipper shift{polar_flipper(Space::H2, lorentz_cross(n, random_hyperbolic_point(rng, 2))),
                              polar_flipper(Space::H2, lorentz_cross(n, random_hyperbolic_point(rng, 2)))};
        for (const auto& [t, s] : {std::pair{parallel, shift}, std::pair{shift, parallel}}) {
            EXPECT_FALSE(linked(encode(s), encode(t)).has_value()) << i;
            EXPECT_EQ(code_of([&] { head_to_tail(t, s, Mode::Strict); }), ErrorCode::NotLinked);
            expect_sound(head_to_tail(t, s), t, s);
        }
    }
}

TEST(ComposeScrews, QuarterScrewTwice) {
    const Flipper x = line_flipper(Space::E3, v({0, 0, 0}), v({1, 0, 0}));
    const double a = pi / 4;
    const Flipper y = line_flipper(Space::E3, v({0, 0, 1}), v({std::cos(a), std::sin(a), 0}));
    const Biflipper b{x, y};
    const H2TResult r = compose_screws(b, b);
    const IsometryClass c = classify(encode(r.biflipper));
    // A half-turn screw is a glide line symmetry.
    EXPECT_EQ(c.label, ClassLabel::GlideLineSymmetry);
    EXPECT_NEAR(std::abs(*c.angle), pi, 1e-12);
    EXPECT_NEAR(*c.length, 4.0, 1e-12);
    for (const Move& m : r.steps) EXPECT_EQ(m.kind, MoveKind::ScrewAdjust);
}

TEST(ComposeScrews, InverseGivesIdentity) {
    Rng rng(19);
    const Biflipper b = decompose(biflip::testing::random_screw(rng));
    const H2TResult r = compose_screws(b, swapped(b));
    EXPECT_EQ(classify(encode(r.biflipper)).label, ClassLabel::Identity);
}

TEST(ComposeScrews, ParallelAndIntersectingAxes) {
    const Flipper x = line_flipper(Space::E3, v({0, 0, 0}), v({1, 0, 0}));
    const Flipper y = line_flipper(Space::E3, v({0, 0, 1}), v({0, 1, 0}));
    const Flipper w = line_flipper(Space::E3, v({3, 0, 0}), v({0, 1, 0}));
    const Biflipper b1{x, y}, b2{y, w}, b3{w, x};
    for (const auto& [p, q] : {std::pair{b1, b1}, std::pair{b1, b2}, std::pair{b2, b3}, std::pair{b3, b1}})
        expect_sound(compose_screws(p, q), p, q);
}

TEST(ComposeScrews, RejectsNonLines) {
    const Biflipper b{point_flipper(Space::E3, v({0, 0, 0})), point_flipper(Space::E3, v({1, 0, 0}))};
    EXPECT_EQ(code_of([&] { compose_screws(b, b); }), ErrorCode::WrongFlipperKind);
}

TEST(CommonPerpendicular, SkewAndParallel) {
    const Flipper z = common_perpendicular(v({0, 0, 0}), v({1, 0, 0}), v({0, 0, 2}), v({0, 1, 0}));
    EXPECT_LE(z.anchor.norm(), 1e-12);
    EXPECT_NEAR(std::abs(direction(z)(2)), 1.0, 1e-12);
    const Flipper p = common_perpendicular(v({0, 0, 0}), v({1, 0, 0}), v({5, 3, 0}), v({-1, 0, 0}));
    EXPECT_NEAR(std::abs(direction(p)(1)), 1.0, 1e-12);
}
