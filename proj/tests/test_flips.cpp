#include <gtest/gtest.h>

#include "biflip/flips.hpp"
#include "support/random_geometry.hpp"

using namespace biflip;
using biflip::testing::Rng;

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

} // namespace

TEST(FlipOf, PointSymmetryDoublesTheVector) {
    const Isometry f = flip_of(point_flipper(Space::E2, v({1, 0})));
    EXPECT_LE((f.apply(v({0, 0})) - v({2, 0})).norm(), 1e-15);
    EXPECT_GT(f.matrix.topLeftCorner(2, 2).determinant(), 0);
}

TEST(FlipOf, GreatCircleOfTheEquator) {
    const Isometry f = flip_of(polar_flipper(Space::S2, v({0, 0, 1})));
    Mat expected = Mat::Identity(3, 3);
    expected(2, 2) = -1;
    EXPECT_TRUE(approx_equal(f.matrix, expected, 1e-15));
}

TEST(FlipOf, DiskDiameterMirrors) {
    // Line through the origin along x: normal e2.
    const Isometry f = flip_of(polar_flipper(Space::H2, v({0, 0, 1})));
    const Vec x = model_convert(v({0, 0.3}), Chart::PoincareDisk, Chart::Hyperboloid);
    const Vec y = model_convert(f.apply(x), Chart::Hyperboloid, Chart::PoincareDisk);
    EXPECT_LE((y - v({0, -0.3})).norm(), 1e-15);
}

TEST(FlipOf, WholeIsIdentity) {
    for (Space s : all_spaces) EXPECT_TRUE(approx_equal(flip_of(whole_flipper(s)), Isometry::identity(s)));
}

TEST(FlipperOfInvolution, GreatCircle) {
    Mat m = Mat::Identity(3, 3);
    m(2, 2) = -1;
    const Flipper f = flipper_of_involution({Space::S2, m});
    EXPECT_EQ(f.kind, FlipperKind::Circle);
    EXPECT_LE((normal(f) - v({0, 0, 1})).norm(), 1e-15);
}

TEST(FlipperOfInvolution, AntipodalMapHasNoFixedPoints) {
    EXPECT_EQ(code_of([] { flipper_of_involution({Space::S2, Mat(-Mat::Identity(3, 3))}); }), ErrorCode::EmptyFixedSet);
}

TEST(FlipperOfInvolution, QuarterTurnIsNoInvolution) {
    Mat m = Mat::Identity(3, 3);
    m(0, 0) = 0;
    m(0, 1) = -1;
    m(1, 0) = 1;
    m(1, 1) = 0;
    EXPECT_EQ(code_of([&] { flipper_of_involution({Space::E2, m}); }), ErrorCode::NotInvolution);
}

TEST(FlipperOfInvolution, MoebiusPointFlipIsRejected) {
    EXPECT_EQ(code_of([] { point_flipper(Space::Moeb, v({1, 0, 0, 0})); }), ErrorCode::EmptyFixedSet);
    Mat m = -Mat::Identity(4, 4);
    m(0, 0) = 1;
    EXPECT_EQ(code_of([&] { flipper_of_involution({Space::Moeb, m}); }), ErrorCode::EmptyFixedSet);
    EXPECT_EQ(flipper_of_involution({Space::H3, m}).kind, FlipperKind::Point);
}

TEST(FlipperOfInvolution, Rp2LineBecomesItsPole) {
    const Flipper line = polar_flipper(Space::RP2, v({0, 0, 2}));
    EXPECT_EQ(line.kind, FlipperKind::Point);
    EXPECT_LE((representative(line) - v({0, 0, 1})).norm(), 1e-15);
    Mat mirror = Mat::Identity(3, 3);
    mirror(2, 2) = -1;
    EXPECT_TRUE(same_flipper(flipper_of_involution({Space::RP2, mirror}), line));
}

TEST(Flipper, InvalidData) {
    EXPECT_EQ(code_of([] { point_flipper(Space::H2, v({0, 1, 0})); }), ErrorCode::InvalidFlipper);
    EXPECT_EQ(code_of([] { polar_flipper(Space::H2, v({1, 0, 0})); }), ErrorCode::InvalidFlipper);
    EXPECT_EQ(code_of([] { line_flipper(Space::E2, v({0, 0}), v({0, 0})); }), ErrorCode::InvalidFlipper);
    EXPECT_EQ(code_of([] { ideal_line_flipper(Space::H3, v({1, 1, 0, 0}), v({1, 0.5, 0, 0})); }),
              ErrorCode::InvalidFlipper);
}

TEST(Flipper, CanonicalEuclideanData) {
    const Flipper l = line_flipper(Space::E2, v({3, 1}), v({0, -2}));
    EXPECT_LE((l.anchor - v({3, 0})).norm(), 1e-15);
    EXPECT_LE((direction(l) - v({0, 1})).norm(), 1e-15);
    const Flipper p = plane_flipper(v({1, 2, 5}), v({0, 0, -3}));
    EXPECT_LE((p.anchor - v({0, 0, 5})).norm(), 1e-15);
    EXPECT_LE((normal(p) - v({0, 0, 1})).norm(), 1e-15);
}

TEST(Flipper, IdealEndpointsRoundTrip) {
    const Vec a = v({1, 1, 0, 0}), b = v({1, 0, 1, 0});
    const Flipper f = ideal_line_flipper(Space::H3, a, b);
    const auto [x, y] = endpoints(f);
    const bool direct = (x - a).norm() < 1e-12 && (y - b).norm() < 1e-12;
    const bool flipped = (x - b).norm() < 1e-12 && (y - a).norm() < 1e-12;
    EXPECT_TRUE(direct || flipped);
}

class FlipProperties : public ::testing::TestWithParam<Space> {};

TEST_P(FlipProperties, RoundTripAndInvolution) {
    const Space space = GetParam();
    Rng rng(100 + static_cast<int>(space));
    for (int i = 0; i < 1000; ++i) {
        const Flipper f = biflip::testing::random_proper_flipper(rng, space);
        const Isometry m = flip_of(f);
        const int n = model_dim(space);
        EXPECT_LE(max_abs(m.matrix * m.matrix - Mat::Identity(n, n)), 1e-10 * std::max(1.0, max_abs(m.matrix)));
        const Flipper back = flipper_of_involution(m);
        EXPECT_EQ(back.kind, f.kind);
        EXPECT_TRUE(same_flipper(back, f));
        if (space == Space::E2) {
            const double det = m.matrix.topLeftCorner(2, 2).determinant();
            EXPECT_EQ(det > 0, f.kind == FlipperKind::Point);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(AllSpaces, FlipProperties,
                         ::testing::Values(Space::E1, Space::E2, Space::E3, Space::S2, Space::RP2, Space::H2,
                                           Space::H3, Space::Moeb),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Image, ConjugatedFlipIsFlipOfImage) {
    Rng rng(9);
    for (Space space : {Space::E2, Space::E3, Space::S2, Space::H2, Space::H3}) {
        for (int i = 0; i < 50; ++i) {
            const Flipper f = biflip::testing::random_proper_flipper(rng, space);
            const Isometry t = biflip::testing::random_isometry(rng, space);
            const Flipper g = image(t, f);
            const Isometry expected = t * flip_of(f) * t.inverse();
            EXPECT_LE(distance(flip_of(g), expected), 1e-8 * std::max(1.0, max_abs(expected.matrix)));
        }
    }
}
