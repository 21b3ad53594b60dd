#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "biflip/headtotail.hpp"
#include "biflip/quaternion.hpp"
#include "support/random_geometry.hpp"

using namespace biflip;
using biflip::testing::Rng;
using Eigen::Vector3d;
using std::numbers::sqrt2;

namespace {

const Quaternion one{1, 0, 0, 0};
const Quaternion qi{0, 1, 0, 0};
const Quaternion qj{0, 0, 1, 0};
const Quaternion qk{0, 0, 0, 1};

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const GeometryError& e) {
        return e.code();
    }
    return ErrorCode::MalformedInput;
}

Quaternion random_quaternion(Rng& rng) {
    const Vec x = biflip::testing::random_vec(rng, 4, -2, 2);
    return {x(0), x(1), x(2), x(3)};
}

Quaternion random_unit_quaternion(Rng& rng) {
    const Vec x = biflip::testing::random_unit(rng, 4);
    return {x(0), x(1), x(2), x(3)};
}

Vector3d random_unit3(Rng& rng) { return Vector3d(biflip::testing::random_unit(rng, 3)); }

bool same_up_to_sign(const Quaternion& p, const Quaternion& q, double eps) {
    return qdistance(p, q) <= eps || qdistance(p, qneg(q)) <= eps;
}

} // namespace

TEST(Qmul, UnitsMultiply) {
    EXPECT_LE(qdistance(qmul(qi, qj), qk), 1e-15);
    EXPECT_LE(qdistance(qmul(qj, qi), qneg(qk)), 1e-15);
    EXPECT_LE(qdistance(qmul(qi, qi), qneg(one)), 1e-15);
}

TEST(Qmul, PureVectorsGiveDotAndCross) {
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const Vector3d p = Vector3d(biflip::testing::random_vec(rng, 3)), q = Vector3d(biflip::testing::random_vec(rng, 3));
        const Quaternion r = qmul(Quaternion::pure(p), Quaternion::pure(q));
        EXPECT_NEAR(r.a, -p.dot(q), 1e-12);
        EXPECT_LE((r.vec() - p.cross(q)).norm(), 1e-12);
    }
}

TEST(Qmul, AssociativeAndNormMultiplicative) {
    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        const Quaternion p = random_quaternion(rng), q = random_quaternion(rng), r = random_quaternion(rng);
        EXPECT_LE(qdistance(qmul(qmul(p, q), r), qmul(p, qmul(q, r))), 1e-12);
        EXPECT_NEAR(qnorm(qmul(p, q)), qnorm(p) * qnorm(q), 1e-12);
        EXPECT_LE(qdistance(qconj(qmul(p, q)), qmul(qconj(q), qconj(p))), 1e-12);
    }
}

TEST(Qmul, UnitVectorsHaveOrderFour) {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Quaternion u = Quaternion::pure(random_unit3(rng));
        const Quaternion u2 = qmul(u, u);
        EXPECT_LE(qdistance(u2, qneg(one)), 1e-12);
        EXPECT_LE(qdistance(qmul(u2, u2), one), 1e-12);
    }
}

TEST(Qmul, OnlyInvolutionIsMinusOne) {
    // q^2 = 1 forces a^2 - |v|^2 = 1 and 2 a v = 0 on the unit sphere.
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        const Quaternion q = random_unit_quaternion(rng);
        const bool involution = qdistance(qmul(q, q), one) < 1e-9;
        if (involution) EXPECT_TRUE(qdistance(q, one) < 1e-6 || qdistance(q, qneg(one)) < 1e-6);
    }
    EXPECT_LE(qdistance(qmul(qneg(one), qneg(one)), one), 0.0);
}

TEST(VectorFactorization, QuarterTurnAboutK) {
    const Quaternion q{1 / sqrt2, 0, 0, 1 / sqrt2};
    const auto [wp, wm] = vector_factorization(q, Vector3d::UnitX());
    EXPECT_LE((wp - Vector3d(-1, 1, 0) / sqrt2).norm(), 1e-15);
    EXPECT_LE(qdistance(qmul(Quaternion::pure(Vector3d::UnitX()), Quaternion::pure(wp)), q), 1e-15);
    EXPECT_LE(qdistance(qmul(Quaternion::pure(wm), Quaternion::pure(Vector3d::UnitX())), q), 1e-15);
}

TEST(VectorFactorization, ScalarOne) {
    const Vector3d v(0, 0.6, 0.8);
    const auto [wp, wm] = vector_factorization(one, v);
    EXPECT_LE((wp + v).norm(), 1e-15);
    EXPECT_LE((wm + v).norm(), 1e-15);
    EXPECT_LE(qdistance(qmul(Quaternion::pure(v), Quaternion::pure(-v)), one), 1e-15);
}

TEST(VectorFactorization, RandomProducts) {
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        const Quaternion q = random_unit_quaternion(rng);
        Vector3d v = random_unit3(rng);
        const Vector3d u = q.vec().normalized();
        v = (v - v.dot(u) * u).normalized();
        const auto [wp, wm] = vector_factorization(q, v);
        EXPECT_NEAR(wp.norm(), 1.0, 1e-12);
        EXPECT_LE(qdistance(qmul(Quaternion::pure(v), Quaternion::pure(wp)), q), 1e-12);
        EXPECT_LE(qdistance(qmul(Quaternion::pure(wm), Quaternion::pure(v)), q), 1e-12);
    }
}

TEST(VectorFactorization, Errors) {
    const Quaternion q{1 / sqrt2, 0, 0, 1 / sqrt2};
    EXPECT_EQ(code_of([&] { vector_factorization(q, Vector3d::UnitZ()); }), ErrorCode::NotPerpendicular);
    EXPECT_EQ(code_of([&] { vector_factorization({2, 0, 0, 0}, Vector3d::UnitZ()); }), ErrorCode::NonUnit);
}

TEST(VectorArc, RepresentsMinusProduct) {
    EXPECT_LE(qdistance(quaternion_of(make_arc(Vector3d::UnitX(), Vector3d::UnitY())), qneg(qk)), 1e-15);
}

TEST(VectorArc, HeadToTailProduct) {
    const VectorArc r = arc_mul(make_arc(Vector3d::UnitX(), Vector3d::UnitY()), make_arc(Vector3d::UnitY(), Vector3d::UnitZ()));
    EXPECT_LE((r.start - Vector3d::UnitX()).norm(), 1e-15);
    EXPECT_LE((r.end - Vector3d::UnitZ()).norm(), 1e-15);
    EXPECT_LE(qdistance(quaternion_of(r), qj), 1e-15);
}

TEST(VectorArc, ZeroLengthIsUnit) {
    const VectorArc z = make_arc(Vector3d::UnitZ(), Vector3d::UnitZ());
    EXPECT_LE(qdistance(quaternion_of(z), one), 1e-15);
    const VectorArc a = make_arc(Vector3d::UnitX(), Vector3d(0, 0.6, 0.8));
    EXPECT_LE(qdistance(quaternion_of(arc_mul(z, a)), quaternion_of(a)), 1e-15);
    EXPECT_LE(qdistance(quaternion_of(arc_mul(a, z)), quaternion_of(a)), 1e-15);
}

TEST(VectorArc, AgreesWithQmul) {
    Rng rng(6);
    for (int i = 0; i < 500; ++i) {
        const VectorArc a = make_arc(random_unit3(rng), random_unit3(rng));
        const VectorArc b = make_arc(random_unit3(rng), random_unit3(rng));
        EXPECT_LE(qdistance(quaternion_of(arc_mul(a, b)), qmul(quaternion_of(a), quaternion_of(b))), 1e-10);
    }
}

TEST(VectorArc, SpecialArcs) {
    Rng rng(7);
    const VectorArc anti = make_arc(Vector3d::UnitX(), -Vector3d::UnitX());
    EXPECT_LE(qdistance(quaternion_of(anti), qneg(one)), 1e-15);
    for (int i = 0; i < 50; ++i) {
        const VectorArc a = make_arc(random_unit3(rng), random_unit3(rng));
        EXPECT_LE(qdistance(quaternion_of(arc_mul(anti, a)), qneg(quaternion_of(a))), 1e-12);
        EXPECT_LE(qdistance(quaternion_of(arc_mul(a, anti)), qneg(quaternion_of(a))), 1e-12);
        // Same great circle.
        const VectorArc b{a.end, Vector3d((a.end + 0.3 * (a.end - a.start)).normalized())};
        EXPECT_LE(qdistance(quaternion_of(arc_mul(a, b)), qmul(quaternion_of(a), quaternion_of(b))), 1e-10);
    }
    EXPECT_LE(qdistance(quaternion_of(arc_mul(anti, anti)), one), 1e-15);
}

TEST(VectorArc, ArcOfQuaternion) {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const Quaternion q = random_unit_quaternion(rng);
        EXPECT_LE(qdistance(quaternion_of(arc_of(q)), q), 1e-12);
    }
    EXPECT_LE(qdistance(quaternion_of(arc_of(qneg(one))), qneg(one)), 1e-15);
}

TEST(Rotate, QuarterTurnAboutI) {
    const Quaternion q{1 / sqrt2, 1 / sqrt2, 0, 0};
    EXPECT_LE((rotate(q, Vector3d::UnitY()) - Vector3d::UnitZ()).norm(), 1e-15);
}

TEST(Rotate, UnitVectorIsLineSymmetry) {
    EXPECT_LE((rotate(qi, Vector3d::UnitY()) + Vector3d::UnitY()).norm(), 1e-15);
    EXPECT_LE((rotate(qi, Vector3d::UnitX()) - Vector3d::UnitX()).norm(), 1e-15);
}

TEST(Rotate, MinusOneIsIdentity) {
    Rng rng(9);
    const Vector3d p = Vector3d(biflip::testing::random_vec(rng, 3));
    EXPECT_LE((rotate(qneg(one), p) - p).norm(), 1e-15);
}

TEST(Rotate, MatchesAxisAngle) {
    Rng rng(10);
    for (int i = 0; i < 500; ++i) {
        const Vector3d u = random_unit3(rng);
        const double theta = biflip::testing::uniform(rng, -3.1, 3.1);
        const Quaternion q = Quaternion::from_parts(std::cos(theta / 2), u * std::sin(theta / 2));
        const Mat expected = rotation_matrix(Vec(u), theta);
        EXPECT_LE(max_abs(rotation_of(q) - expected), 1e-12);
        EXPECT_LE(max_abs(rotation_of(qneg(q)) - expected), 1e-12);
        const Vector3d p = Vector3d(biflip::testing::random_vec(rng, 3));
        EXPECT_NEAR(rotate(q, p).norm(), p.norm(), 1e-12);
        EXPECT_TRUE(same_up_to_sign(quaternion_of_rotation(expected), q, 1e-10));
    }
}

TEST(Rotate, DoubleCoverKernel) {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const Quaternion q = random_unit_quaternion(rng);
        const Quaternion p = random_unit_quaternion(rng);
        EXPECT_LE(max_abs(rotation_of(qmul(q, p)) - rotation_of(q) * rotation_of(p)), 1e-12);
        if (max_abs(rotation_of(q) - Mat::Identity(3, 3)) < 1e-9) EXPECT_TRUE(same_up_to_sign(q, one, 1e-6));
    }
    EXPECT_LE(max_abs(rotation_of(one) - Mat::Identity(3, 3)), 0.0);
}

TEST(Rotate, NonUnit) {
    EXPECT_EQ(code_of([] { rotate({1, 1, 0, 0}, Vector3d::UnitX()); }), ErrorCode::NonUnit);
}

TEST(Lift, HalfTurnsAboutXThenY) {
    const Biflipper b{pair_flipper(Vec(Vector3d::UnitX())), pair_flipper(Vec(Vector3d::UnitY()))};
    const Quaternion q = lift_biflipper(b);
    EXPECT_LE(qdistance(q, qk), 1e-15);
    EXPECT_LE(max_abs(rotation_of(q) - encode(b).matrix), 1e-15);
}

TEST(Lift, EqualPairsGiveIdentity) {
    const Biflipper b{pair_flipper(Vec(Vector3d(0, 0.6, 0.8))), pair_flipper(Vec(Vector3d(0, -0.6, -0.8)))};
    EXPECT_TRUE(same_up_to_sign(lift_biflipper(b), one, 1e-15));
}

TEST(Lift, RepresentativesAndRotation) {
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        const Vector3d v = random_unit3(rng), w = random_unit3(rng);
        const Biflipper b{pair_flipper(Vec(v)), pair_flipper(Vec(w))};
        const Quaternion q = lift_biflipper(b);
        EXPECT_LE(max_abs(rotation_of(q) - encode(b).matrix), 1e-12);
        for (double sv : {1.0, -1.0}) {
            for (double sw : {1.0, -1.0}) {
                const Quaternion r = qmul(Quaternion::pure(sw * w), Quaternion::pure(sv * v));
                EXPECT_TRUE(same_up_to_sign(r, q, 1e-12));
            }
        }
    }
}

TEST(Lift, HeadToTailIsHomomorphism) {
    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        const Biflipper t{pair_flipper(Vec(random_unit3(rng))), pair_flipper(Vec(random_unit3(rng)))};
        const Biflipper s{pair_flipper(Vec(random_unit3(rng))), pair_flipper(Vec(random_unit3(rng)))};
        const H2TResult r = head_to_tail(t, s, Mode::Strict);
        if (!r.biflipper.proper()) continue;
        EXPECT_TRUE(same_up_to_sign(lift_biflipper(r.biflipper), qmul(lift_biflipper(s), lift_biflipper(t)), 1e-10)) << i;
    }
}

TEST(Lift, WrongKind) {
    const Biflipper b{polar_flipper(Space::S2, Vec(Vector3d::UnitX())), pair_flipper(Vec(Vector3d::UnitY()))};
    EXPECT_EQ(code_of([&] { lift_biflipper(b); }), ErrorCode::WrongFlipperKind);
}
