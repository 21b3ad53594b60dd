#pragma once

#include <Eigen/Dense>
#include <utility>

#include "biflip/biflipper.hpp"

namespace biflip {

// a + bi + cj + dk
struct Quaternion {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    double scalar() const { return a; }
    Eigen::Vector3d vec() const { return {b, c, d}; }

    static Quaternion from_parts(double s, const Eigen::Vector3d& v) { return {s, v(0), v(1), v(2)}; }
    static Quaternion pure(const Eigen::Vector3d& v) { return from_parts(0.0, v); }
};

Quaternion qmul(const Quaternion& p, const Quaternion& q);
Quaternion qconj(const Quaternion& q);
double qnorm(const Quaternion& q);
Quaternion qneg(const Quaternion& q);
double qdistance(const Quaternion& p, const Quaternion& q);
bool is_unit(const Quaternion& q, double eps = 1e-12);

// Picks the sign with a > 0, then b > 0, then c, then d.
Quaternion canonical_sign(const Quaternion& q);

// Unit vectors w+ and w- with v w+ = q and w- v = q.
std::pair<Eigen::Vector3d, Eigen::Vector3d> vector_factorization(const Quaternion& q, const Eigen::Vector3d& v);

// Directed great-circle arc. Represents the unit quaternion -(start end).
struct VectorArc {
    Eigen::Vector3d start;
    Eigen::Vector3d end;
};

VectorArc make_arc(const Eigen::Vector3d& start, const Eigen::Vector3d& end);   // throws NonUnit
Quaternion quaternion_of(const VectorArc& arc);
// An arc representing the unit quaternion q.
VectorArc arc_of(const Quaternion& q);
// Arc for quaternion_of(a) * quaternion_of(b), built by sliding both arcs
// along their great circles until they meet.
VectorArc arc_mul(const VectorArc& a, const VectorArc& b);

// q p q*
Eigen::Vector3d rotate(const Quaternion& q, const Eigen::Vector3d& p);
Mat rotation_of(const Quaternion& q);
Quaternion quaternion_of_rotation(const Mat& rotation3);   // canonical sign

// Unit quaternion w v for the S2 biflipper ({+-v}, {+-w}), sign-canonicalized.
Quaternion lift_biflipper(const Biflipper& b);

} // namespace biflip
