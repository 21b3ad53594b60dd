#include "biflip/quaternion.hpp"

#include <cmath>

namespace biflip {

using Eigen::Vector3d;

Quaternion qmul(const Quaternion& p, const Quaternion& q) {
    const Vector3d pv = p.vec(), qv = q.vec();
    return Quaternion::from_parts(p.a * q.a - pv.dot(qv), p.a * qv + q.a * pv + pv.cross(qv));
}

Quaternion qconj(const Quaternion& q) { return {q.a, -q.b, -q.c, -q.d}; }

double qnorm(const Quaternion& q) { return std::sqrt(q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d); }

Quaternion qneg(const Quaternion& q) { return {-q.a, -q.b, -q.c, -q.d}; }

double qdistance(const Quaternion& p, const Quaternion& q) {
    return qnorm({p.a - q.a, p.b - q.b, p.c - q.c, p.d - q.d});
}

bool is_unit(const Quaternion& q, double eps) { return std::abs(qnorm(q) - 1.0) <= eps; }

Quaternion canonical_sign(const Quaternion& q) {
    for (double x : {q.a, q.b, q.c, q.d}) {
        if (std::abs(x) > 1e-12) return x > 0 ? q : qneg(q);
    }
    return q;
}

namespace {

void require_unit(const Quaternion& q) {
    if (!is_unit(q)) fail(ErrorCode::NonUnit, "quaternion is not a unit quaternion");
}

void require_unit(const Vector3d& v, const char* what) {
    if (std::abs(v.norm() - 1.0) > 1e-9) fail(ErrorCode::NonUnit, std::string(what) + " is not a unit vector");
}

Vector3d perpendicular_to(const Vector3d& v) { return Vector3d(reference_perpendicular(Vec(v))); }

// Rotation of x about the unit axis n by angle t.
Vector3d turn(const Vector3d& x, const Vector3d& n, double t) {
    return x * std::cos(t) + n.cross(x) * std::sin(t) + n * n.dot(x) * (1.0 - std::cos(t));
}

bool lex_greater(const Vector3d& x, const Vector3d& y) {
    for (int i = 0; i < 3; ++i) {
        if (std::abs(x(i) - y(i)) > 1e-12) return x(i) > y(i);
    }
    return false;
}

} // namespace

std::pair<Vector3d, Vector3d> vector_factorization(const Quaternion& q, const Vector3d& v) {
    require_unit(q);
    require_unit(v, "v");
    const Vector3d qv = q.vec();
    if (std::abs(v.dot(qv)) > 1e-9) fail(ErrorCode::NotPerpendicular, "v is not perpendicular to the vector part of q");
    const double s = qv.norm();
    const double alpha = std::atan2(s, q.a);
    const Vector3d u = s > 1e-15 ? Vector3d(qv / s) : perpendicular_to(v);
    const Vector3d side = u.cross(v) * std::sin(alpha);
    return {-v * std::cos(alpha) + side, -v * std::cos(alpha) - side};
}

VectorArc make_arc(const Vector3d& start, const Vector3d& end) {
    require_unit(start, "arc start");
    require_unit(end, "arc end");
    return {start, end};
}

Quaternion quaternion_of(const VectorArc& arc) {
    return qneg(qmul(Quaternion::pure(arc.start), Quaternion::pure(arc.end)));
}

VectorArc arc_of(const Quaternion& q) {
    require_unit(q);
    // -(v w) = v.w - v x w, so w is v turned by alpha about -u.
    const Vector3d qv = q.vec();
    const double s = qv.norm();
    const double alpha = std::atan2(s, q.a);
    if (s < 1e-15) {
        const Vector3d v = Vector3d::UnitX();
        return {v, q.a > 0 ? v : Vector3d(-v)};
    }
    const Vector3d u = qv / s;
    const Vector3d v = perpendicular_to(u);
    return {v, turn(v, -u, alpha)};
}

VectorArc arc_mul(const VectorArc& a, const VectorArc& b) {
    const double eps = 1e-12;
    auto zero = [eps](const VectorArc& x) { return (x.start - x.end).norm() < eps; };
    auto antipodal = [eps](const VectorArc& x) { return (x.start + x.end).norm() < eps; };
    if (zero(a)) return b;
    if (zero(b)) return a;
    // An antipodal arc represents -1.
    if (antipodal(a) && antipodal(b)) return {a.start, a.start};
    if (antipodal(a)) return {b.start, -b.end};
    if (antipodal(b)) return {a.start, -a.end};

    const Vector3d na = a.start.cross(a.end).normalized(), nb = b.start.cross(b.end).normalized();
    const double ta = std::atan2(a.start.cross(a.end).norm(), a.start.dot(a.end));
    const double tb = std::atan2(b.start.cross(b.end).norm(), b.start.dot(b.end));
    Vector3d p = na.cross(nb);
    if (p.norm() < 1e-12) {
        p = a.end;
    } else {
        p.normalize();
        if (lex_greater(Vector3d(-p), p)) p = -p;
    }
    return {turn(p, na, -ta), turn(p, nb, tb)};
}

Vector3d rotate(const Quaternion& q, const Vector3d& p) {
    require_unit(q);
    return qmul(qmul(q, Quaternion::pure(p)), qconj(q)).vec();
}

Mat rotation_of(const Quaternion& q) {
    require_unit(q);
    Mat r(3, 3);
    for (int i = 0; i < 3; ++i) r.col(i) = rotate(q, Vector3d::Unit(i));
    return r;
}

Quaternion quaternion_of_rotation(const Mat& m) {
    const double tr = m.trace();
    Quaternion q;
    if (tr > 0) {
        const double s = 2.0 * std::sqrt(1.0 + tr);
        q = {s / 4.0, (m(2, 1) - m(1, 2)) / s, (m(0, 2) - m(2, 0)) / s, (m(1, 0) - m(0, 1)) / s};
    } else if (m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2));
        q = {(m(2, 1) - m(1, 2)) / s, s / 4.0, (m(0, 1) + m(1, 0)) / s, (m(0, 2) + m(2, 0)) / s};
    } else if (m(1, 1) > m(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2));
        q = {(m(0, 2) - m(2, 0)) / s, (m(0, 1) + m(1, 0)) / s, s / 4.0, (m(1, 2) + m(2, 1)) / s};
    } else {
        const double s = 2.0 * std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1));
        q = {(m(1, 0) - m(0, 1)) / s, (m(0, 2) + m(2, 0)) / s, (m(1, 2) + m(2, 1)) / s, s / 4.0};
    }
    const double n = qnorm(q);
    return canonical_sign(Quaternion{q.a / n, q.b / n, q.c / n, q.d / n});
}

Quaternion lift_biflipper(const Biflipper& b) {
    if (b.space() != Space::S2 || b.tail.kind != FlipperKind::PointPair || b.head.kind != FlipperKind::PointPair)
        fail(ErrorCode::WrongFlipperKind, "lift needs a biflipper of two antipodal pairs of S2");
    const Vector3d v = Vector3d(representative(b.tail)).normalized();
    const Vector3d w = Vector3d(representative(b.head)).normalized();
    return canonical_sign(qmul(Quaternion::pure(w), Quaternion::pure(v)));
}

} // namespace biflip
