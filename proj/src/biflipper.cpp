#include "biflip/biflipper.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace biflip {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::array<std::pair<ClassLabel, std::string_view>, 17> label_names{{
    {ClassLabel::Identity, "identity"},
    {ClassLabel::Translation, "translation"},
    {ClassLabel::Rotation, "rotation"},
    {ClassLabel::Reflection, "reflection"},
    {ClassLabel::GlideReflection, "glide-reflection"},
    {ClassLabel::PointSymmetry, "point-symmetry"},
    {ClassLabel::LineSymmetry, "line-symmetry"},
    {ClassLabel::CentralSymmetry, "central-symmetry"},
    {ClassLabel::ScrewMotion, "screw-motion"},
    {ClassLabel::RotaryReflection, "rotary-reflection"},
    {ClassLabel::GlideLineSymmetry, "glide-line-symmetry"},
    {ClassLabel::ParallelMotion, "parallel-motion"},
    {ClassLabel::HyperbolicTranslation, "hyperbolic-translation"},
    {ClassLabel::Elliptic, "elliptic"},
    {ClassLabel::Parabolic, "parabolic"},
    {ClassLabel::Loxodromic, "loxodromic"},
    {ClassLabel::OrientationReversingMoebius, "orientation-reversing-moebius"},
}};

bool near_pi(double angle, double eps) { return std::abs(std::abs(angle) - pi) < eps; }

Mat rot2(double angle) {
    Mat r(2, 2);
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

Mat affine(const Mat& lin, const Vec& shift) {
    const int d = static_cast<int>(lin.rows());
    Mat m = Mat::Identity(d + 1, d + 1);
    m.topLeftCorner(d, d) = lin;
    m.topRightCorner(d, 1) = shift;
    return m;
}

// Unit +1 eigenvector of a symmetric 2x2 or 3x3 reflection-like matrix.
Vec eigenvector_for(const Mat& m, double value) {
    const int n = static_cast<int>(m.rows());
    Eigen::JacobiSVD<Mat> svd(m - value * Mat::Identity(n, n), Eigen::ComputeFullV);
    return canonical_sign(Vec(svd.matrixV().col(n - 1)));
}

IsometryClass classify_e1(const Isometry& t, double eps) {
    IsometryClass c;
    c.space = t.space;
    const double s = t.matrix(0, 0), shift = t.matrix(0, 1);
    if (s > 0) {
        if (std::abs(shift) < eps) return c;
        c.label = ClassLabel::Translation;
        c.vector = Vec::Constant(1, shift);
        c.length = std::abs(shift);
        return c;
    }
    c.label = ClassLabel::Reflection;
    c.center = Vec::Constant(1, shift / 2.0);
    return c;
}

IsometryClass classify_e2(const Isometry& t, double eps) {
    IsometryClass c;
    c.space = t.space;
    const Mat lin = t.matrix.topLeftCorner(2, 2);
    const Vec shift = t.matrix.topRightCorner(2, 1);
    if (lin.determinant() > 0) {
        const double angle = std::atan2(lin(1, 0), lin(0, 0));
        if (std::abs(angle) < eps) {
            if (shift.norm() < eps) return c;
            c.label = ClassLabel::Translation;
            c.vector = shift;
            c.length = shift.norm();
            return c;
        }
        const Vec center = (Mat::Identity(2, 2) - lin).partialPivLu().solve(shift);
        c.center = center;
        if (near_pi(angle, eps)) {
            c.label = ClassLabel::PointSymmetry;
            c.angle = pi;
        } else {
            c.label = ClassLabel::Rotation;
            c.angle = wrap_angle(angle);
        }
        return c;
    }
    const Vec u = eigenvector_for(lin, 1.0);
    const Vec along = shift.dot(u) * u;
    const Vec across = shift - along;
    c.axis_point = Vec(across / 2.0);
    c.axis_direction = u;
    if (along.norm() < eps) {
        c.label = ClassLabel::Reflection;
    } else {
        c.label = ClassLabel::GlideReflection;
        c.vector = along;
        c.length = along.norm();
    }
    return c;
}

IsometryClass classify_e3(const Isometry& t, double eps) {
    IsometryClass c;
    c.space = t.space;
    const Mat lin = t.matrix.topLeftCorner(3, 3);
    const Vec shift = t.matrix.topRightCorner(3, 1);
    const Mat id = Mat::Identity(3, 3);
    if (lin.determinant() > 0) {
        const AxisAngle aa = axis_angle(lin);
        if (std::abs(aa.angle) < eps) {
            if (shift.norm() < eps) return c;
            c.label = ClassLabel::Translation;
            c.vector = shift;
            c.length = shift.norm();
            return c;
        }
        const Vec& u = aa.axis;
        const double tau = shift.dot(u);
        const Vec rest = shift - tau * u;
        Vec foot = (id - lin).completeOrthogonalDecomposition().solve(rest);
        foot -= foot.dot(u) * u;
        c.axis_point = foot;
        c.axis_direction = u;
        const bool half_turn = near_pi(aa.angle, eps);
        c.angle = half_turn ? pi : aa.angle;
        if (std::abs(tau) < eps) {
            c.label = half_turn ? ClassLabel::LineSymmetry : ClassLabel::Rotation;
        } else {
            c.label = half_turn ? ClassLabel::GlideLineSymmetry : ClassLabel::ScrewMotion;
            c.vector = Vec(tau * u);
            c.length = std::abs(tau);
        }
        return c;
    }
    if (max_abs(lin + id) < eps) {
        c.label = ClassLabel::CentralSymmetry;
        c.center = Vec(shift / 2.0);
        return c;
    }
    const AxisAngle aa = axis_angle(-lin);
    const Vec& u = aa.axis;
    const double angle = wrap_angle(aa.angle - pi);
    if (std::abs(angle) < eps) {
        const Vec across = shift.dot(u) * u;
        const Vec along = shift - across;
        c.axis_point = Vec(across / 2.0);
        c.normal = u;
        if (along.norm() < eps) {
            c.label = ClassLabel::Reflection;
        } else {
            c.label = ClassLabel::GlideReflection;
            c.vector = along;
            c.length = along.norm();
        }
        return c;
    }
    c.label = ClassLabel::RotaryReflection;
    c.center = Vec((id - lin).partialPivLu().solve(shift));
    c.axis_direction = u;
    c.angle = angle;
    return c;
}

IsometryClass classify_sphere(const Isometry& t, double eps) {
    IsometryClass c;
    c.space = t.space;
    Mat m = t.matrix;
    if (t.space == Space::RP2 && m.determinant() < 0) m = -m;
    const Mat id = Mat::Identity(3, 3);
    if (m.determinant() > 0) {
        const AxisAngle aa = axis_angle(m);
        if (std::abs(aa.angle) < eps) return c;
        c.label = ClassLabel::Rotation;
        c.axis_direction = aa.axis;
        c.angle = near_pi(aa.angle, eps) ? pi : aa.angle;
        return c;
    }
    if (max_abs(m + id) < eps) {
        c.label = ClassLabel::CentralSymmetry;
        return c;
    }
    const AxisAngle aa = axis_angle(-m);
    const double angle = wrap_angle(aa.angle - pi);
    if (std::abs(angle) < eps) {
        c.label = ClassLabel::Reflection;
        c.normal = aa.axis;
        return c;
    }
    c.label = ClassLabel::RotaryReflection;
    c.axis_direction = aa.axis;
    c.angle = angle;
    return c;
}

// Smallest right singular vector: the best approximate kernel vector.
Vec kernel_vector(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().col(m.cols() - 1);
}

// Foot of the perpendicular from the model origin to the line with normal n.
Vec foot_on_line(const Vec& n) {
    Vec e0 = Vec::Zero(3);
    e0(0) = 1.0;
    return normalize_timelike(Vec(e0 - (lorentz_dot(e0, n) / lorentz_dot(n, n)) * n));
}

void fill_axis_motion(IsometryClass& c, const Mat& m, const Vec& n) {
    const Vec foot = foot_on_line(n);
    const Vec moved = m * foot;
    const double ch = std::max(1.0, lorentz_dot(moved, foot));
    const double len = std::acosh(ch);
    const Vec tangent = normalize_spacelike(Vec(moved - ch * foot));
    c.axis_point = foot;
    c.axis_direction = tangent;
    c.length = len;
    // Orient the normal so that (foot, tangent, normal) is a positive frame.
    Mat frame(3, 3);
    frame << foot, tangent, n;
    c.normal = frame.determinant() > 0 ? n : Vec(-n);
}

IsometryClass classify_h2(const Isometry& t, double eps) {
    IsometryClass c;
    c.space = t.space;
    const Mat& m = t.matrix;
    const Mat id = Mat::Identity(3, 3);
    const double scale = std::max(1.0, max_abs(m));
    if (m.determinant() > 0) {
        if (max_abs(m - id) < eps * scale) return c;
        const double tr = m.trace();
        const double band = eps * scale;
        if (tr < 3.0 - band) {
            const Vec p = normalize_timelike(kernel_vector(m - id));
            const Mat b = boost_to_origin(p);
            const Mat r = b * m * b.inverse();
            c.label = ClassLabel::Rotation;
            c.center = p;
            c.angle = wrap_angle(std::atan2(r(2, 1), r(1, 1)));
            return c;
        }
        if (tr > 3.0 + band) {
            c.label = ClassLabel::HyperbolicTranslation;
            fill_axis_motion(c, m, normalize_spacelike(kernel_vector(m - id)));
            return c;
        }
        const Mat d = m - id;
        const Mat log = d - d * d / 2.0;
        Vec xi = kernel_vector(d);
        if (std::abs(xi(0)) < 1e-12) xi = kernel_vector(log);
        Vec e0 = Vec::Zero(3);
        e0(0) = 1.0;
        c.label = ClassLabel::ParallelMotion;
        c.ideal_point = normalize_null(xi);
        c.vector = Vec(-log * e0);
        c.length = std::sqrt(std::max(0.0, -lorentz_dot(*c.vector, *c.vector)));
        return c;
    }
    const Vec n = normalize_spacelike(kernel_vector(m + id));
    if (is_involution(m, eps)) {
        c.label = ClassLabel::Reflection;
        c.axis_point = foot_on_line(n);
        c.normal = canonical_sign(n);
        return c;
    }
    c.label = ClassLabel::GlideReflection;
    fill_axis_motion(c, m, n);
    return c;
}

// Coarse classes of O+(3,1). The rotational and translational parts come
// from the roots s = 2 cos(angle) and s = 2 cosh(length) of
// x^2 - tr x + (c2 - 2).
IsometryClass classify_lorentz3(const Isometry& t, double eps) {
    IsometryClass c;
    c.space = t.space;
    const Mat& m = t.matrix;
    const Mat id = Mat::Identity(4, 4);
    const double scale = std::max(1.0, max_abs(m));
    if (m.determinant() < 0) {
        c.label = ClassLabel::OrientationReversingMoebius;
        return c;
    }
    if (max_abs(m - id) < eps * scale) return c;
    const double tr = m.trace();
    const double c2 = (tr * tr - (m * m).trace()) / 2.0;
    const double disc = std::max(0.0, tr * tr - 4.0 * (c2 - 2.0));
    const double hi = (tr + std::sqrt(disc)) / 2.0;
    const double lo = (tr - std::sqrt(disc)) / 2.0;
    const double band = 1e-7 * scale;
    if (hi > 2.0 + band) {
        c.label = ClassLabel::Loxodromic;
        c.length = std::acosh(hi / 2.0);
        c.angle = std::acos(std::clamp(lo / 2.0, -1.0, 1.0));
        return c;
    }
    if (lo < 2.0 - band) {
        c.label = ClassLabel::Elliptic;
        c.angle = std::acos(std::clamp(lo / 2.0, -1.0, 1.0));
        c.length = 0.0;
        return c;
    }
    c.label = ClassLabel::Parabolic;
    c.angle = 0.0;
    c.length = 0.0;
    return c;
}

} // namespace

std::string_view to_string(ClassLabel label) {
    for (const auto& [l, name] : label_names)
        if (l == label) return name;
    return "?";
}

ClassLabel class_label_from_string(std::string_view name) {
    for (const auto& [l, n] : label_names)
        if (n == name) return l;
    fail(ErrorCode::MalformedInput, "unknown isometry class '" + std::string(name) + "'");
}

std::string_view to_string(Side side) { return side == Side::Tail ? "tail" : "head"; }

std::string_view to_string(PencilKind kind) {
    switch (kind) {
    case PencilKind::Elliptic: return "elliptic";
    case PencilKind::Parabolic: return "parabolic";
    case PencilKind::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

Biflipper make_biflipper(const Flipper& tail, const Flipper& head) {
    if (tail.space != head.space) fail(ErrorCode::SpaceMismatch, "biflipper flippers live in different spaces");
    return {tail, head};
}

Biflipper swapped(const Biflipper& b) { return {b.head, b.tail}; }

Isometry encode(const Biflipper& b) {
    if (b.tail.space != b.head.space) fail(ErrorCode::SpaceMismatch, "biflipper flippers live in different spaces");
    return flip_of(b.head) * flip_of(b.tail);
}

IsometryClass classify(const Isometry& t, double eps) {
    validate(t);
    switch (t.space) {
    case Space::E1: return classify_e1(t, eps);
    case Space::E2: return classify_e2(t, eps);
    case Space::E3: return classify_e3(t, eps);
    case Space::S2:
    case Space::RP2: return classify_sphere(t, eps);
    case Space::H2: return classify_h2(t, eps);
    case Space::H3:
    case Space::Moeb: return classify_lorentz3(t, eps);
    }
    fail(ErrorCode::UnsupportedSpace, "unknown space");
}


namespace {

Mat h2_parallel_matrix(const Vec& xi, const Vec& w) {
    const Mat g = BilinearForm::lorentz(2).gram();
    const Mat n = xi * (g * w).transpose() - w * (g * xi).transpose();
    return Mat::Identity(3, 3) + n + n * n / 2.0;
}

template <class T>
const T& need(const std::optional<T>& v, const char* what) {
    if (!v) fail(ErrorCode::MalformedInput, std::string("class data lacks '") + what + "'");
    return *v;
}

Isometry synthesize_h2(const IsometryClass& c) {
    const Mat id = Mat::Identity(3, 3);
    switch (c.label) {
    case ClassLabel::Identity: return {c.space, id};
    case ClassLabel::Rotation: {
        const Mat b = boost_to_origin(normalize_timelike(need(c.center, "center")));
        Mat r = id;
        r.bottomRightCorner(2, 2) = rot2(need(c.angle, "angle"));
        return {c.space, b.inverse() * r * b};
    }
    case ClassLabel::HyperbolicTranslation:
    case ClassLabel::GlideReflection: {
        const Vec foot = normalize_timelike(need(c.axis_point, "axis_point"));
        const Vec tangent = normalize_spacelike(need(c.axis_direction, "axis_direction"));
        const Vec nrm = normalize_spacelike(lorentz_cross(foot, tangent));
        const double len = need(c.length, "length");
        Mat frame(3, 3);
        frame << foot, tangent, nrm;
        Mat d = id;
        d(0, 0) = d(1, 1) = std::cosh(len);
        d(0, 1) = d(1, 0) = std::sinh(len);
        if (c.label == ClassLabel::GlideReflection) d(2, 2) = -1.0;
        return {c.space, frame * d * frame.inverse()};
    }
    case ClassLabel::Reflection:
        return flip_of(polar_flipper(Space::H2, need(c.normal, "normal")));
    case ClassLabel::ParallelMotion:
        return {c.space, h2_parallel_matrix(normalize_null(need(c.ideal_point, "ideal_point")),
                                            need(c.vector, "vector"))};
    default: break;
    }
    fail(ErrorCode::InvalidIsometry, "label does not apply to H2");
}

} // namespace

Isometry synthesize(const IsometryClass& c) {
    const Space s = c.space;
    switch (s) {
    case Space::E1: {
        Mat m = Mat::Identity(2, 2);
        if (c.label == ClassLabel::Translation) m(0, 1) = need(c.vector, "vector")(0);
        else if (c.label == ClassLabel::Reflection) {
            m(0, 0) = -1.0;
            m(0, 1) = 2.0 * need(c.center, "center")(0);
        } else if (c.label != ClassLabel::Identity) break;
        return {s, m};
    }
    case Space::E2: {
        const Mat id = Mat::Identity(2, 2);
        switch (c.label) {
        case ClassLabel::Identity: return Isometry::identity(s);
        case ClassLabel::Translation: return {s, affine(id, need(c.vector, "vector"))};
        case ClassLabel::Rotation:
        case ClassLabel::PointSymmetry: {
            const Mat lin = rot2(need(c.angle, "angle"));
            return {s, affine(lin, (id - lin) * need(c.center, "center"))};
        }
        case ClassLabel::Reflection:
        case ClassLabel::GlideReflection: {
            const Vec u = need(c.axis_direction, "axis_direction").normalized();
            const Mat lin = 2.0 * u * u.transpose() - id;
            Vec shift = (id - lin) * need(c.axis_point, "axis_point");
            if (c.label == ClassLabel::GlideReflection) shift += need(c.vector, "vector");
            return {s, affine(lin, shift)};
        }
        default: break;
        }
        break;
    }
    case Space::E3: {
        const Mat id = Mat::Identity(3, 3);
        switch (c.label) {
        case ClassLabel::Identity: return Isometry::identity(s);
        case ClassLabel::Translation: return {s, affine(id, need(c.vector, "vector"))};
        case ClassLabel::Rotation:
        case ClassLabel::LineSymmetry:
        case ClassLabel::ScrewMotion:
        case ClassLabel::GlideLineSymmetry: {
            const Mat lin = rotation_matrix(need(c.axis_direction, "axis_direction"), need(c.angle, "angle"));
            Vec shift = (id - lin) * need(c.axis_point, "axis_point");
            if (c.vector) shift += *c.vector;
            return {s, affine(lin, shift)};
        }
        case ClassLabel::Reflection:
        case ClassLabel::GlideReflection: {
            const Vec n = need(c.normal, "normal").normalized();
            const Mat lin = id - 2.0 * n * n.transpose();
            Vec shift = (id - lin) * need(c.axis_point, "axis_point");
            if (c.vector) shift += *c.vector;
            return {s, affine(lin, shift)};
        }
        case ClassLabel::RotaryReflection: {
            const Vec u = need(c.axis_direction, "axis_direction").normalized();
            const Mat lin = rotation_matrix(u, need(c.angle, "angle")) * (id - 2.0 * u * u.transpose());
            return {s, affine(lin, (id - lin) * need(c.center, "center"))};
        }
        case ClassLabel::CentralSymmetry:
            return {s, affine(-id, 2.0 * need(c.center, "center"))};
        default: break;
        }
        break;
    }
    case Space::S2:
    case Space::RP2: {
        const Mat id = Mat::Identity(3, 3);
        switch (c.label) {
        case ClassLabel::Identity: return {s, id};
        case ClassLabel::Rotation:
            return {s, rotation_matrix(need(c.axis_direction, "axis_direction"), need(c.angle, "angle"))};
        case ClassLabel::Reflection: {
            const Vec n = need(c.normal, "normal").normalized();
            return {s, id - 2.0 * n * n.transpose()};
        }
        case ClassLabel::RotaryReflection: {
            const Vec u = need(c.axis_direction, "axis_direction").normalized();
            return {s, rotation_matrix(u, need(c.angle, "angle")) * (id - 2.0 * u * u.transpose())};
        }
        case ClassLabel::CentralSymmetry: return {s, -id};
        default: break;
        }
        break;
    }
    case Space::H2: return synthesize_h2(c);
    case Space::H3:
    case Space::Moeb:
        if (c.label == ClassLabel::Identity) return Isometry::identity(s);
        fail(ErrorCode::UnsupportedSpace, "coarse classes of " + std::string(to_string(s)) + " do not determine an isometry");
    }
    fail(ErrorCode::InvalidIsometry,
         "label " + std::string(to_string(c.label)) + " does not apply to " + std::string(to_string(s)));
}

// ---------------------------------------------------------------------------

namespace {

Biflipper with_tail(const Isometry& t, const Flipper& tail) {
    return {tail, flipper_of_involution(t * flip_of(tail))};
}

Vec unit(int n, int i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    return e;
}

bool contains_timelike(const Mat& k) {
    if (k.cols() == 0) return false;
    const Mat g = BilinearForm::lorentz(static_cast<int>(k.rows()) - 1).gram();
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(k.transpose() * g * k));
    const auto& ev = es.eigenvalues();
    return ev.maxCoeff() > 1e-9 && ev.cwiseAbs().minCoeff() > 1e-9;
}

// Column space of a rank-r matrix.
Mat range_of(const Mat& m, int rank) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU);
    return svd.matrixU().leftCols(rank);
}

Biflipper decompose_lorentz3(const Isometry& t) {
    const Space space = t.space;
    const Mat& m = t.matrix;
    const Mat id = Mat::Identity(4, 4);
    const BilinearForm form = BilinearForm::lorentz(3);
    const Mat g = form.gram();
    const double scale = std::max(1.0, max_abs(m));
    const Vec e0 = unit(4, 0);
    if (max_abs(m - id) < 1e-12 * scale) return {whole_flipper(space), whole_flipper(space)};

    const Mat k = null_space(m - id);
    if (contains_timelike(k)) {
        const Vec p = normalize_timelike(projector(LinearSubspace{k, 4}, form) * e0);
        const Mat b = boost_to_origin(p);
        const Mat binv = b.inverse();
        const Mat r3 = (b * m * binv).bottomRightCorner(3, 3);
        Vec e(3);
        if (r3.determinant() > 0) {
            e = reference_perpendicular(axis_angle(r3).axis);
        } else if (max_abs(r3 + Mat::Identity(3, 3)) < 1e-9) {
            e << 1.0, 0.0, 0.0;
        } else {
            e = reference_perpendicular(axis_angle(-r3).axis);
        }
        Mat fixed = Mat::Zero(4, 2);
        fixed(0, 0) = 1.0;
        fixed.block(1, 1, 3, 1) = e;
        return with_tail(t, flipper_from_fixed(space, LinearSubspace{binv * fixed, 4}));
    }

    const Mat s = m + g * m.transpose() * g;
    const double tr = m.trace();
    const double band = 1e-9 * scale;
    const bool preserving = m.determinant() > 0;
    Mat pa;
    bool loxodromic = false;
    if (preserving) {
        const double c2 = (tr * tr - (m * m).trace()) / 2.0;
        const double disc = std::max(0.0, tr * tr - 4.0 * (c2 - 2.0));
        const double hi = (tr + std::sqrt(disc)) / 2.0, lo = (tr - std::sqrt(disc)) / 2.0;
        if (hi > 2.0 + band) {
            loxodromic = true;
            pa = (s - lo * id) / (hi - lo);
        }
    } else if (tr > 2.0 + band) {
        loxodromic = true;
        pa = (s - 2.0 * id) * (s + 2.0 * id) / ((tr - 2.0) * (tr + 2.0));
    }
    if (loxodromic) {
        const Vec t0 = normalize_timelike(pa * e0);
        const Mat q = id - pa;
        if (preserving) {
            int best = 0;
            for (int j = 1; j < 4; ++j)
                if (q.col(j).norm() > q.col(best).norm() + 1e-12) best = j;
            Mat fixed(4, 2);
            fixed << t0, normalize_spacelike(q.col(best));
            return with_tail(t, flipper_from_fixed(space, LinearSubspace{fixed, 4}));
        }
        Mat fixed(4, 3);
        fixed << t0, range_of(q, 2);
        return with_tail(t, flipper_from_fixed(space, LinearSubspace{fixed, 4}));
    }

    // Parabolic.
    if (preserving) {
        const Mat kk = null_space(m - id, 1e-6);
        Eigen::SelfAdjointEigenSolver<Mat> es(Mat(kk.transpose() * g * kk));
        int idx = 0;
        for (int i = 1; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(idx))) idx = i;
        const Vec xi = normalize_null(kk * es.eigenvectors().col(idx));
        Mat fixed(4, 2);
        fixed << xi, e0;
        return with_tail(t, flipper_from_fixed(space, LinearSubspace{fixed, 4}));
    }
    const Vec mv = kernel_vector(m + id);
    const Vec q = e0 - (lorentz_dot(e0, mv) / lorentz_dot(mv, mv)) * mv;
    const Vec xi = normalize_null(kernel_vector(m - id));
    Mat fixed(4, 2);
    fixed << xi, q;
    return with_tail(t, flipper_from_fixed(space, LinearSubspace{fixed, 4}));
}

Biflipper decompose_h2(const Isometry& t, const IsometryClass& c) {
    const Space s = t.space;
    switch (c.label) {
    case ClassLabel::Rotation: {
        const Mat binv = boost_to_origin(*c.center).inverse();
        return with_tail(t, polar_flipper(s, Vec(binv * unit(3, 2))));
    }
    case ClassLabel::ParallelMotion:
        return with_tail(t, polar_flipper(s, lorentz_cross(*c.ideal_point, unit(3, 0))));
    default: return with_tail(t, point_flipper(s, *c.axis_point));
    }
}

// T = F_B o (F_B o T) with B the perpendicular bisector of the origin and
// its image; F_B o T is a reflection in a line through the origin.
Biflipper bisector_pair(const Isometry& t) {
    const Vec e0 = unit(3, 0);
    const Vec q = t.matrix * e0;
    const Flipper head = polar_flipper(t.space, Vec(e0 - q));
    const Isometry rest = flip_of(head) * t;
    return {polar_flipper(t.space, kernel_vector(rest.matrix + Mat::Identity(3, 3))), head};
}

} // namespace

Biflipper decompose(const Isometry& t) {
    const Space s = t.space;
    if (s == Space::H3 || s == Space::Moeb) {
        validate(t);
        return decompose_lorentz3(t);
    }
    const IsometryClass c = classify(t);
    const Flipper whole = whole_flipper(s);
    if (c.label == ClassLabel::Identity) return {whole, whole};
    switch (s) {
    case Space::E1:
        if (c.label == ClassLabel::Translation)
            return {point_flipper(s, Vec::Zero(1)), point_flipper(s, Vec(*c.vector / 2.0))};
        return {point_flipper(s, *c.center), whole};
    case Space::E2:
        switch (c.label) {
        case ClassLabel::Translation:
            return {point_flipper(s, Vec::Zero(2)), point_flipper(s, Vec(*c.vector / 2.0))};
        case ClassLabel::Rotation:
        case ClassLabel::PointSymmetry:
            return with_tail(t, line_flipper(s, *c.center, unit(2, 0)));
        default: return with_tail(t, point_flipper(s, *c.axis_point));
        }
    case Space::E3:
        switch (c.label) {
        case ClassLabel::Translation:
            return {point_flipper(s, Vec::Zero(3)), point_flipper(s, Vec(*c.vector / 2.0))};
        case ClassLabel::Rotation:
        case ClassLabel::LineSymmetry:
        case ClassLabel::ScrewMotion:
        case ClassLabel::GlideLineSymmetry:
            return with_tail(t, line_flipper(s, *c.axis_point, reference_perpendicular(*c.axis_direction)));
        case ClassLabel::RotaryReflection:
            return with_tail(t, line_flipper(s, *c.center, reference_perpendicular(*c.axis_direction)));
        case ClassLabel::CentralSymmetry: return with_tail(t, line_flipper(s, *c.center, unit(3, 0)));
        default: return with_tail(t, point_flipper(s, *c.axis_point));
        }
    case Space::S2: {
        if (c.label == ClassLabel::CentralSymmetry) return with_tail(t, pair_flipper(unit(3, 0)));
        const Vec u = c.normal ? *c.normal : *c.axis_direction;
        return with_tail(t, pair_flipper(reference_perpendicular(u)));
    }
    case Space::RP2:
        return with_tail(t, point_flipper(s, reference_perpendicular(*c.axis_direction)));
    case Space::H2: {
        Biflipper b;
        try {
            b = decompose_h2(t, c);
        } catch (const GeometryError&) {
            if (t.matrix.determinant() < 0) throw;
            return bisector_pair(t);
        }
        // Near-parabolic maps leave the class data poorly conditioned.
        const double scale = std::max(1.0, max_abs(t.matrix));
        if (t.matrix.determinant() > 0 && distance(encode(b), t) > 1e-10 * scale) {
            const Biflipper alt = bisector_pair(t);
            if (distance(encode(alt), t) < distance(encode(b), t)) return alt;
        }
        return b;
    }
    default: break;
    }
    fail(ErrorCode::NotInvolutionCompatible, "no canonical biflipper for this isometry");
}

// ---------------------------------------------------------------------------

bool equivalent(const Biflipper& a, const Biflipper& b, Tolerance tol) {
    if (a.space() != b.space()) fail(ErrorCode::SpaceMismatch, "biflippers live in different spaces");
    return approx_equal(encode(a), encode(b), tol);
}

Biflipper transform_commuting(const Biflipper& b, const Flipper& c, double eps) {
    if (c.space != b.space()) fail(ErrorCode::SpaceMismatch, "flipper lives in another space");
    const Isometry fc = flip_of(c), fa = flip_of(b.tail), fb = flip_of(b.head);
    if (!commute(fc, fa, eps) || !commute(fc, fb, eps))
        fail(ErrorCode::NotCommuting, "the flip does not commute with both flips of the biflipper");
    return {flipper_of_involution(fa * fc), flipper_of_involution(fb * fc)};
}

Biflipper conjugate(const Biflipper& b, const Isometry& t, double eps) {
    if (t.space != b.space()) fail(ErrorCode::SpaceMismatch, "isometry lives in another space");
    const Isometry s = encode(b);
    bool ok = commute(t, s, eps);
    if (!ok && t.space == Space::RP2) {
        const double scale = std::max(1.0, max_abs(t.matrix) * max_abs(s.matrix));
        ok = max_abs(t.matrix * s.matrix + s.matrix * t.matrix) <= eps * scale;
    }
    if (!ok) fail(ErrorCode::NotInCentralizer, "the isometry does not commute with the encoded isometry");
    return {image(t, b.tail), image(t, b.head)};
}

Biflipper rebase(const Isometry& t, const Flipper& e, Side side, double eps) {
    if (t.space != e.space) fail(ErrorCode::SpaceMismatch, "isometry and flipper live in different spaces");
    const Isometry fe = flip_of(e);
    const Isometry product = side == Side::Tail ? t * fe : fe * t;
    try {
        const Flipper other = flipper_of_involution(product, eps);
        return side == Side::Tail ? Biflipper{e, other} : Biflipper{other, e};
    } catch (const GeometryError& err) {
        if (err.code() == ErrorCode::NotInvolution || err.code() == ErrorCode::EmptyFixedSet)
            fail(ErrorCode::NotCompatible, std::string("flipper is not compatible: ") + err.what());
        throw;
    }
}

std::optional<std::pair<Flipper, Flipper>> strong_reversibility_witness(const Isometry& t) {
    const Biflipper b = decompose(t);
    return std::make_pair(b.tail, b.head);
}

namespace {

Space euclidean_of_dim(int d) {
    switch (d) {
    case 1: return Space::E1;
    case 2: return Space::E2;
    case 3: return Space::E3;
    default: fail(ErrorCode::UnsupportedSpace, "products beyond dimension three are not supported");
    }
}

} // namespace

Flipper product_flipper(const Flipper& first, const Flipper& second) {
    if (!is_euclidean(first.space) || !is_euclidean(second.space))
        fail(ErrorCode::NonEuclideanFactor, "direct products need Euclidean factors");
    const int k = intrinsic_dim(first.space), l = intrinsic_dim(second.space);
    const Space space = euclidean_of_dim(k + l);
    Vec anchor(k + l);
    anchor << first.anchor, second.anchor;
    Mat basis = Mat::Zero(k + l, first.dim() + second.dim());
    basis.topLeftCorner(k, first.dim()) = first.basis;
    basis.bottomRightCorner(l, second.dim()) = second.basis;
    return affine_flipper(space, {anchor, LinearSubspace{basis, k + l}});
}

Biflipper product_biflipper(const Biflipper& first, const Biflipper& second) {
    return {product_flipper(first.tail, second.tail), product_flipper(first.head, second.head)};
}

Isometry product_isometry(const Isometry& first, const Isometry& second) {
    if (!is_euclidean(first.space) || !is_euclidean(second.space))
        fail(ErrorCode::NonEuclideanFactor, "direct products need Euclidean factors");
    const int k = intrinsic_dim(first.space), l = intrinsic_dim(second.space);
    const Space space = euclidean_of_dim(k + l);
    Mat m = Mat::Identity(k + l + 1, k + l + 1);
    m.topLeftCorner(k, k) = first.matrix.topLeftCorner(k, k);
    m.block(k, k, l, l) = second.matrix.topLeftCorner(l, l);
    m.block(0, k + l, k, 1) = first.matrix.topRightCorner(k, 1);
    m.block(k, k + l, l, 1) = second.matrix.topRightCorner(l, 1);
    return {space, m};
}

// ---------------------------------------------------------------------------

bool Pencil::contains(const Flipper& line, double eps) const {
    if (line.space != Space::H2 || line.kind != FlipperKind::Line) return false;
    const Vec m = normal(line);
    const double scale = std::max(1.0, max_abs(carrier) * max_abs(m));
    return std::abs(lorentz_dot(m, carrier)) <= eps * scale;
}

Flipper Pencil::line_through(const Vec& point) const {
    const Vec m = lorentz_cross(carrier, point);
    if (!(lorentz_dot(m, m) < -1e-18))
        fail(ErrorCode::InvalidFlipper, "the point does not determine a line of the pencil");
    return polar_flipper(Space::H2, m);
}

Pencil invariant_pencil(const Isometry& t, double eps) {
    if (t.space != Space::H2) fail(ErrorCode::UnsupportedSpace, "invariant pencils are defined for H2");
    const IsometryClass c = classify(t, eps);
    switch (c.label) {
    case ClassLabel::Identity: fail(ErrorCode::IdentityHasNoPencil, "the identity preserves every line");
    case ClassLabel::Rotation: return {PencilKind::Elliptic, *c.center};
    case ClassLabel::ParallelMotion: return {PencilKind::Parabolic, *c.ideal_point};
    default: return {PencilKind::Hyperbolic, normalize_spacelike(*c.normal)};
    }
}

} // namespace biflip
