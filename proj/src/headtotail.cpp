#include "biflip/headtotail.hpp"

#include <cmath>
#include <functional>

namespace biflip {

std::string_view to_string(MoveKind kind) {
    switch (kind) {
    case MoveKind::RotateAboutCenter: return "rotate-about-center";
    case MoveKind::TranslateAlongAxis: return "translate-along-axis";
    case MoveKind::ScrewAdjust: return "screw-adjust";
    case MoveKind::Rebase: return "rebase";
    case MoveKind::CommutingTransform: return "commuting-transform";
    }
    return "?";
}

std::string_view to_string(MoveTarget target) {
    switch (target) {
    case MoveTarget::First: return "first";
    case MoveTarget::Second: return "second";
    case MoveTarget::Middle: return "middle";
    case MoveTarget::Result: return "result";
    }
    return "?";
}

namespace {

struct LineData {
    Vec point;
    Vec dir;
};

Vec unit(int n, int i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    return e;
}

bool links(const Isometry& s, const Isometry& t, const Flipper& e) {
    try {
        rebase(t, e, Side::Head);
        rebase(s, e, Side::Tail);
        return true;
    } catch (const GeometryError&) {
        return false;
    }
}

using Candidates = std::vector<std::function<Flipper()>>;

std::optional<Flipper> first_link(const Isometry& s, const Isometry& t, const Candidates& candidates) {
    for (const auto& make : candidates) {
        try {
            const Flipper e = make();
            if (links(s, t, e)) return e;
        } catch (const GeometryError&) {
        }
    }
    return std::nullopt;
}

MoveKind kind_for(const Isometry& t, const Biflipper& before, const Biflipper& after) {
    if (before.tail.kind != after.tail.kind || before.head.kind != after.head.kind) return MoveKind::Rebase;
    if (t.space == Space::H3 || t.space == Space::Moeb) return MoveKind::Rebase;
    switch (classify(t).label) {
    case ClassLabel::Rotation:
        return t.space == Space::E3 ? MoveKind::ScrewAdjust : MoveKind::RotateAboutCenter;
    case ClassLabel::PointSymmetry: return MoveKind::RotateAboutCenter;
    case ClassLabel::LineSymmetry:
    case ClassLabel::ScrewMotion:
    case ClassLabel::GlideLineSymmetry: return MoveKind::ScrewAdjust;
    case ClassLabel::Translation:
    case ClassLabel::HyperbolicTranslation:
    case ClassLabel::GlideReflection:
    case ClassLabel::Reflection:
    case ClassLabel::ParallelMotion: return MoveKind::TranslateAlongAxis;
    default: return MoveKind::Rebase;
    }
}

// Joins two biflippers at the common flipper e.
H2TResult join(const Biflipper& first, const Biflipper& second, const Flipper& e) {
    const Isometry t = encode(first), s = encode(second);
    const Biflipper moved_first = rebase(t, e, Side::Head);
    const Biflipper moved_second = rebase(s, e, Side::Tail);
    H2TResult r;
    r.steps.push_back({kind_for(t, first, moved_first), MoveTarget::First, first, moved_first});
    r.steps.push_back({kind_for(s, second, moved_second), MoveTarget::Second, second, moved_second});
    r.biflipper = {moved_first.tail, moved_second.head};
    return r;
}

void append(H2TResult& into, const H2TResult& from) {
    into.steps.insert(into.steps.end(), from.steps.begin(), from.steps.end());
    into.biflipper = from.biflipper;
}

H2TResult direct(const Isometry& s, const Isometry& t) {
    H2TResult r;
    r.biflipper = decompose(s * t);
    r.steps.push_back({MoveKind::Rebase, MoveTarget::Result, r.biflipper, r.biflipper});
    return r;
}

bool sound(const H2TResult& r, const Isometry& s, const Isometry& t) {
    const Isometry target = s * t;
    const double scale = std::max(1.0, max_abs(target.matrix));
    return distance(encode(r.biflipper), target, target.space == Space::RP2) <= 1e-8 * scale;
}

// ---- common perpendiculars ----

LineData perpendicular_data(const Vec& p1, const Vec& u1, const Vec& p2, const Vec& u2) {
    const Vec a = u1.normalized(), b = u2.normalized();
    const Vec w = Vec(cross3(a, b));
    if (w.norm() > 1e-9) {
        const Vec r = p2 - p1;
        const double k = a.dot(b), d = a.dot(r), e = b.dot(r);
        const double s = (d - k * e) / (1.0 - k * k);
        return {Vec(p1 + s * a), Vec(w.normalized())};
    }
    Vec across = (p2 - p1) - (p2 - p1).dot(a) * a;
    if (across.norm() < 1e-9) across = reference_perpendicular(a);
    return {p1, Vec(across.normalized())};
}

} // namespace

Flipper common_perpendicular(const Vec& p1, const Vec& u1, const Vec& p2, const Vec& u2) {
    const LineData z = perpendicular_data(p1, u1, p2, u2);
    return line_flipper(Space::E3, z.point, z.dir);
}

namespace {

// ---- E1 ----

Candidates candidates_e1(const Isometry& s, const Isometry& t) {
    Candidates out{[] { return point_flipper(Space::E1, Vec::Zero(1)); }, [] { return whole_flipper(Space::E1); }};
    for (const Isometry* m : {&t, &s}) {
        const IsometryClass c = classify(*m);
        if (c.center) out.push_back([p = *c.center] { return point_flipper(Space::E1, p); });
    }
    return out;
}

// ---- E2 ----

Vec perp2(const Vec& u) {
    Vec n(2);
    n << -u(1), u(0);
    return n;
}

Candidates candidates_e2(const Isometry& s, const Isometry& t) {
    const IsometryClass ct = classify(t), cs = classify(s);
    const Space sp = Space::E2;
    auto has_center = [](const IsometryClass& c) { return c.center.has_value(); };
    auto has_axis = [](const IsometryClass& c) { return c.axis_point.has_value(); };
    auto is_shift = [](const IsometryClass& c) { return c.label == ClassLabel::Translation; };
    Candidates out;
    if (has_center(ct) && has_center(cs)) {
        const Vec c1 = *ct.center, c2 = *cs.center;
        if ((c2 - c1).norm() > 1e-9) out.push_back([=] { return line_flipper(sp, c1, Vec(c2 - c1)); });
        out.push_back([=] { return line_flipper(sp, c1, unit(2, 0)); });
    } else if (has_center(ct) || has_center(cs)) {
        const IsometryClass& rot = has_center(ct) ? ct : cs;
        const IsometryClass& other = has_center(ct) ? cs : ct;
        const Vec c = *rot.center;
        if (is_shift(other)) out.push_back([=] { return line_flipper(sp, c, perp2(*other.vector)); });
        if (has_axis(other)) out.push_back([=] { return line_flipper(sp, c, perp2(*other.axis_direction)); });
    } else if (is_shift(ct) && is_shift(cs)) {
        out.push_back([] { return point_flipper(Space::E2, Vec::Zero(2)); });
    } else if (has_axis(ct) && has_axis(cs)) {
        const Vec p1 = *ct.axis_point, u1 = *ct.axis_direction, p2 = *cs.axis_point, u2 = *cs.axis_direction;
        Mat m(2, 2);
        m << u1, -u2;
        if (std::abs(m.determinant()) > 1e-12) {
            const Vec st = m.partialPivLu().solve(Vec(p2 - p1));
            out.push_back([=] { return point_flipper(sp, Vec(p1 + st(0) * u1)); });
        } else {
            out.push_back([=] { return line_flipper(sp, p1, perp2(u1)); });
        }
    } else {
        const IsometryClass& ax = has_axis(ct) ? ct : cs;
        if (has_axis(ax)) out.push_back([p = *ax.axis_point] { return point_flipper(Space::E2, p); });
    }
    return out;
}

// ---- S2 and RP2 ----

Candidates candidates_sphere(const Isometry& s, const Isometry& t) {
    const Space sp = s.space;
    auto axis_of = [](const IsometryClass& c) -> std::optional<Vec> {
        if (c.axis_direction) return c.axis_direction;
        if (c.normal) return c.normal;
        return std::nullopt;
    };
    const auto a1 = axis_of(classify(t)), a2 = axis_of(classify(s));
    auto make = [sp](const Vec& v) {
        return sp == Space::S2 ? pair_flipper(v) : point_flipper(sp, v);
    };
    Candidates out;
    if (a1 && a2) {
        const Vec w = Vec(cross3(*a1, *a2));
        if (w.norm() > 1e-9) out.push_back([=] { return make(w); });
        out.push_back([=] { return make(reference_perpendicular(*a1)); });
    } else if (a1 || a2) {
        const Vec a = a1 ? *a1 : *a2;
        out.push_back([=] { return make(reference_perpendicular(a)); });
    } else {
        out.push_back([=] { return make(unit(3, 0)); });
    }
    return out;
}

// ---- H2 ----

enum class H2Shape { Identity, Rotation, Parallel, Axis };

H2Shape h2_shape(const IsometryClass& c) {
    switch (c.label) {
    case ClassLabel::Identity: return H2Shape::Identity;
    case ClassLabel::Rotation: return H2Shape::Rotation;
    case ClassLabel::ParallelMotion: return H2Shape::Parallel;
    default: return H2Shape::Axis;
    }
}

Candidates candidates_h2(const Isometry& s, const Isometry& t) {
    const IsometryClass ct = classify(t), cs = classify(s);
    const H2Shape a = h2_shape(ct), b = h2_shape(cs);
    const Space sp = Space::H2;
    Candidates out;
    if (a == H2Shape::Rotation && b == H2Shape::Rotation) {
        const Vec p1 = *ct.center, p2 = *cs.center;
        if ((p1 - p2).norm() > 1e-9) out.push_back([=] { return polar_flipper(sp, lorentz_cross(p1, p2)); });
        out.push_back([=] { return invariant_pencil(t).line_through(p1); });
        return out;
    }
    if (a == H2Shape::Rotation || b == H2Shape::Rotation) {
        const Vec p = a == H2Shape::Rotation ? *ct.center : *cs.center;
        const Isometry other = a == H2Shape::Rotation ? s : t;
        out.push_back([=] { return invariant_pencil(other).line_through(p); });
        return out;
    }
    if (a == H2Shape::Parallel && b == H2Shape::Parallel) {
        const Vec x1 = *ct.ideal_point, x2 = *cs.ideal_point;
        const Vec e0 = unit(3, 0);
        if ((normalize_null(x1) - normalize_null(x2)).norm() < 1e-9)
            out.push_back([=] { return polar_flipper(sp, lorentz_cross(x1, e0)); });
        else
            out.push_back([=] { return polar_flipper(sp, lorentz_cross(x1, x2)); });
        return out;
    }
    if (a == H2Shape::Axis && b == H2Shape::Axis) {
        const Vec n1 = normalize_spacelike(*ct.normal), n2 = normalize_spacelike(*cs.normal);
        const double k = std::abs(lorentz_dot(n1, n2));
        if ((n1 - n2).norm() < 1e-9 || (n1 + n2).norm() < 1e-9) {
            out.push_back([=] { return point_flipper(sp, *ct.axis_point); });
        } else if (k < 1.0 - 1e-9) {
            out.push_back([=] { return point_flipper(sp, normalize_timelike(lorentz_cross(n1, n2))); });
        } else if (k > 1.0 + 1e-9) {
            out.push_back([=] { return polar_flipper(sp, lorentz_cross(n1, n2)); });
        }
        return out;
    }
    if ((a == H2Shape::Parallel && b == H2Shape::Axis) || (a == H2Shape::Axis && b == H2Shape::Parallel)) {
        const Vec xi = normalize_null(a == H2Shape::Parallel ? *ct.ideal_point : *cs.ideal_point);
        const Vec n = normalize_spacelike(a == H2Shape::Axis ? *ct.normal : *cs.normal);
        if (std::abs(lorentz_dot(xi, n)) > 1e-9) out.push_back([=] { return polar_flipper(sp, lorentz_cross(xi, n)); });
    }
    return out;
}

// ---- E3 ----

struct Features {
    std::optional<Vec> center;
    std::optional<LineData> axis;
    std::optional<LineData> plane;   // point and normal
    std::optional<Vec> shift;
};

Features features_e3(const IsometryClass& c) {
    Features f;
    switch (c.label) {
    case ClassLabel::Translation: f.shift = c.vector; break;
    case ClassLabel::Rotation:
    case ClassLabel::LineSymmetry:
    case ClassLabel::ScrewMotion:
    case ClassLabel::GlideLineSymmetry:
        f.axis = LineData{*c.axis_point, *c.axis_direction};
        break;
    case ClassLabel::Reflection:
    case ClassLabel::GlideReflection:
        f.plane = LineData{*c.axis_point, *c.normal};
        f.shift = c.vector;
        break;
    case ClassLabel::RotaryReflection:
        f.center = c.center;
        f.axis = LineData{*c.center, *c.axis_direction};
        f.plane = LineData{*c.center, *c.axis_direction};
        break;
    case ClassLabel::CentralSymmetry: f.center = c.center; break;
    default: break;
    }
    return f;
}

// Common flipper of two orientation-preserving isometries of E3.
Candidates candidates_e3_preserving(const Features& f1, const Features& f2) {
    const Space sp = Space::E3;
    Candidates out;
    auto dir_of = [](const Features& f) { return f.axis ? f.axis->dir : Vec(f.shift->normalized()); };
    if (f1.axis && f2.axis) {
        const LineData x = *f1.axis, y = *f2.axis;
        out.push_back([=] { return common_perpendicular(x.point, x.dir, y.point, y.dir); });
    } else if ((f1.axis || f1.shift) && (f2.axis || f2.shift)) {
        const Vec p = f1.axis ? f1.axis->point : (f2.axis ? f2.axis->point : Vec(Vec::Zero(3)));
        const Vec u1 = dir_of(f1), u2 = dir_of(f2);
        const Vec w = Vec(cross3(u1, u2));
        if (w.norm() > 1e-9) {
            out.push_back([=] { return line_flipper(sp, p, w); });
        } else if (f1.axis && f2.shift) {
            out.push_back([=] { return line_flipper(sp, p, reference_perpendicular(u1)); });
        } else if (f2.axis && f1.shift) {
            out.push_back([=] { return line_flipper(sp, p, reference_perpendicular(u2)); });
        } else {
            out.push_back([=] { return line_flipper(sp, p, reference_perpendicular(u1)); });
        }
    }
    return out;
}

Vec project_to_plane(const Vec& x, const LineData& plane) {
    const Vec n = plane.dir.normalized();
    return x - (x - plane.point).dot(n) * n;
}

// Candidate points, lines and planes built from the invariant data of both maps.
Candidates candidates_e3_general(const Features& f1, const Features& f2) {
    const Space sp = Space::E3;
    Candidates out;
    for (const auto& [a, b] : {std::pair{&f1, &f2}, std::pair{&f2, &f1}}) {
        const Features fa = *a, fb = *b;
        if (fa.center) {
            const Vec c = *fa.center;
            out.push_back([=] { return point_flipper(sp, c); });
            if (fb.plane) {
                out.push_back([=] { return point_flipper(sp, project_to_plane(c, *fb.plane)); });
                out.push_back([=] { return line_flipper(sp, c, fb.plane->dir); });
            }
            if (fb.center) {
                out.push_back([=] { return line_flipper(sp, c, Vec(*fb.center - c)); });
            }
            if (fb.axis) {
                const LineData y = *fb.axis;
                const Vec foot = y.point + (c - y.point).dot(y.dir) * y.dir;
                out.push_back([=] { return line_flipper(sp, c, Vec(foot - c)); });
                out.push_back([=] { return line_flipper(sp, c, y.dir); });
                if (fa.axis) {
                    out.push_back([=] { return line_flipper(sp, c, Vec(cross3(fa.axis->dir, y.dir))); });
                    out.push_back([=] { return plane_flipper(c, Vec(cross3(fa.axis->dir, Vec(foot - c)))); });
                    out.push_back([=] { return plane_flipper(c, Vec(cross3(fa.axis->dir, y.dir))); });
                }
            }
            if (fa.axis) {
                const Vec u = fa.axis->dir;
                out.push_back([=] { return line_flipper(sp, c, reference_perpendicular(u)); });
                out.push_back([=] { return plane_flipper(c, reference_perpendicular(u)); });
                if (fb.center) out.push_back([=] { return plane_flipper(c, Vec(cross3(u, Vec(*fb.center - c)))); });
                if (fb.plane) out.push_back([=] { return plane_flipper(c, Vec(cross3(u, fb.plane->dir))); });
            }
        }
        if (fa.axis && fb.plane) {
            const LineData x = *fa.axis, p = *fb.plane;
            const double den = x.dir.dot(p.dir);
            if (std::abs(den) > 1e-9) {
                const Vec q = x.point + ((p.point - x.point).dot(p.dir) / den) * x.dir;
                out.push_back([=] { return point_flipper(sp, q); });
                out.push_back([=] { return line_flipper(sp, q, p.dir); });
            }
            out.push_back([=] { return plane_flipper(x.point, Vec(cross3(x.dir, p.dir))); });
        }
        if (fa.plane) {
            const LineData p = *fa.plane;
            out.push_back([=] { return plane_flipper(p.point, p.dir); });
            out.push_back([=] { return plane_flipper(p.point, reference_perpendicular(p.dir)); });
            if (fa.shift) out.push_back([=] { return plane_flipper(p.point, *fa.shift); });
            if (fb.shift) out.push_back([=] { return plane_flipper(p.point, *fb.shift); });
            if (fb.shift) out.push_back([=] { return line_flipper(sp, p.point, Vec(cross3(p.dir, *fb.shift))); });
        }
    }
    if (f1.axis && f2.axis) {
        const LineData x = *f1.axis, y = *f2.axis;
        out.push_back([=] { return common_perpendicular(x.point, x.dir, y.point, y.dir); });
        out.push_back([=] { return plane_flipper(x.point, Vec(cross3(x.dir, y.dir))); });
    }
    if (f1.plane && f2.plane) {
        const LineData p = *f1.plane, q = *f2.plane;
        const Vec d = Vec(cross3(p.dir, q.dir));
        if (d.norm() > 1e-9) {
            Mat m(3, 3);
            m.row(0) = p.dir.transpose();
            m.row(1) = q.dir.transpose();
            m.row(2) = d.transpose();
            Vec rhs(3);
            rhs << p.dir.dot(p.point), q.dir.dot(q.point), 0.0;
            const Vec x = m.partialPivLu().solve(rhs);
            out.push_back([=] { return line_flipper(sp, x, d); });
            out.push_back([=] { return point_flipper(sp, x); });
        } else {
            out.push_back([=] { return line_flipper(sp, p.point, p.dir); });
        }
    }
    out.push_back([] { return point_flipper(Space::E3, Vec::Zero(3)); });
    out.push_back([] { return whole_flipper(Space::E3); });
    return out;
}

// ---- H3 and MOEB ----

// Invariant line of an elliptic or loxodromic orientation-preserving map.
std::optional<Flipper> lorentz_axis(const Isometry& t) {
    const Mat& m = t.matrix;
    if (m.determinant() < 0) return std::nullopt;
    Eigen::EigenSolver<Mat> es(m);
    Mat real_vectors(4, 0);
    for (int i = 0; i < 4; ++i) {
        const auto lambda = es.eigenvalues()(i);
        if (std::abs(lambda.imag()) > 1e-9 || std::abs(std::log(std::abs(lambda.real()))) < 1e-7) continue;
        real_vectors.conservativeResize(4, real_vectors.cols() + 1);
        real_vectors.col(real_vectors.cols() - 1) = es.eigenvectors().col(i).real();
    }
    if (real_vectors.cols() == 2) return flipper_from_fixed(t.space, LinearSubspace{real_vectors, 4});
    const Mat k = null_space(m - Mat::Identity(4, 4));
    if (k.cols() == 2) {
        const Mat g = BilinearForm::lorentz(3).gram();
        Eigen::SelfAdjointEigenSolver<Mat> gs(Mat(k.transpose() * g * k));
        if (gs.eigenvalues().maxCoeff() > 1e-9 && gs.eigenvalues().minCoeff() < -1e-9)
            return flipper_from_fixed(t.space, LinearSubspace{k, 4});
    }
    return std::nullopt;
}

Candidates candidates_lorentz3(const Isometry& s, const Isometry& t) {
    Candidates out;
    const auto l1 = lorentz_axis(t), l2 = lorentz_axis(s);
    if (l1 && l2) {
        const Isometry u = flip_of(*l2) * flip_of(*l1);
        out.push_back([=] {
            const auto z = lorentz_axis(u);
            if (!z) fail(ErrorCode::NotLinked, "no common perpendicular");
            return *z;
        });
    }
    out.push_back([=] { return decompose(t).head; });
    out.push_back([=] { return decompose(s).tail; });
    return out;
}

} // namespace

std::optional<Flipper> linked(const Isometry& s, const Isometry& t) {
    if (s.space != t.space) fail(ErrorCode::SpaceMismatch, "isometries live in different spaces");
    const double st = max_abs(t.matrix - Mat::Identity(t.matrix.rows(), t.matrix.cols()));
    const double ss = max_abs(s.matrix - Mat::Identity(s.matrix.rows(), s.matrix.cols()));
    Candidates candidates;
    if (st < 1e-12 * std::max(1.0, max_abs(t.matrix))) {
        candidates.push_back([=] { return decompose(s).tail; });
    } else if (ss < 1e-12 * std::max(1.0, max_abs(s.matrix))) {
        candidates.push_back([=] { return decompose(t).head; });
    }
    switch (t.space) {
    case Space::E1: for (auto& c : candidates_e1(s, t)) candidates.push_back(c); break;
    case Space::E2: for (auto& c : candidates_e2(s, t)) candidates.push_back(c); break;
    case Space::S2:
    case Space::RP2: for (auto& c : candidates_sphere(s, t)) candidates.push_back(c); break;
    case Space::H2: for (auto& c : candidates_h2(s, t)) candidates.push_back(c); break;
    case Space::E3: {
        const Features f1 = features_e3(classify(t)), f2 = features_e3(classify(s));
        const bool preserving = t.matrix.determinant() > 0 && s.matrix.determinant() > 0;
        if (preserving) {
            for (auto& c : candidates_e3_preserving(f1, f2)) candidates.push_back(c);
        } else {
            for (auto& c : candidates_e3_general(f1, f2)) candidates.push_back(c);
        }
        break;
    }
    case Space::H3:
    case Space::Moeb: for (auto& c : candidates_lorentz3(s, t)) candidates.push_back(c); break;
    }
    return first_link(s, t, candidates);
}


namespace {

bool is_identity(const Isometry& t) {
    const Mat& m = t.matrix;
    return max_abs(m - Mat::Identity(m.rows(), m.cols())) < 1e-9 * std::max(1.0, max_abs(m));
}

// ---- H2 without a common line ----

H2TResult fallback_h2(const Biflipper& first, const Biflipper& second) {
    const Isometry t = encode(first), s = encode(second);
    const Space sp = Space::H2;
    const Vec e0 = unit(3, 0);
    H2TResult r;
    const Flipper a = invariant_pencil(t).line_through(e0);
    const Biflipper moved_first = rebase(t, a, Side::Tail);
    const Biflipper moved_second = decompose(s);
    r.steps.push_back({kind_for(t, first, moved_first), MoveTarget::First, first, moved_first});
    r.steps.push_back({MoveKind::Rebase, MoveTarget::Second, second, moved_second});
    const Flipper& b = moved_first.head;
    const Flipper& c = moved_second.tail;
    const Flipper& d = moved_second.head;
    const Isometry u = flip_of(c) * flip_of(b);
    if (is_identity(u)) {
        r.steps.push_back({MoveKind::Rebase, MoveTarget::Middle, {b, c}, {whole_flipper(sp), whole_flipper(sp)}});
        r.biflipper = {a, d};
        return r;
    }
    const Vec n = normal(a);
    const Vec q = normalize_timelike(Vec(e0 - (lorentz_dot(e0, n) / lorentz_dot(n, n)) * n));
    Flipper l = a;
    try {
        l = invariant_pencil(u).line_through(q);
    } catch (const GeometryError&) {
    }
    const Biflipper middle = rebase(u, l, Side::Tail);
    r.steps.push_back({kind_for(u, {b, c}, middle), MoveTarget::Middle, {b, c}, middle});
    const Flipper& m = middle.head;
    if (same_flipper(l, a)) {
        r.biflipper = {m, d};
        return r;
    }
    const Biflipper rotation{a, l};
    const Biflipper rest{m, d};
    const auto e = linked(encode(rest), encode(rotation));
    if (!e) fail(ErrorCode::NotLinked, "no common line after the middle rebase");
    append(r, join(rotation, rest, *e));
    return r;
}

// ---- E3 ----

Flipper plane_for_reversing(const IsometryClass& c) {
    switch (c.label) {
    case ClassLabel::RotaryReflection: return plane_flipper(*c.center, reference_perpendicular(*c.axis_direction));
    case ClassLabel::CentralSymmetry: return plane_flipper(*c.center, unit(3, 2));
    case ClassLabel::GlideReflection: return plane_flipper(*c.axis_point, *c.vector);
    case ClassLabel::Reflection: return plane_flipper(*c.axis_point, reference_perpendicular(*c.normal));
    default: fail(ErrorCode::NotCompatible, "map is not orientation reversing");
    }
}

H2TResult both_reversing(const Biflipper& first, const Biflipper& second) {
    const Isometry t = encode(first), s = encode(second);
    H2TResult r;
    const Biflipper moved_first = rebase(t, plane_for_reversing(classify(t)), Side::Head);
    const Biflipper moved_second = rebase(s, plane_for_reversing(classify(s)), Side::Tail);
    r.steps.push_back({MoveKind::Rebase, MoveTarget::First, first, moved_first});
    r.steps.push_back({MoveKind::Rebase, MoveTarget::Second, second, moved_second});
    const Flipper& b = moved_first.head;
    const Flipper& c = moved_second.tail;
    const Vec nb = normal(b), nc = normal(c);
    const Vec d = Vec(cross3(nb, nc));
    Flipper e;
    if (d.norm() > 1e-9) {
        Mat m(3, 3);
        m.row(0) = nb.transpose();
        m.row(1) = nc.transpose();
        m.row(2) = d.transpose();
        Vec rhs(3);
        rhs << nb.dot(b.anchor), nc.dot(c.anchor), 0.0;
        e = plane_flipper(m.partialPivLu().solve(rhs), d);
    } else {
        e = plane_flipper(b.anchor, reference_perpendicular(nb));
    }
    const Biflipper middle = transform_commuting({b, c}, e);
    r.steps.push_back({MoveKind::CommutingTransform, MoveTarget::Middle, {b, c}, middle});
    const Biflipper screw_first{moved_first.tail, middle.tail};
    const Biflipper screw_second{middle.head, moved_second.head};
    const auto link = linked(encode(screw_second), encode(screw_first));
    if (!link) fail(ErrorCode::NotLinked, "screws without a common line");
    append(r, join(screw_first, screw_second, *link));
    return r;
}

std::optional<LineData> line_data(const Flipper& f) {
    if (f.kind != FlipperKind::Line) return std::nullopt;
    return LineData{f.anchor, direction(f)};
}

// First reversing, second preserving.
H2TResult reversing_then_preserving(const Biflipper& first, const Biflipper& second) {
    const Isometry t = encode(first), s = encode(second);
    H2TResult r;
    const Flipper a = plane_for_reversing(classify(t));
    const Biflipper moved_first = rebase(t, a, Side::Tail);
    r.steps.push_back({MoveKind::Rebase, MoveTarget::First, first, moved_first});
    const Vec na = normal(a);
    const Vec ue = a.basis.col(0);
    const Flipper e = line_flipper(Space::E3, a.anchor, ue);
    const Flipper f = plane_flipper(a.anchor, Vec(cross3(na, ue)));
    const Biflipper split{f, e};
    r.steps.push_back({MoveKind::CommutingTransform, MoveTarget::First, {whole_flipper(Space::E3), a}, split});

    const Biflipper screw_first{e, moved_first.head};
    const auto link = linked(s, encode(screw_first));
    if (!link) fail(ErrorCode::NotLinked, "screws without a common line");
    const H2TResult screws = join(screw_first, second, *link);
    r.steps.insert(r.steps.end(), screws.steps.begin(), screws.steps.end());
    const Flipper y = screws.biflipper.tail, x = screws.biflipper.head;
    const auto ly = line_data(y), lx = line_data(x);
    if (!ly || !lx) fail(ErrorCode::NotLinked, "screw result is not a pair of lines");
    const LineData z = perpendicular_data(ly->point, ly->dir, lx->point, lx->dir);
    const Vec nf = normal(f);
    const double den = z.dir.dot(nf);
    Flipper y2;
    if (std::abs(den) > 1e-9) {
        const Vec q = z.point + ((f.anchor - z.point).dot(nf) / den) * z.dir;
        Vec dir = Vec(cross3(z.dir, nf));
        if (dir.norm() < 1e-9) dir = f.basis.col(0);
        y2 = line_flipper(Space::E3, q, dir);
    } else {
        y2 = line_flipper(Space::E3, z.point, nf);
    }
    const Isometry screw = encode(screws.biflipper);
    const Biflipper adjusted = rebase(screw, y2, Side::Tail);
    r.steps.push_back({MoveKind::ScrewAdjust, MoveTarget::Result, screws.biflipper, adjusted});
    const Biflipper merged = transform_commuting({f, y2}, f);
    r.steps.push_back({MoveKind::CommutingTransform, MoveTarget::Middle, {f, y2}, merged});
    r.biflipper = {merged.head, adjusted.head};
    return r;
}

H2TResult fallback_e3(const Biflipper& first, const Biflipper& second) {
    const Isometry t = encode(first), s = encode(second);
    const bool t_rev = t.matrix.determinant() < 0, s_rev = s.matrix.determinant() < 0;
    if (t_rev && s_rev) return both_reversing(first, second);
    if (t_rev) return reversing_then_preserving(first, second);
    if (s_rev) {
        H2TResult r = reversing_then_preserving(swapped(second), swapped(first));
        r.biflipper = swapped(r.biflipper);
        return r;
    }
    fail(ErrorCode::NotLinked, "screws without a common line");
}

H2TResult fallback(const Biflipper& first, const Biflipper& second) {
    const Isometry t = encode(first), s = encode(second);
    try {
        H2TResult r;
        if (t.space == Space::H2) {
            r = fallback_h2(first, second);
        } else if (t.space == Space::E3) {
            r = fallback_e3(first, second);
        } else if (const auto e = linked(s, t)) {
            r = join(first, second, *e);
        } else {
            return direct(s, t);
        }
        if (sound(r, s, t)) return r;
    } catch (const GeometryError&) {
    }
    return direct(s, t);
}

} // namespace

H2TResult head_to_tail(const Biflipper& first, const Biflipper& second, Mode mode) {
    if (first.space() != second.space()) fail(ErrorCode::SpaceMismatch, "biflippers live in different spaces");
    const Isometry t = encode(first), s = encode(second);
    if (const auto e = linked(s, t)) return join(first, second, *e);
    if (mode == Mode::Strict) fail(ErrorCode::NotLinked, "the isometries have no common flipper");
    return fallback(first, second);
}

H2TResult compose_screws(const Biflipper& first, const Biflipper& second) {
    for (const Biflipper* b : {&first, &second}) {
        if (b->space() != Space::E3 || b->tail.kind != FlipperKind::Line || b->head.kind != FlipperKind::Line)
            fail(ErrorCode::WrongFlipperKind, "screw composition needs two pairs of lines of E3");
    }
    const Isometry t = encode(first), s = encode(second);
    const auto e = first_link(s, t, candidates_e3_preserving(features_e3(classify(t)), features_e3(classify(s))));
    if (e) {
        H2TResult r = join(first, second, *e);
        for (auto& step : r.steps) step.kind = MoveKind::ScrewAdjust;
        return r;
    }
    return head_to_tail(first, second, Mode::Fallback);
}

H2TResult compose_with_fallback(const Isometry& s, const Isometry& t) {
    return head_to_tail(decompose(t), decompose(s), Mode::Fallback);
}

} // namespace biflip
