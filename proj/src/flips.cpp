#include "biflip/flips.hpp"

#include <algorithm>
#include <cmath>

namespace biflip {

std::string_view to_string(FlipperKind kind) {
    switch (kind) {
    case FlipperKind::Whole: return "whole";
    case FlipperKind::Point: return "point";
    case FlipperKind::Line: return "line";
    case FlipperKind::Plane: return "plane";
    case FlipperKind::PointPair: return "point-pair";
    case FlipperKind::Circle: return "circle";
    }
    return "?";
}

FlipperKind flipper_kind_from_string(std::string_view name) {
    for (FlipperKind k : {FlipperKind::Whole, FlipperKind::Point, FlipperKind::Line, FlipperKind::Plane,
                          FlipperKind::PointPair, FlipperKind::Circle})
        if (to_string(k) == name) return k;
    fail(ErrorCode::MalformedInput, "unknown flipper kind '" + std::string(name) + "'");
}

bool is_admissible(Space space, FlipperKind kind) {
    if (kind == FlipperKind::Whole) return true;
    switch (space) {
    case Space::E1: return kind == FlipperKind::Point;
    case Space::E2:
    case Space::H2: return kind == FlipperKind::Point || kind == FlipperKind::Line;
    case Space::E3:
    case Space::H3:
        return kind == FlipperKind::Point || kind == FlipperKind::Line || kind == FlipperKind::Plane;
    case Space::S2:
    case Space::Moeb: return kind == FlipperKind::PointPair || kind == FlipperKind::Circle;
    case Space::RP2: return kind == FlipperKind::Point;
    }
    return false;
}

namespace {

struct Signature {
    int pos = 0;
    int neg = 0;
    int zero = 0;
};

Signature signature_of(const Mat& basis, const BilinearForm& form) {
    Signature s;
    if (basis.cols() == 0) return s;
    Eigen::HouseholderQR<Mat> qr(basis);
    const Mat q = qr.householderQ() * Mat::Identity(basis.rows(), basis.cols());
    const Mat r = q.transpose() * form.gram() * q;
    Eigen::SelfAdjointEigenSolver<Mat> es(r);
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev > 1e-9) ++s.pos;
        else if (ev < -1e-9) ++s.neg;
        else ++s.zero;
    }
    return s;
}

Vec unit_or_throw(const Vec& v, const char* what) {
    const double n = v.norm();
    if (!v.allFinite() || n < 1e-12) fail(ErrorCode::InvalidFlipper, std::string(what) + " must be a nonzero finite vector");
    return v / n;
}

void require_size(const Vec& v, int n, const char* what) {
    if (v.size() != n)
        fail(ErrorCode::InvalidFlipper, std::string(what) + " must have " + std::to_string(n) + " coordinates");
}

Vec canonical_normal(Space space, const Vec& n) {
    if (is_lorentzian(space)) return canonical_sign(normalize_spacelike(n));
    return canonical_sign(Vec(n.normalized()));
}

Vec canonical_vector(Space space, const Vec& v) {
    if (is_lorentzian(space)) return normalize_timelike(v);
    return canonical_sign(Vec(v.normalized()));
}

// Fixed subspace form-orthogonal to a single normal.
Mat complement_of(const Vec& n, const BilinearForm& form) {
    const Mat row = (form.gram() * n).transpose();
    const Mat k = null_space(row, 1e-12);
    return canonicalize(LinearSubspace{k, form.dim()}, form).basis;
}

Flipper linear_flipper(Space space, const Mat& fixed_basis) {
    const int n = model_dim(space);
    const BilinearForm form = BilinearForm::for_space(space);
    const int k = static_cast<int>(fixed_basis.cols());
    Flipper f;
    f.space = space;
    if (k == n) {
        f.kind = FlipperKind::Whole;
        f.basis = Mat::Identity(n, n);
        return f;
    }
    if (space == Space::RP2) {
        if (k == 0) return whole_flipper(space);
        if (k == 2) {
            const Mat pole = null_space(fixed_basis.transpose(), 1e-12);
            return linear_flipper(space, pole);
        }
        f.kind = FlipperKind::Point;
        f.basis = canonical_vector(space, fixed_basis.col(0));
        return f;
    }
    if (space == Space::S2) {
        if (k == 0) fail(ErrorCode::EmptyFixedSet, "involution has no fixed points on the sphere");
        if (k == 1) {
            f.kind = FlipperKind::PointPair;
            f.basis = canonical_vector(space, fixed_basis.col(0));
        } else {
            f.kind = FlipperKind::Circle;
            const Vec nrm = canonical_normal(space, null_space(fixed_basis.transpose(), 1e-12).col(0));
            f.basis = complement_of(nrm, form);
        }
        return f;
    }
    const Signature sig = signature_of(fixed_basis, form);
    if (sig.zero > 0) fail(ErrorCode::InvalidFlipper, "fixed subspace is tangent to the absolute");
    if (sig.pos == 0) fail(ErrorCode::EmptyFixedSet, "fixed subspace misses the hyperbolic space");
    if (k == 1) {
        if (space == Space::Moeb)
            fail(ErrorCode::EmptyFixedSet, "point flips act on the sphere without fixed points");
        f.kind = FlipperKind::Point;
        f.basis = canonical_vector(space, fixed_basis.col(0));
        return f;
    }
    if (k == n - 1) {
        f.kind = (space == Space::H2) ? FlipperKind::Line
                 : (space == Space::H3) ? FlipperKind::Plane
                                        : FlipperKind::Circle;
        const Mat row = (form.gram() * fixed_basis).transpose();
        const Vec nrm = canonical_normal(space, null_space(row, 1e-12).col(0));
        f.basis = complement_of(nrm, form);
        return f;
    }
    // k == 2 in a 4-dimensional model: an H3 line or a MOEB point-pair.
    f.kind = (space == Space::H3) ? FlipperKind::Line : FlipperKind::PointPair;
    const Mat c = canonicalize(LinearSubspace{fixed_basis, n}, form).basis;
    Vec t = c.col(0), s = c.col(1);
    if (form(t, t) < 0) std::swap(t, s);
    Vec a = normalize_null(t + s), b = normalize_null(t - s);
    if (std::lexicographical_compare(b.data(), b.data() + b.size(), a.data(), a.data() + a.size()))
        std::swap(a, b);
    Mat basis(n, 2);
    basis.col(0) = normalize_timelike(a + b);
    basis.col(1) = canonical_sign(normalize_spacelike(a - b));
    f.basis = basis;
    return f;
}

} // namespace

Flipper whole_flipper(Space space) {
    Flipper f;
    f.space = space;
    f.kind = FlipperKind::Whole;
    if (is_euclidean(space)) {
        const int d = intrinsic_dim(space);
        f.anchor = Vec::Zero(d);
        f.basis = Mat::Identity(d, d);
    } else {
        const int n = model_dim(space);
        f.basis = Mat::Identity(n, n);
    }
    return f;
}

Flipper affine_flipper(Space space, const AffineSubspace& sub) {
    if (!is_euclidean(space)) fail(ErrorCode::InvalidFlipper, "affine flippers live in Euclidean spaces");
    const int d = intrinsic_dim(space);
    require_size(sub.anchor, d, "anchor");
    if (!sub.anchor.allFinite()) fail(ErrorCode::InvalidFlipper, "anchor must be finite");
    Mat dirs = sub.direction.basis;
    if (dirs.cols() > 0 && (dirs.rows() != d || !dirs.allFinite()))
        fail(ErrorCode::InvalidFlipper, "direction vectors have the wrong size");
    const int k = static_cast<int>(dirs.cols());
    if (k > 0) {
        Eigen::JacobiSVD<Mat> svd(dirs);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) < 1e-12 * std::max(1.0, sv(0)))
            fail(ErrorCode::InvalidFlipper, "direction vectors are linearly dependent");
    }
    if (k >= d) return whole_flipper(space);
    Flipper f;
    f.space = space;
    if (k == 0) {
        f.kind = FlipperKind::Point;
        f.anchor = sub.anchor;
        f.basis = Mat(d, 0);
        return f;
    }
    Mat basis(d, k);
    if (k == 1) {
        f.kind = FlipperKind::Line;
        basis.col(0) = canonical_sign(Vec(dirs.col(0).normalized()));
    } else {
        // A plane of E3, carried by its canonical normal.
        f.kind = FlipperKind::Plane;
        const Vec nrm = canonical_sign(Vec(cross3(dirs.col(0), dirs.col(1)).normalized()));
        const Vec e1 = reference_perpendicular(nrm);
        const Eigen::Vector3d e2 = cross3(nrm, e1);
        basis.col(0) = e1;
        basis.col(1) = Vec(e2);
    }
    const Mat p = basis * basis.transpose();
    f.anchor = sub.anchor - p * sub.anchor;
    f.basis = basis;
    return f;
}

Flipper point_flipper(Space space, const Vec& point) {
    if (is_euclidean(space)) return affine_flipper(space, {point, LinearSubspace{Mat(intrinsic_dim(space), 0), intrinsic_dim(space)}});
    switch (space) {
    case Space::RP2:
        require_size(point, 3, "point");
        return linear_flipper(space, unit_or_throw(point, "point"));
    case Space::H2:
    case Space::H3: {
        require_size(point, model_dim(space), "point");
        if (!point.allFinite() || !(lorentz_dot(point, point) > 1e-12) || point(0) <= 0)
            fail(ErrorCode::InvalidFlipper, "hyperbolic point must be a future timelike vector");
        return linear_flipper(space, point);
    }
    case Space::Moeb:
        fail(ErrorCode::EmptyFixedSet, "point flips act on the sphere without fixed points");
    default:
        fail(ErrorCode::InvalidFlipper, "points are not flippers of " + std::string(to_string(space)));
    }
}

Flipper line_flipper(Space space, const Vec& point, const Vec& dir) {
    if (space != Space::E2 && space != Space::E3)
        fail(ErrorCode::InvalidFlipper, "line_flipper expects E2 or E3");
    const int d = intrinsic_dim(space);
    require_size(dir, d, "direction");
    Mat basis(d, 1);
    basis.col(0) = unit_or_throw(dir, "direction");
    return affine_flipper(space, {point, LinearSubspace{basis, d}});
}

Flipper plane_flipper(const Vec& point, const Vec& nrm) {
    require_size(nrm, 3, "normal");
    const Vec n = unit_or_throw(nrm, "normal");
    const Vec e1 = reference_perpendicular(n);
    Mat basis(3, 2);
    basis.col(0) = e1;
    basis.col(1) = Vec(cross3(n, e1));
    return affine_flipper(Space::E3, {point, LinearSubspace{basis, 3}});
}

Flipper polar_flipper(Space space, const Vec& nrm) {
    switch (space) {
    case Space::E2: {
        require_size(nrm, 2, "normal");
        Vec dir(2);
        dir << -nrm(1), nrm(0);
        return line_flipper(space, Vec::Zero(2), dir);
    }
    case Space::S2:
    case Space::RP2: {
        require_size(nrm, 3, "normal");
        const Vec n = unit_or_throw(nrm, "normal");
        if (space == Space::RP2) return linear_flipper(space, n);
        return linear_flipper(space, complement_of(n, BilinearForm::euclidean(3)));
    }
    case Space::H2:
    case Space::H3:
    case Space::Moeb: {
        require_size(nrm, model_dim(space), "normal");
        if (!nrm.allFinite() || !(lorentz_dot(nrm, nrm) < -1e-12))
            fail(ErrorCode::InvalidFlipper, "normal must be a spacelike vector");
        return linear_flipper(space, complement_of(nrm, BilinearForm::for_space(space)));
    }
    default:
        fail(ErrorCode::InvalidFlipper, "no polar flippers in " + std::string(to_string(space)));
    }
}

Flipper pair_flipper(const Vec& v) {
    require_size(v, 3, "pair vector");
    return linear_flipper(Space::S2, unit_or_throw(v, "pair vector"));
}

Flipper ideal_line_flipper(Space space, const Vec& a, const Vec& b) {
    if (space != Space::H3 && space != Space::Moeb)
        fail(ErrorCode::InvalidFlipper, "ideal endpoints describe H3 lines and MOEB point-pairs");
    require_size(a, 4, "endpoint");
    require_size(b, 4, "endpoint");
    for (const Vec* v : {&a, &b}) {
        if (!v->allFinite() || v->norm() < 1e-12 || std::abs(lorentz_dot(*v, *v)) > 1e-9 * v->squaredNorm())
            fail(ErrorCode::InvalidFlipper, "endpoints must be null vectors");
    }
    const Vec na = normalize_null(a), nb = normalize_null(b);
    if ((na - nb).norm() < 1e-9) fail(ErrorCode::InvalidFlipper, "endpoints must be distinct");
    Mat basis(4, 2);
    basis.col(0) = na;
    basis.col(1) = nb;
    return linear_flipper(space, basis);
}

Flipper flipper_from_fixed(Space space, const LinearSubspace& fixed) {
    if (is_euclidean(space)) fail(ErrorCode::InvalidFlipper, "Euclidean flippers are affine");
    if (fixed.dim() > 0 && fixed.basis.rows() != model_dim(space))
        fail(ErrorCode::InvalidFlipper, "fixed subspace has the wrong ambient dimension");
    return linear_flipper(space, fixed.dim() == 0 ? Mat(model_dim(space), 0) : fixed.basis);
}

// ---------------------------------------------------------------------------

Vec representative(const Flipper& f) {
    if (is_euclidean(f.space)) return f.anchor;
    if (f.dim() != 1) fail(ErrorCode::WrongFlipperKind, "flipper has no single representative vector");
    return f.basis.col(0);
}

Vec normal(const Flipper& f) {
    if (f.space == Space::E2 && f.kind == FlipperKind::Line) {
        Vec n(2);
        n << -f.basis(1, 0), f.basis(0, 0);
        return canonical_sign(n);
    }
    if (f.space == Space::E3 && f.kind == FlipperKind::Plane)
        return canonical_sign(Vec(cross3(f.basis.col(0), f.basis.col(1)).normalized()));
    if (f.space == Space::RP2 && f.kind == FlipperKind::Point) return f.basis.col(0);
    if (!is_euclidean(f.space) && f.dim() == model_dim(f.space) - 1) {
        const BilinearForm form = BilinearForm::for_space(f.space);
        const Mat row = (form.gram() * f.basis).transpose();
        return canonical_normal(f.space, null_space(row, 1e-12).col(0));
    }
    fail(ErrorCode::WrongFlipperKind, "flipper has no normal");
}

Vec direction(const Flipper& f) {
    if (!is_euclidean(f.space) || f.kind != FlipperKind::Line)
        fail(ErrorCode::WrongFlipperKind, "only Euclidean lines have a direction");
    return f.basis.col(0);
}

std::pair<Vec, Vec> endpoints(const Flipper& f) {
    if (!(f.space == Space::H3 && f.kind == FlipperKind::Line) &&
        !(f.space == Space::Moeb && f.kind == FlipperKind::PointPair))
        fail(ErrorCode::WrongFlipperKind, "flipper has no ideal endpoints");
    const Vec t = f.basis.col(0), s = f.basis.col(1);
    return {normalize_null(t + s), normalize_null(t - s)};
}

Isometry flip_of(const Flipper& f) {
    if (f.kind == FlipperKind::Whole) return Isometry::identity(f.space);
    if (is_euclidean(f.space)) {
        const int d = intrinsic_dim(f.space);
        return {f.space, reflection_matrix(AffineSubspace{f.anchor, LinearSubspace{f.basis, d}})};
    }
    const BilinearForm form = BilinearForm::for_space(f.space);
    return {f.space, reflection_matrix(LinearSubspace{f.basis, form.dim()}, form)};
}

Flipper flipper_of_involution(const Isometry& t, double eps) {
    validate(t);
    if (!is_involution(t.matrix, eps)) fail(ErrorCode::NotInvolution, "isometry is not an involution");
    if (is_euclidean(t.space)) {
        const int d = intrinsic_dim(t.space);
        const Mat lin = t.matrix.topLeftCorner(d, d);
        const Vec shift = t.matrix.topRightCorner(d, 1);
        const Mat k = null_space(lin - Mat::Identity(d, d));
        return affine_flipper(t.space, {shift / 2.0, LinearSubspace{k, d}});
    }
    const int n = model_dim(t.space);
    return linear_flipper(t.space, null_space(t.matrix - Mat::Identity(n, n)));
}

bool same_flipper(const Flipper& a, const Flipper& b, double eps) {
    if (a.space != b.space || a.kind != b.kind) return false;
    const Isometry fa = flip_of(a), fb = flip_of(b);
    const double scale = std::max(1.0, std::max(max_abs(fa.matrix), max_abs(fb.matrix)));
    return distance(fa, fb) <= eps * scale;
}

Flipper image(const Isometry& t, const Flipper& f) {
    if (t.space != f.space) fail(ErrorCode::SpaceMismatch, "isometry and flipper live in different spaces");
    if (f.kind == FlipperKind::Whole) return f;
    if (is_euclidean(f.space)) {
        const int d = intrinsic_dim(f.space);
        const Mat lin = t.matrix.topLeftCorner(d, d);
        return affine_flipper(f.space, {t.apply(f.anchor), LinearSubspace{lin * f.basis, d}});
    }
    return linear_flipper(f.space, t.matrix * f.basis);
}

bool commute(const Isometry& a, const Isometry& b, double eps) {
    const double scale = std::max(1.0, max_abs(a.matrix) * max_abs(b.matrix));
    return max_abs(a.matrix * b.matrix - b.matrix * a.matrix) <= eps * scale;
}

} // namespace biflip
