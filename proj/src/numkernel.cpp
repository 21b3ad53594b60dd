#include "biflip/numkernel.hpp"

#include <cmath>
#include <numbers>

namespace biflip {

std::string_view to_string(Space space) {
    switch (space) {
    case Space::E1: return "E1";
    case Space::E2: return "E2";
    case Space::E3: return "E3";
    case Space::S2: return "S2";
    case Space::RP2: return "RP2";
    case Space::H2: return "H2";
    case Space::H3: return "H3";
    case Space::Moeb: return "MOEB";
    }
    return "?";
}

Space space_from_string(std::string_view name) {
    for (Space s : all_spaces)
        if (to_string(s) == name) return s;
    fail(ErrorCode::MalformedInput, "unknown space '" + std::string(name) + "'");
}

bool is_euclidean(Space space) {
    return space == Space::E1 || space == Space::E2 || space == Space::E3;
}

bool is_lorentzian(Space space) {
    return space == Space::H2 || space == Space::H3 || space == Space::Moeb;
}

int intrinsic_dim(Space space) {
    switch (space) {
    case Space::E1: return 1;
    case Space::E2:
    case Space::S2:
    case Space::RP2:
    case Space::H2:
    case Space::Moeb: return 2;
    case Space::E3:
    case Space::H3: return 3;
    }
    return 0;
}

int model_dim(Space space) {
    switch (space) {
    case Space::E1: return 2;
    case Space::E2: return 3;
    case Space::E3: return 4;
    case Space::S2:
    case Space::RP2:
    case Space::H2: return 3;
    case Space::H3:
    case Space::Moeb: return 4;
    }
    return 0;
}

Mat BilinearForm::gram() const {
    Mat g = Mat::Zero(dim(), dim());
    for (int i = 0; i < p; ++i) g(i, i) = 1.0;
    for (int i = p; i < dim(); ++i) g(i, i) = -1.0;
    return g;
}

double BilinearForm::operator()(const Vec& x, const Vec& y) const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += (i < p ? 1.0 : -1.0) * x(i) * y(i);
    return s;
}

BilinearForm BilinearForm::for_space(Space space) {
    switch (space) {
    case Space::E1:
    case Space::E2:
    case Space::E3: return euclidean(intrinsic_dim(space));
    case Space::S2:
    case Space::RP2: return euclidean(3);
    case Space::H2: return lorentz(2);
    case Space::H3:
    case Space::Moeb: return lorentz(3);
    }
    return {};
}

// ---------------------------------------------------------------------------

Isometry Isometry::identity(Space space) {
    const int n = model_dim(space);
    return {space, Mat::Identity(n, n)};
}

Isometry Isometry::inverse() const {
    const int n = static_cast<int>(matrix.rows());
    if (is_euclidean(space)) {
        const int d = n - 1;
        Mat inv = Mat::Identity(n, n);
        Mat lt = matrix.topLeftCorner(d, d).transpose();
        inv.topLeftCorner(d, d) = lt;
        inv.topRightCorner(d, 1) = -lt * matrix.topRightCorner(d, 1);
        return {space, inv};
    }
    const Mat g = BilinearForm::for_space(space).gram();
    return {space, g * matrix.transpose() * g};
}

Isometry Isometry::operator*(const Isometry& rhs) const {
    if (space != rhs.space) fail(ErrorCode::SpaceMismatch, "composing isometries of different spaces");
    return {space, matrix * rhs.matrix};
}

Vec Isometry::apply(const Vec& point) const {
    if (is_euclidean(space)) {
        const int d = static_cast<int>(matrix.rows()) - 1;
        return matrix.topLeftCorner(d, d) * point + matrix.topRightCorner(d, 1);
    }
    return matrix * point;
}

// ---------------------------------------------------------------------------

Mat projector(const LinearSubspace& sub, const BilinearForm& form) {
    const int n = form.dim();
    if (sub.dim() == 0) return Mat::Zero(n, n);
    const Mat g = form.gram();
    const Mat& b = sub.basis;
    const Mat restricted = b.transpose() * g * b;
    Eigen::SelfAdjointEigenSolver<Mat> es(restricted);
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff());
    if (es.eigenvalues().cwiseAbs().minCoeff() < 1e-10 * scale)
        fail(ErrorCode::DegenerateRestriction, "form restricted to the subspace is degenerate");
    return b * restricted.inverse() * b.transpose() * g;
}

Mat reflection_matrix(const LinearSubspace& sub, const BilinearForm& form) {
    const int n = form.dim();
    return 2.0 * projector(sub, form) - Mat::Identity(n, n);
}

Mat reflection_matrix(const AffineSubspace& sub) {
    const int d = static_cast<int>(sub.anchor.size());
    const Mat p = projector(sub.direction, BilinearForm::euclidean(d));
    const Mat lin = 2.0 * p - Mat::Identity(d, d);
    Mat m = Mat::Identity(d + 1, d + 1);
    m.topLeftCorner(d, d) = lin;
    m.topRightCorner(d, 1) = (Mat::Identity(d, d) - lin) * sub.anchor;
    return m;
}

LinearSubspace canonicalize(const LinearSubspace& sub, const BilinearForm& form) {
    std::vector<Vec> work;
    for (int j = 0; j < sub.dim(); ++j) work.emplace_back(sub.basis.col(j));
    std::vector<Vec> out;
    while (!work.empty()) {
        std::size_t best = 0;
        double best_norm = -1.0;
        for (std::size_t i = 0; i < work.size(); ++i) {
            const double q = std::abs(form(work[i], work[i]));
            if (q > best_norm + 1e-14) {
                best_norm = q;
                best = i;
            }
        }
        const double scale = std::max(1e-300, work[best].squaredNorm());
        if (best_norm < 1e-12 * scale) {
            // All remaining vectors are null: merge the most coupled pair.
            std::size_t bi = 0, bj = 1;
            double coupling = -1.0;
            for (std::size_t i = 0; i < work.size(); ++i)
                for (std::size_t j = i + 1; j < work.size(); ++j) {
                    const double c = std::abs(form(work[i], work[j]));
                    if (c > coupling) {
                        coupling = c;
                        bi = i;
                        bj = j;
                    }
                }
            if (work.size() < 2 || coupling < 1e-12 * scale)
                fail(ErrorCode::DegenerateRestriction, "form restricted to the subspace is degenerate");
            work[bi] = work[bi] + work[bj];
            continue;
        }
        Vec e = work[best] / std::sqrt(best_norm);
        const double sign = form(e, e) > 0 ? 1.0 : -1.0;
        work.erase(work.begin() + static_cast<std::ptrdiff_t>(best));
        for (Vec& w : work) w -= sign * form(w, e) * e;
        // Drop vectors that became numerically dependent.
        std::erase_if(work, [](const Vec& w) { return w.norm() < 1e-12; });
        out.push_back(e);
    }
    LinearSubspace result;
    result.ambient_dim = form.dim();
    result.basis = Mat(form.dim(), static_cast<int>(out.size()));
    for (std::size_t j = 0; j < out.size(); ++j) result.basis.col(static_cast<int>(j)) = out[j];
    return result;
}

Mat null_space(const Mat& m, double tol) {
    const int cols = static_cast<int>(m.cols());
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = tol * std::max(1.0, max_abs(m));
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool approx_equal(const Mat& a, const Mat& b, double eps) {
    return a.rows() == b.rows() && a.cols() == b.cols() && max_abs(a - b) <= eps;
}

double distance(const Isometry& a, const Isometry& b, bool projective) {
    if (a.space != b.space) fail(ErrorCode::SpaceMismatch, "comparing isometries of different spaces");
    const double d = max_abs(a.matrix - b.matrix);
    if (!projective) return d;
    return std::min(d, max_abs(a.matrix + b.matrix));
}

bool approx_equal(const Isometry& a, const Isometry& b, Tolerance tol) {
    return distance(a, b, tol.projective || a.space == Space::RP2) <= tol.abs_eps;
}

bool is_involution(const Mat& m, double eps) {
    const int n = static_cast<int>(m.rows());
    const double scale = std::max(1.0, max_abs(m) * max_abs(m));
    return max_abs(m * m - Mat::Identity(n, n)) <= eps * scale;
}

bool is_form_isometry(const Isometry& t, double eps) {
    const int n = model_dim(t.space);
    const Mat& m = t.matrix;
    if (m.rows() != n || m.cols() != n) return false;
    if (!m.allFinite()) return false;
    const double scale = std::max(1.0, max_abs(m) * max_abs(m));
    if (is_euclidean(t.space)) {
        const int d = n - 1;
        for (int j = 0; j < d; ++j)
            if (std::abs(m(d, j)) > eps) return false;
        if (std::abs(m(d, d) - 1.0) > eps) return false;
        const Mat l = m.topLeftCorner(d, d);
        return max_abs(l.transpose() * l - Mat::Identity(d, d)) <= eps;
    }
    const Mat g = BilinearForm::for_space(t.space).gram();
    if (max_abs(m.transpose() * g * m - g) > eps * scale) return false;
    if (is_lorentzian(t.space) && m(0, 0) <= 0.0) return false;
    return true;
}

void validate(const Isometry& t, double eps) {
    if (!is_form_isometry(t, eps))
        fail(ErrorCode::InvalidIsometry,
             "matrix is not an isometry of " + std::string(to_string(t.space)));
}

// ---------------------------------------------------------------------------

double lorentz_dot(const Vec& x, const Vec& y) {
    double s = x(0) * y(0);
    for (int i = 1; i < x.size(); ++i) s -= x(i) * y(i);
    return s;
}

Vec lorentz_cross(const Vec& a, const Vec& b) {
    Eigen::Vector3d c = cross3(a, b);
    Vec n(3);
    n << c(0), -c(1), -c(2);
    return n;
}

Mat boost_to_origin(const Vec& p) {
    const int n = static_cast<int>(p.size());
    const int d = n - 1;
    const double p0 = p(0);
    const Vec ps = p.tail(d);
    Mat b(n, n);
    b(0, 0) = p0;
    b.block(0, 1, 1, d) = -ps.transpose();
    b.block(1, 0, d, 1) = -ps;
    b.bottomRightCorner(d, d) = Mat::Identity(d, d) + ps * ps.transpose() / (1.0 + p0);
    return b;
}

Vec normalize_timelike(const Vec& v) {
    const double q = lorentz_dot(v, v);
    if (!(q > 0.0)) fail(ErrorCode::InvalidFlipper, "vector is not timelike");
    Vec r = v / std::sqrt(q);
    if (r(0) < 0) r = -r;
    return r;
}

Vec normalize_spacelike(const Vec& v) {
    const double q = lorentz_dot(v, v);
    if (!(q < 0.0)) fail(ErrorCode::InvalidFlipper, "vector is not spacelike");
    return v / std::sqrt(-q);
}

Vec normalize_null(const Vec& v) {
    if (std::abs(v(0)) < 1e-300) fail(ErrorCode::InvalidFlipper, "null vector with zero time part");
    return v / v(0);
}

// ---------------------------------------------------------------------------

std::string_view to_string(Chart chart) {
    switch (chart) {
    case Chart::PoincareDisk: return "poincare-disk";
    case Chart::PoincareBall: return "poincare-ball";
    case Chart::Hyperboloid: return "hyperboloid";
    case Chart::Sphere: return "sphere";
    case Chart::StereoPlane: return "stereo-plane";
    }
    return "?";
}

Chart chart_from_string(std::string_view name) {
    for (Chart c : {Chart::PoincareDisk, Chart::PoincareBall, Chart::Hyperboloid, Chart::Sphere,
                    Chart::StereoPlane})
        if (to_string(c) == name) return c;
    fail(ErrorCode::MalformedInput, "unknown chart '" + std::string(name) + "'");
}

namespace {

Vec poincare_to_hyperboloid(const Vec& u) {
    const double r2 = u.squaredNorm();
    if (!(r2 < 1.0)) fail(ErrorCode::OutOfDomain, "Poincare point must lie inside the unit ball");
    Vec x(u.size() + 1);
    x(0) = (1.0 + r2) / (1.0 - r2);
    x.tail(u.size()) = 2.0 * u / (1.0 - r2);
    return x;
}

Vec hyperboloid_to_poincare(const Vec& x) {
    const double q = lorentz_dot(x, x);
    if (!(x(0) > 0.0) || std::abs(q - 1.0) > 1e-6 * std::max(1.0, x(0) * x(0)))
        fail(ErrorCode::OutOfDomain, "point is not on the upper hyperboloid sheet");
    return x.tail(x.size() - 1) / (1.0 + x(0));
}

Vec sphere_to_plane(const Vec& p) {
    if (p.size() != 3 || std::abs(p.norm() - 1.0) > 1e-9)
        fail(ErrorCode::OutOfDomain, "sphere point must be a unit 3-vector");
    const double denom = 1.0 - p(2);
    if (denom < 1e-12) fail(ErrorCode::OutOfDomain, "the projection pole has no stereographic image");
    Vec w(2);
    w << p(0) / denom, p(1) / denom;
    return w;
}

Vec plane_to_sphere(const Vec& w) {
    if (w.size() != 2) fail(ErrorCode::OutOfDomain, "stereographic point must be a 2-vector");
    const double r2 = w.squaredNorm();
    Vec p(3);
    p << 2.0 * w(0), 2.0 * w(1), r2 - 1.0;
    return p / (1.0 + r2);
}

} // namespace

Vec model_convert(const Vec& point, Chart from, Chart to) {
    if (!point.allFinite()) fail(ErrorCode::OutOfDomain, "non-finite coordinates");
    if (from == to) return point;
    const bool disk_like = from == Chart::PoincareDisk || from == Chart::PoincareBall;
    if (disk_like && to == Chart::Hyperboloid) {
        const int expected = from == Chart::PoincareDisk ? 2 : 3;
        if (point.size() != expected) fail(ErrorCode::OutOfDomain, "wrong dimension for chart");
        return poincare_to_hyperboloid(point);
    }
    if (from == Chart::Hyperboloid && (to == Chart::PoincareDisk || to == Chart::PoincareBall)) {
        const int expected = to == Chart::PoincareDisk ? 3 : 4;
        if (point.size() != expected) fail(ErrorCode::OutOfDomain, "wrong dimension for chart");
        return hyperboloid_to_poincare(point);
    }
    if (from == Chart::Sphere && to == Chart::StereoPlane) return sphere_to_plane(point);
    if (from == Chart::StereoPlane && to == Chart::Sphere) return plane_to_sphere(point);
    fail(ErrorCode::OutOfDomain, "no conversion from " + std::string(to_string(from)) + " to " +
                                     std::string(to_string(to)));
}

// ---------------------------------------------------------------------------

Eigen::Vector3d cross3(const Vec& a, const Vec& b) {
    const Eigen::Vector3d x(a(0), a(1), a(2));
    const Eigen::Vector3d y(b(0), b(1), b(2));
    return x.cross(y);
}

Vec canonical_sign(const Vec& v) {
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) return v(i) < 0 ? Vec(-v) : v;
    }
    return v;
}

Vec reference_perpendicular(const Vec& u) {
    const Vec un = u.normalized();
    int best = 0;
    for (int i = 1; i < un.size(); ++i)
        if (std::abs(un(i)) < std::abs(un(best))) best = i;
    Vec a = Vec::Zero(un.size());
    a(best) = 1.0;
    return (a - a.dot(un) * un).normalized();
}

double wrap_angle(double angle) {
    double a = std::remainder(angle, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

AxisAngle axis_angle(const Mat& r) {
    const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
    Vec w(3);
    w << (r(2, 1) - r(1, 2)) / 2.0, (r(0, 2) - r(2, 0)) / 2.0, (r(1, 0) - r(0, 1)) / 2.0;
    Vec u(3);
    if (c > -0.5) {
        if (w.norm() < 1e-15) {
            u << 0.0, 0.0, 1.0;
            return {u, 0.0};
        }
        u = canonical_sign(Vec(w.normalized()));
    } else {
        const Mat s = (r + r.transpose()) / 2.0 - c * Mat::Identity(3, 3);
        int k = 0;
        for (int i = 1; i < 3; ++i)
            if (s(i, i) > s(k, k)) k = i;
        u = canonical_sign(Vec(s.col(k).normalized()));
    }
    return {u, wrap_angle(std::atan2(w.dot(u), c))};
}

Mat rotation_matrix(const Vec& axis, double angle) {
    const Eigen::Vector3d a = Eigen::Vector3d(axis(0), axis(1), axis(2)).normalized();
    return Mat(Eigen::AngleAxisd(angle, a).toRotationMatrix());
}

} // namespace biflip
