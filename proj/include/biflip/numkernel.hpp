#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "biflip/errors.hpp"

namespace biflip {

// Every model in this library is at most 4x4, so storage is bounded and
// stays on the stack.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

enum class Space { E1, E2, E3, S2, RP2, H2, H3, Moeb };

inline constexpr std::array<Space, 8> all_spaces{Space::E1, Space::E2, Space::E3, Space::S2,
                                                 Space::RP2, Space::H2, Space::H3, Space::Moeb};

std::string_view to_string(Space space);
Space space_from_string(std::string_view name);

bool is_euclidean(Space space);
bool is_lorentzian(Space space);   // H2, H3, MOEB
int intrinsic_dim(Space space);    // dimension of the geometry itself
int model_dim(Space space);        // size of the matrices that represent isometries

struct Tolerance {
    double abs_eps = 1e-9;
    bool projective = false;
};

inline constexpr double default_eps = 1e-9;
inline constexpr double rank_eps = 1e-8;

// diag(+1 x p, -1 x q)
struct BilinearForm {
    int p = 0;
    int q = 0;

    int dim() const { return p + q; }
    Mat gram() const;
    double operator()(const Vec& x, const Vec& y) const;

    static BilinearForm euclidean(int n) { return {n, 0}; }
    static BilinearForm lorentz(int n) { return {1, n}; }
    // Form of the linear model; Euclidean spaces report the form of their
    // direction space.
    static BilinearForm for_space(Space space);
};

struct LinearSubspace {
    Mat basis;   // columns
    int ambient_dim = 0;

    int dim() const { return static_cast<int>(basis.cols()); }
};

struct AffineSubspace {
    Vec anchor;
    LinearSubspace direction;
};

struct Isometry {
    Space space = Space::E2;
    Mat matrix;

    Isometry inverse() const;
    Isometry operator*(const Isometry& rhs) const;   // this after rhs
    Vec apply(const Vec& point) const;               // affine for Euclidean spaces

    static Isometry identity(Space space);
};

using IsometryMatrix = Isometry;

// Form-orthogonal projector onto sub. Throws DegenerateRestriction.
Mat projector(const LinearSubspace& sub, const BilinearForm& form);

// The involution 2P - I fixing exactly sub.
Mat reflection_matrix(const LinearSubspace& sub, const BilinearForm& form);
// Homogeneous (n+1)x(n+1) matrix of the Euclidean flip in an affine subspace.
Mat reflection_matrix(const AffineSubspace& sub);

// Gram-Schmidt in the given form with largest-|pivot| ordering, ties by
// lowest index. Null vectors are combined pairwise before normalisation.
LinearSubspace canonicalize(const LinearSubspace& sub, const BilinearForm& form);

// Orthonormal basis of the kernel of m; singular values below
// tol * max(1, |m|) count as zero.
Mat null_space(const Mat& m, double tol = rank_eps);

double max_abs(const Mat& m);
bool approx_equal(const Mat& a, const Mat& b, double eps);
bool approx_equal(const Isometry& a, const Isometry& b, Tolerance tol = {});
// Deviation used by every "within tolerance" claim about isometries:
// max-entry distance, or its minimum over +/- for projective comparison.
double distance(const Isometry& a, const Isometry& b, bool projective = false);

bool is_involution(const Mat& m, double eps = default_eps);
bool is_form_isometry(const Isometry& t, double eps = 1e-8);
void validate(const Isometry& t, double eps = 1e-8);   // throws InvalidIsometry

// ---- Lorentz helpers (signature (1, n), time coordinate first) ----

double lorentz_dot(const Vec& x, const Vec& y);
// G * (a x b): the vector Lorentz-orthogonal to both arguments (n = 2).
Vec lorentz_cross(const Vec& a, const Vec& b);
// Pure boost mapping the future unit timelike vector p to e0.
Mat boost_to_origin(const Vec& p);
Vec normalize_timelike(const Vec& v);   // <v,v> = 1, v0 > 0
Vec normalize_spacelike(const Vec& v);  // <v,v> = -1
Vec normalize_null(const Vec& v);       // v0 = 1

// ---- Charts ----

enum class Chart { PoincareDisk, PoincareBall, Hyperboloid, Sphere, StereoPlane };

std::string_view to_string(Chart chart);
Chart chart_from_string(std::string_view name);

Vec model_convert(const Vec& point, Chart from, Chart to);

// ---- small 3D helpers shared by the Euclidean and spherical code ----

Eigen::Vector3d cross3(const Vec& a, const Vec& b);
// First non-negligible coordinate made positive.
Vec canonical_sign(const Vec& v);
// Unit vector perpendicular to u, built from the coordinate axis least
// aligned with u (ties by lowest index).
Vec reference_perpendicular(const Vec& u);
// Rotation axis (canonical sign) and signed angle in (-pi, pi].
struct AxisAngle {
    Vec axis;
    double angle = 0.0;
};
AxisAngle axis_angle(const Mat& rotation3);
Mat rotation_matrix(const Vec& axis, double angle);
double wrap_angle(double angle);   // to (-pi, pi]

} // namespace biflip
