#include "biflip/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>
#include <vector>

namespace biflip {

namespace {

struct P2 {
    double x = 0;
    double y = 0;
};

using Polyline = std::vector<P2>;

std::string num(double x) {
    if (std::abs(x) < 5e-7) x = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Screen-space pieces of one flipper.
struct Shape {
    std::vector<P2> dots;
    std::vector<Polyline> curves;
    P2 anchor;
};

P2 flat(const Vec& v) {
    P2 p;
    if (v.size() > 0) p.x = v(0);
    if (v.size() > 1) p.y = v(1);
    return p;
}

// Poincare chart of a hyperboloid point, first two coordinates.
P2 disk(const Vec& x) { return {x(1) / (1 + x(0)), x(2) / (1 + x(0))}; }

Polyline segment(const Vec& p, const Vec& d, double reach) {
    Polyline out;
    for (double s : {-reach, reach}) out.push_back(flat(Vec(p + s * d)));
    return out;
}

Polyline great_circle(const Vec& n) {
    const Vec a = reference_perpendicular(n);
    const Vec b = Vec(cross3(n.normalized(), a));
    Polyline out;
    for (int i = 0; i <= 96; ++i) {
        const double t = 2 * M_PI * i / 96;
        out.push_back(flat(Vec(std::cos(t) * a + std::sin(t) * b)));
    }
    return out;
}

Shape shape_of(const Flipper& f, double reach) {
    Shape s;
    const Space sp = f.space;
    switch (f.kind) {
    case FlipperKind::Whole: return s;
    case FlipperKind::Point:
        if (is_euclidean(sp)) s.anchor = flat(f.anchor);
        else if (sp == Space::RP2) s.anchor = flat(canonical_sign(representative(f).normalized()));
        else s.anchor = disk(normalize_timelike(representative(f)));
        s.dots.push_back(s.anchor);
        return s;
    case FlipperKind::Line:
        if (is_euclidean(sp)) {
            s.anchor = flat(f.anchor);
            s.curves.push_back(segment(f.anchor, direction(f), reach));
        } else if (sp == Space::H2) {
            const Vec n = normal(f);
            Vec e0 = Vec::Zero(3);
            e0(0) = 1;
            const Vec q0 = normalize_timelike(Vec(e0 - (lorentz_dot(e0, n) / lorentz_dot(n, n)) * n));
            const Vec t = normalize_spacelike(lorentz_cross(n, q0));
            Polyline line;
            for (int i = -48; i <= 48; ++i) {
                const double u = i / 8.0;
                line.push_back(disk(Vec(std::cosh(u) * q0 + std::sinh(u) * t)));
            }
            s.curves.push_back(line);
            s.anchor = disk(q0);
        } else {
            const auto [a, b] = endpoints(f);
            s.dots = {flat(Vec(a.tail(3))), flat(Vec(b.tail(3)))};
            s.curves.push_back({s.dots[0], s.dots[1]});
            s.anchor = {(s.dots[0].x + s.dots[1].x) / 2, (s.dots[0].y + s.dots[1].y) / 2};
        }
        return s;
    case FlipperKind::Plane:
        if (sp == Space::E3) {
            s.anchor = flat(f.anchor);
            s.curves.push_back(segment(f.anchor, f.basis.col(0), reach));
            s.curves.push_back(segment(f.anchor, f.basis.col(1), reach));
        } else {
            const Vec n = normal(f);
            s.anchor = flat(Vec(n.tail(3).normalized()));
            s.dots.push_back(s.anchor);
        }
        return s;
    case FlipperKind::PointPair:
        if (sp == Space::S2) {
            const Vec v = representative(f);
            s.anchor = flat(v);
            s.dots = {s.anchor, P2{-s.anchor.x, -s.anchor.y}};
        } else {
            const auto [a, b] = endpoints(f);
            s.dots = {flat(Vec(a.tail(3))), flat(Vec(b.tail(3)))};
            s.anchor = s.dots[0];
        }
        return s;
    case FlipperKind::Circle: {
        const Vec n = normal(f);
        const Vec axis = sp == Space::S2 ? n : Vec(n.tail(3));
        s.curves.push_back(great_circle(axis));
        s.anchor = flat(axis.normalized());
        return s;
    }
    }
    return s;
}

// Nearest points of two affine flippers.
std::pair<Vec, Vec> closest(const Flipper& f, const Flipper& g) {
    const int n = static_cast<int>(f.anchor.size());
    Mat m(n, f.dim() + g.dim());
    m << f.basis, -g.basis;
    if (m.cols() == 0) return {f.anchor, g.anchor};
    const Vec st = m.completeOrthogonalDecomposition().solve(Vec(g.anchor - f.anchor));
    return {Vec(f.anchor + f.basis * st.head(f.dim())), Vec(g.anchor + g.basis * st.tail(g.dim()))};
}

// Arc of radius r about c from direction u to direction v, the short way
// round, projected to the first two coordinates.
Polyline arc(const Vec& c, const Vec& u, const Vec& v, double r) {
    const Vec e = u.normalized();
    Vec w = v.normalized() - v.normalized().dot(e) * e;
    const double angle = std::atan2(w.norm(), v.normalized().dot(e));
    if (w.norm() > 1e-12) w.normalize();
    Polyline out;
    for (int i = 0; i <= 24; ++i) {
        const double t = angle * i / 24;
        out.push_back(flat(Vec(c + r * (std::cos(t) * e + std::sin(t) * w))));
    }
    return out;
}

class Canvas {
public:
    explicit Canvas(double reach) : reach_(reach) {}

    void flipper(const Flipper& f, const char* color, double width) {
        const Shape s = shape_of(f, reach_ * 4);
        for (const Polyline& c : s.curves) {
            out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\" points=\"";
            for (std::size_t i = 0; i < c.size(); ++i) out_ << (i ? " " : "") << num(c[i].x) << "," << num(-c[i].y);
            out_ << "\"/>";
        }
        for (const P2& d : s.dots)
            out_ << "<circle cx=\"" << num(d.x) << "\" cy=\"" << num(-d.y) << "\" r=\"" << num(width * 2.5) << "\" fill=\"" << color << "\"/>";
    }

    // Arrow from the tail to the head: a line with a triangular head, or an
    // arc-arrow around the meeting point of two intersecting lines.
    void arrow(const Biflipper& b, const char* color, double width) {
        Polyline path;
        if (is_euclidean(b.space()) && b.tail.kind != FlipperKind::Whole && b.head.kind != FlipperKind::Whole) {
            const auto [p, q] = closest(b.tail, b.head);
            if ((p - q).norm() < 1e-9 && b.tail.dim() == 1 && b.head.dim() == 1)
                path = arc(p, b.tail.basis.col(0), b.head.basis.col(0), reach_ * 0.15);
            else
                path = {flat(p), flat(q)};
        } else {
            path = {shape_of(b.tail, reach_).anchor, shape_of(b.head, reach_).anchor};
        }
        out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\" points=\"";
        for (std::size_t i = 0; i < path.size(); ++i) out_ << (i ? " " : "") << num(path[i].x) << "," << num(-path[i].y);
        out_ << "\"/>";
        const P2 a = path[path.size() - 2], c = path.back();
        const double dx = c.x - a.x, dy = c.y - a.y, len = std::hypot(dx, dy);
        if (len < 1e-12) return;
        const double ux = dx / len, uy = dy / len, h = width * 6;
        const P2 l{c.x - h * ux - h * 0.5 * uy, c.y - h * uy + h * 0.5 * ux};
        const P2 r{c.x - h * ux + h * 0.5 * uy, c.y - h * uy - h * 0.5 * ux};
        out_ << "<polygon fill=\"" << color << "\" points=\"" << num(c.x) << "," << num(-c.y) << " " << num(l.x) << ","
             << num(-l.y) << " " << num(r.x) << "," << num(-r.y) << "\"/>";
    }

    void biflipper(const Biflipper& b, const char* color, double width) {
        flipper(b.tail, color, width);
        flipper(b.head, color, width);
        arrow(b, color, width);
    }

    std::ostringstream& out() { return out_; }

private:
    double reach_;
    std::ostringstream out_;
};

double extent(const std::vector<Biflipper>& all) {
    double r = 1.0;
    for (const Biflipper& b : all) {
        for (const Flipper* f : {&b.tail, &b.head}) {
            if (!is_euclidean(f->space) || f->kind == FlipperKind::Whole) continue;
            r = std::max(r, f->anchor.cwiseAbs().maxCoeff());
        }
    }
    return r;
}

} // namespace

std::string render_svg(const Biflipper& first, const Biflipper& second, const H2TResult& result) {
    const Space sp = first.space();
    std::vector<Biflipper> all{first, second, result.biflipper};
    for (const Move& m : result.steps) {
        all.push_back(m.before);
        all.push_back(m.after);
    }
    const double reach = is_euclidean(sp) ? std::ceil(extent(all) * 1.25 + 1.0) : 1.15;
    const double w = reach * 0.004;
    Canvas canvas(reach);
    auto& out = canvas.out();
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(-reach) << " " << num(-reach) << " "
        << num(2 * reach) << " " << num(2 * reach) << "\" data-space=\"" << to_string(sp) << "\">";
    out << "<rect x=\"" << num(-reach) << "\" y=\"" << num(-reach) << "\" width=\"" << num(2 * reach) << "\" height=\""
        << num(2 * reach) << "\" fill=\"white\"/>";
    if (!is_euclidean(sp))
        out << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#999\" stroke-width=\"" << num(w) << "\"/>";
    out << "<g class=\"operands\">";
    canvas.biflipper(first, "#1f77b4", w);
    canvas.biflipper(second, "#2ca02c", w);
    out << "</g>";
    for (std::size_t i = 0; i < result.steps.size(); ++i) {
        const Move& m = result.steps[i];
        out << "<g class=\"move\" data-step=\"" << i << "\" data-kind=\"" << to_string(m.kind) << "\" data-flipper=\""
            << to_string(m.target) << "\">";
        canvas.biflipper(m.before, "#bbbbbb", w);
        canvas.biflipper(m.after, "#ff7f0e", w);
        out << "</g>";
    }
    out << "<g class=\"result\">";
    canvas.biflipper(result.biflipper, "#d62728", w * 1.5);
    out << "</g></svg>\n";
    return out.str();
}

} // namespace biflip
