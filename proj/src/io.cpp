#include "biflip/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace biflip {

namespace {

[[noreturn]] void malformed(const std::string& msg) { fail(ErrorCode::MalformedInput, msg); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string text_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_string()) malformed(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

const Json& array_field(const Json& j, const char* key) {
    static const Json empty = Json::array();
    if (!j.contains(key)) return empty;
    const Json& v = j.at(key);
    if (!v.is_array()) malformed(std::string("field '") + key + "' must be an array");
    return v;
}

Vec sized(const Json& j, int n, const char* what) {
    const Vec v = vec_from_json(j);
    if (v.size() != n) malformed(std::string(what) + " needs " + std::to_string(n) + " coordinates");
    return v;
}

// The i-th of a list of coordinate arrays.
const Json& part(const Json& coords, std::size_t i, std::size_t count) {
    if (!coords.is_array() || coords.size() != count || !coords[i].is_array())
        malformed("coordinates must be " + std::to_string(count) + " arrays");
    return coords[i];
}

Vec e0(int n) {
    Vec e = Vec::Zero(n);
    e(0) = 1.0;
    return e;
}

Vec hyperbolic_point(Space space, const Json& coords, Chart chart) {
    const int n = model_dim(space);
    if (chart == Chart::Hyperboloid) {
        const Vec p = sized(coords, n, "hyperboloid point");
        if (lorentz_dot(p, p) <= 0 || p(0) <= 0) fail(ErrorCode::OutOfDomain, "point is not on the hyperboloid");
        return normalize_timelike(p);
    }
    const Chart expected = space == Space::H2 ? Chart::PoincareDisk : Chart::PoincareBall;
    if (chart != expected) fail(ErrorCode::OutOfDomain, "chart does not fit the space");
    return model_convert(sized(coords, n - 1, "Poincare point"), chart, Chart::Hyperboloid);
}

Vec sphere_point(const Json& coords, Chart chart) {
    if (chart == Chart::StereoPlane) return model_convert(sized(coords, 2, "plane point"), chart, Chart::Sphere);
    if (chart != Chart::Sphere) fail(ErrorCode::OutOfDomain, "chart does not fit the sphere");
    const Vec v = sized(coords, 3, "sphere point");
    if (v.norm() < 1e-12) fail(ErrorCode::InvalidFlipper, "zero vector");
    return v.normalized();
}

Vec ideal(const Vec& s) {
    Vec v(4);
    v << 1.0, s(0), s(1), s(2);
    return v;
}

Vec sphere_part(const Vec& null_vector) {
    const Vec n = normalize_null(null_vector);
    return n.tail(3);
}

Chart default_chart(Space space) {
    switch (space) {
    case Space::H2:
    case Space::H3: return Chart::Hyperboloid;
    default: return Chart::Sphere;
    }
}

void format_number(std::string& out, double x) {
    if (!std::isfinite(x)) {
        out += "null";
        return;
    }
    if (x == 0.0) x = 0.0;   // drops the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

void write(std::string& out, const Json& j) {
    switch (j.type()) {
    case Json::value_t::object: {
        out += '{';
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) out += ',';
            first = false;
            out += Json(k).dump();
            out += ':';
            write(out, v);
        }
        out += '}';
        break;
    }
    case Json::value_t::array: {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ',';
            write(out, j[i]);
        }
        out += ']';
        break;
    }
    case Json::value_t::number_float: format_number(out, j.get<double>()); break;
    default: out += j.dump(); break;
    }
}

} // namespace

// ---------------------------------------------------------------------------

const Flipper& Scene::flipper(const std::string& id) const {
    for (const auto& [name, f] : flippers)
        if (name == id) return f;
    malformed("unknown flipper '" + id + "'");
}

const Biflipper& Scene::biflipper(const std::string& id) const {
    for (const auto& [name, b] : biflippers)
        if (name == id) return b;
    malformed("unknown biflipper '" + id + "'");
}

const ReflectionWord& Scene::word(const std::string& id) const {
    for (const auto& [name, w] : words)
        if (name == id) return w;
    malformed("unknown word '" + id + "'");
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        malformed(std::string("invalid JSON: ") + e.what());
    }
}

Json vec_to_json(const Vec& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Vec vec_from_json(const Json& j) {
    if (!j.is_array()) malformed("expected an array of numbers");
    Vec v(static_cast<int>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) malformed("expected an array of numbers");
        v(static_cast<int>(i)) = j[i].get<double>();
    }
    if (!v.allFinite()) malformed("coordinates must be finite");
    return v;
}

Json mat_to_json(const Mat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(Vec(m.row(i).transpose())));
    return rows;
}

Json isometry_to_json(const Isometry& t) {
    Json j;
    j["space"] = std::string(to_string(t.space));
    j["matrix"] = mat_to_json(t.matrix);
    return j;
}

Isometry isometry_from_json(const Json& j) {
    const Space space = space_from_string(text_field(j, "space"));
    const Json& rows = field(j, "matrix");
    const int n = model_dim(space);
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) malformed("matrix has the wrong size");
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.row(i) = sized(rows[static_cast<std::size_t>(i)], n, "matrix row").transpose();
    Isometry t{space, m};
    validate(t);
    return t;
}

// ---------------------------------------------------------------------------

Flipper flipper_from_json(Space space, const Json& j) {
    const FlipperKind kind = flipper_kind_from_string(text_field(j, "kind"));
    const Json coords = j.contains("coords") ? j.at("coords") : Json::array();
    const Chart chart = j.contains("chart") ? chart_from_string(text_field(j, "chart")) : default_chart(space);
    const bool rp2_line = space == Space::RP2 && kind == FlipperKind::Line;
    if (!is_admissible(space, kind) && !rp2_line)
        fail(ErrorCode::InvalidFlipper, std::string(to_string(kind)) + " is not a flipper of " + std::string(to_string(space)));
    switch (kind) {
    case FlipperKind::Whole: return whole_flipper(space);
    case FlipperKind::Point:
        if (is_euclidean(space)) return point_flipper(space, sized(coords, intrinsic_dim(space), "point"));
        if (space == Space::RP2) return point_flipper(space, sized(coords, 3, "point"));
        return point_flipper(space, hyperbolic_point(space, coords, chart));
    case FlipperKind::Line:
        if (space == Space::E2 || space == Space::E3) {
            const int d = intrinsic_dim(space);
            return line_flipper(space, sized(part(coords, 0, 2), d, "line point"), sized(part(coords, 1, 2), d, "line direction"));
        }
        if (space == Space::RP2) return polar_flipper(space, sized(coords, 3, "line normal"));
        if (space == Space::H2) {
            const Vec p = hyperbolic_point(space, part(coords, 0, 2), chart);
            const Vec q = hyperbolic_point(space, part(coords, 1, 2), chart);
            if ((p - q).norm() < 1e-12) fail(ErrorCode::InvalidFlipper, "line needs two distinct points");
            return polar_flipper(space, lorentz_cross(p, q));
        }
        return ideal_line_flipper(space, ideal(sphere_point(part(coords, 0, 2), Chart::Sphere)),
                                  ideal(sphere_point(part(coords, 1, 2), Chart::Sphere)));
    case FlipperKind::Plane:
        if (space == Space::E3)
            return plane_flipper(sized(part(coords, 0, 2), 3, "plane point"), sized(part(coords, 1, 2), 3, "plane normal"));
        return polar_flipper(space, sized(coords, 4, "plane normal"));
    case FlipperKind::PointPair:
        if (space == Space::S2) return pair_flipper(sphere_point(coords, chart));
        return ideal_line_flipper(space, ideal(sphere_point(part(coords, 0, 2), chart)),
                                  ideal(sphere_point(part(coords, 1, 2), chart)));
    case FlipperKind::Circle: return polar_flipper(space, sized(coords, model_dim(space), "circle normal"));
    }
    malformed("unknown flipper kind");
}

Json flipper_to_json(const Flipper& f) {
    Json j;
    j["kind"] = std::string(to_string(f.kind));
    Json coords = Json::array();
    switch (f.kind) {
    case FlipperKind::Whole: break;
    case FlipperKind::Point:
        if (is_euclidean(f.space)) coords = vec_to_json(f.anchor);
        else if (f.space == Space::RP2) coords = vec_to_json(canonical_sign(representative(f).normalized()));
        else coords = vec_to_json(normalize_timelike(representative(f)));
        break;
    case FlipperKind::Line:
        if (is_euclidean(f.space)) {
            coords = Json::array({vec_to_json(f.anchor), vec_to_json(direction(f))});
        } else if (f.space == Space::H2) {
            const BilinearForm form = BilinearForm::for_space(f.space);
            const Vec q0 = normalize_timelike(projector(LinearSubspace{f.basis, 3}, form) * e0(3));
            Vec t = f.basis.col(0) - lorentz_dot(f.basis.col(0), q0) * q0;
            const Vec t2 = f.basis.col(1) - lorentz_dot(f.basis.col(1), q0) * q0;
            if (t2.norm() > t.norm()) t = t2;
            t = canonical_sign(normalize_spacelike(t));
            const Vec q1 = std::cosh(1.0) * q0 + std::sinh(1.0) * t;
            coords = Json::array({vec_to_json(q0), vec_to_json(q1)});
        } else {
            const auto [a, b] = endpoints(f);
            coords = Json::array({vec_to_json(sphere_part(a)), vec_to_json(sphere_part(b))});
        }
        break;
    case FlipperKind::Plane:
        if (f.space == Space::E3) coords = Json::array({vec_to_json(f.anchor), vec_to_json(normal(f))});
        else coords = vec_to_json(normal(f));
        break;
    case FlipperKind::PointPair:
        if (f.space == Space::S2) {
            coords = vec_to_json(representative(f));
        } else {
            const auto [a, b] = endpoints(f);
            coords = Json::array({vec_to_json(sphere_part(a)), vec_to_json(sphere_part(b))});
        }
        break;
    case FlipperKind::Circle: coords = vec_to_json(normal(f)); break;
    }
    j["coords"] = coords;
    return j;
}

Json biflipper_to_json(const Biflipper& b) {
    Json j;
    j["tail"] = flipper_to_json(b.tail);
    j["head"] = flipper_to_json(b.head);
    return j;
}

Json class_to_json(const IsometryClass& c) {
    Json j;
    j["space"] = std::string(to_string(c.space));
    j["label"] = std::string(to_string(c.label));
    auto put = [&j](const char* key, const std::optional<Vec>& v) {
        if (v) j[key] = vec_to_json(*v);
    };
    put("center", c.center);
    put("axis_point", c.axis_point);
    put("axis_direction", c.axis_direction);
    put("normal", c.normal);
    put("vector", c.vector);
    put("ideal_point", c.ideal_point);
    if (c.angle) j["angle"] = *c.angle;
    if (c.length) j["length"] = *c.length;
    return j;
}

Json result_to_json(const H2TResult& r) {
    Json j;
    j["biflipper"] = biflipper_to_json(r.biflipper);
    Json steps = Json::array();
    for (const Move& m : r.steps) {
        Json s;
        s["kind"] = std::string(to_string(m.kind));
        s["flipper"] = std::string(to_string(m.target));
        s["before"] = biflipper_to_json(m.before);
        s["after"] = biflipper_to_json(m.after);
        steps.push_back(s);
    }
    j["steps"] = steps;
    return j;
}

Json word_to_json(const ReflectionWord& w) {
    Json j;
    j["space"] = "E2";
    Json letters = Json::array();
    for (const Flipper& f : w) letters.push_back(flipper_to_json(f));
    j["letters"] = letters;
    return j;
}

Json reduction_to_json(const Reduction& r) {
    Json j = word_to_json(r.word);
    Json steps = Json::array();
    for (const RewriteStep& s : r.steps) {
        Json step;
        step["kind"] = std::string(to_string(s.kind));
        step["position"] = s.position;
        step["replaced"] = word_to_json(s.replaced)["letters"];
        step["replacement"] = word_to_json(s.replacement)["letters"];
        steps.push_back(step);
    }
    j["steps"] = steps;
    return j;
}

Json quaternion_to_json(const Quaternion& q) { return Json::array({q.a, q.b, q.c, q.d}); }

Json error_to_json(const GeometryError& e) {
    Json j;
    j["error"] = {{"name", std::string(e.name())}, {"message", std::string(e.what())}};
    return j;
}

// ---------------------------------------------------------------------------

Scene scene_from_json(const Json& j) {
    if (!j.is_object()) malformed("scene must be a JSON object");
    Scene scene;
    scene.space = space_from_string(text_field(j, "space"));
    auto taken = [&scene](const std::string& id) {
        for (const auto& [n, f] : scene.flippers)
            if (n == id) return true;
        for (const auto& [n, b] : scene.biflippers)
            if (n == id) return true;
        for (const auto& [n, w] : scene.words)
            if (n == id) return true;
        return false;
    };
    for (const Json& f : array_field(j, "flippers")) {
        const std::string id = text_field(f, "id");
        if (taken(id)) malformed("duplicate id '" + id + "'");
        scene.flippers.emplace_back(id, flipper_from_json(scene.space, f));
    }
    for (const Json& b : array_field(j, "biflippers")) {
        const std::string id = text_field(b, "id");
        if (taken(id)) malformed("duplicate id '" + id + "'");
        scene.biflippers.emplace_back(
            id, make_biflipper(scene.flipper(text_field(b, "tail")), scene.flipper(text_field(b, "head"))));
    }
    for (const Json& w : array_field(j, "words")) {
        const std::string id = text_field(w, "id");
        if (taken(id)) malformed("duplicate id '" + id + "'");
        if (scene.space != Space::E2) fail(ErrorCode::UnsupportedSpace, "reflection words live in E2");
        ReflectionWord word;
        for (const Json& letter : array_field(w, "letters")) {
            if (!letter.is_string()) malformed("letters are flipper ids");
            const Flipper& f = scene.flipper(letter.get<std::string>());
            if (f.kind == FlipperKind::Point) {
                const auto [a, b] = point_as_lines(f.anchor);
                word.push_back(a);
                word.push_back(b);
            } else if (f.kind == FlipperKind::Line) {
                word.push_back(f);
            } else {
                fail(ErrorCode::WrongFlipperKind, "letters must be lines or points");
            }
        }
        scene.words.emplace_back(id, word);
    }
    return scene;
}

Json scene_to_json(const Scene& scene) {
    Json j;
    j["space"] = std::string(to_string(scene.space));
    Json flippers = Json::array(), biflippers = Json::array(), words = Json::array();
    for (const auto& [id, f] : scene.flippers) {
        const Json body = flipper_to_json(f);
        Json fj;
        fj["id"] = id;
        fj["kind"] = body.at("kind");
        fj["coords"] = body.at("coords");
        flippers.push_back(fj);
    }
    auto id_of = [&scene](const Flipper& f) -> std::string {
        for (const auto& [id, g] : scene.flippers)
            if (same_flipper(f, g)) return id;
        malformed("flipper is not named in the scene");
    };
    for (const auto& [id, b] : scene.biflippers) biflippers.push_back({{"id", id}, {"tail", id_of(b.tail)}, {"head", id_of(b.head)}});
    auto named = [&scene](const Flipper& f) {
        return std::any_of(scene.flippers.begin(), scene.flippers.end(), [&f](const auto& e) { return same_flipper(f, e.second); });
    };
    for (const auto& [id, w] : scene.words) {
        Json letters = Json::array();
        for (std::size_t i = 0; i < w.size(); ++i) {
            // A point letter was read as its two perpendicular lines.
            if (!named(w[i]) && i + 1 < w.size()) {
                Vec p(2);
                p << w[i + 1].anchor(0), w[i].anchor(1);
                const auto [a, b] = point_as_lines(p);
                if (same_flipper(a, w[i]) && same_flipper(b, w[i + 1])) {
                    letters.push_back(id_of(point_flipper(Space::E2, p)));
                    ++i;
                    continue;
                }
            }
            letters.push_back(id_of(w[i]));
        }
        words.push_back({{"id", id}, {"letters", letters}});
    }
    j["flippers"] = flippers;
    j["biflippers"] = biflippers;
    j["words"] = words;
    return j;
}

std::string dump(const Json& j) {
    std::string out;
    write(out, j);
    return out;
}

} // namespace biflip
