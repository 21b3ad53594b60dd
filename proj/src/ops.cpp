#include "biflip/ops.hpp"

#include <algorithm>

namespace biflip {

namespace {

std::string param(const Json& request, const char* key) {
    if (!request.is_object() || !request.contains(key) || !request.at(key).is_string())
        fail(ErrorCode::MalformedInput, std::string("missing parameter '") + key + "'");
    return request.at(key).get<std::string>();
}

double tolerance(const Json& request) {
    if (!request.contains("tol")) return default_eps;
    const Json& t = request.at("tol");
    if (!t.is_number() || !(t.get<double>() > 0)) fail(ErrorCode::MalformedInput, "tol must be a positive number");
    return t.get<double>();
}

Mode mode_of(const Json& request) {
    if (!request.contains("mode")) return Mode::Fallback;
    const std::string m = param(request, "mode");
    if (m == "strict") return Mode::Strict;
    if (m == "fallback") return Mode::Fallback;
    fail(ErrorCode::MalformedInput, "mode must be 'strict' or 'fallback'");
}

Side side_of(const Json& request) {
    const std::string s = param(request, "side");
    if (s == "tail") return Side::Tail;
    if (s == "head") return Side::Head;
    fail(ErrorCode::MalformedInput, "side must be 'tail' or 'head'");
}

Scene scene_of(const Json& request) {
    if (!request.is_object() || !request.contains("scene")) fail(ErrorCode::MalformedInput, "missing scene");
    return scene_from_json(request.at("scene"));
}

Json op_encode(const Json& r) { return isometry_to_json(encode(scene_of(r).biflipper(param(r, "biflipper")))); }

Json op_classify(const Json& r) { return class_to_json(classify(encode(scene_of(r).biflipper(param(r, "biflipper"))))); }

Json op_compose(const Json& r) {
    const Scene s = scene_of(r);
    return result_to_json(head_to_tail(s.biflipper(param(r, "first")), s.biflipper(param(r, "second")), mode_of(r)));
}

Json op_linked(const Json& r) {
    const Scene s = scene_of(r);
    const auto e = linked(encode(s.biflipper(param(r, "second"))), encode(s.biflipper(param(r, "first"))));
    Json j;
    j["linked"] = e.has_value();
    j["flipper"] = e ? flipper_to_json(*e) : Json(nullptr);
    return j;
}

Json op_equivalent(const Json& r) {
    const Scene s = scene_of(r);
    Tolerance tol;
    tol.abs_eps = tolerance(r);
    Json j;
    j["equivalent"] = equivalent(s.biflipper(param(r, "a")), s.biflipper(param(r, "b")), tol);
    return j;
}

Json op_rebase(const Json& r) {
    const Scene s = scene_of(r);
    const Biflipper& b = s.biflipper(param(r, "biflipper"));
    return biflipper_to_json(rebase(encode(b), s.flipper(param(r, "flipper")), side_of(r), tolerance(r)));
}

Json op_reduce(const Json& r) { return reduction_to_json(reduce(scene_of(r).word(param(r, "word")))); }

Json op_lift(const Json& r) {
    Json j;
    j["quaternion"] = quaternion_to_json(lift_biflipper(scene_of(r).biflipper(param(r, "biflipper"))));
    return j;
}

Json op_spaces(const Json&) {
    Json list = Json::array();
    for (Space s : {Space::E1, Space::E2, Space::E3, Space::S2, Space::RP2, Space::H2, Space::H3, Space::Moeb})
        list.push_back(std::string(to_string(s)));
    Json j;
    j["spaces"] = list;
    return j;
}

using Handler = Json (*)(const Json&);

const std::vector<std::pair<std::string, Handler>>& table() {
    static const std::vector<std::pair<std::string, Handler>> t{
        {"encode", op_encode},       {"classify", op_classify}, {"compose", op_compose},
        {"equivalent", op_equivalent}, {"rebase", op_rebase},   {"linked", op_linked},
        {"reduce", op_reduce},       {"quaternion/lift", op_lift}, {"spaces", op_spaces},
    };
    return t;
}

} // namespace

const std::vector<std::string>& operation_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, h] : table()) n.push_back(name);
        return n;
    }();
    return names;
}

bool has_operation(std::string_view name) {
    const auto& names = operation_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

Json run_operation(std::string_view name, const Json& request) {
    for (const auto& [n, handler] : table())
        if (n == name) return handler(request);
    fail(ErrorCode::MalformedInput, "unknown operation '" + std::string(name) + "'");
}

} // namespace biflip
