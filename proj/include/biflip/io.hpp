#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "biflip/headtotail.hpp"
#include "biflip/quaternion.hpp"
#include "biflip/wordreduce.hpp"

namespace biflip {

using Json = nlohmann::ordered_json;

// Named objects of one space. Names keep their file order.
struct Scene {
    Space space = Space::E2;
    std::vector<std::pair<std::string, Flipper>> flippers;
    std::vector<std::pair<std::string, Biflipper>> biflippers;
    std::vector<std::pair<std::string, ReflectionWord>> words;

    const Flipper& flipper(const std::string& id) const;
    const Biflipper& biflipper(const std::string& id) const;
    const ReflectionWord& word(const std::string& id) const;
};

// All parse errors are MalformedInput; invalid geometry keeps its own name.
Json parse_json(const std::string& text);
Scene scene_from_json(const Json& j);
Json scene_to_json(const Scene& scene);

// Flipper coordinates per kind (default charts in brackets):
//   point        E: [x..]; H2, H3: [hyperboloid] or poincare-disk / poincare-ball; RP2: [x, y, z]
//   line         E2, E3: [[point], [direction]]; H2: [[p], [q]] two points; H3: [[a], [b]] ideal
//                endpoints on the unit sphere; RP2: [normal] (stored as its pole point)
//   plane        E3: [[point], [normal]]; H3: [normal] spacelike 4-vector
//   point-pair   S2: [x, y, z] (sphere or stereo-plane); MOEB: [[a], [b]] on the sphere
//   circle       S2: [normal]; MOEB: [normal] spacelike 4-vector
Flipper flipper_from_json(Space space, const Json& j);
Json flipper_to_json(const Flipper& f);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
Json mat_to_json(const Mat& m);
Json isometry_to_json(const Isometry& t);
Isometry isometry_from_json(const Json& j);
Json biflipper_to_json(const Biflipper& b);
Json class_to_json(const IsometryClass& c);
Json result_to_json(const H2TResult& r);
Json reduction_to_json(const Reduction& r);
Json word_to_json(const ReflectionWord& w);
Json quaternion_to_json(const Quaternion& q);
Json error_to_json(const GeometryError& e);

// Deterministic text: 17 significant digits, -0 written as 0, no spaces.
std::string dump(const Json& j);

} // namespace biflip
