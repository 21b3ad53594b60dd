#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "biflip/io.hpp"
#include "support/random_geometry.hpp"

using namespace biflip;
using biflip::testing::Rng;

namespace {

const char* scene_text = R"({
  "space": "E2",
  "flippers": [
    {"id": "p", "kind": "point", "coords": [0, 0]},
    {"id": "q", "kind": "point", "coords": [1, 0]},
    {"id": "l", "kind": "line", "coords": [[0, 0], [0, 1]]},
    {"id": "m", "kind": "line", "coords": [[1, 0], [0, 1]]}
  ],
  "biflippers": [{"id": "b", "tail": "p", "head": "q"}],
  "words": [{"id": "w", "letters": ["l", "m", "p"]}]
})";

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const GeometryError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return ErrorCode::NotInvolution;
}

} // namespace

TEST(Io, FlipperRoundTripAllSpaces) {
    Rng rng(41);
    for (Space space : all_spaces) {
        for (FlipperKind kind : biflip::testing::proper_kinds(space)) {
            for (int i = 0; i < 20; ++i) {
                const Flipper f = biflip::testing::random_flipper(rng, space, kind);
                const Flipper g = flipper_from_json(space, flipper_to_json(f));
                EXPECT_TRUE(same_flipper(f, g)) << to_string(space) << " " << to_string(kind);
                EXPECT_LT(max_abs(flip_of(f).matrix - flip_of(g).matrix), 1e-9);
            }
        }
    }
}

TEST(Io, SceneRoundTripIsStable) {
    const Scene s = scene_from_json(parse_json(scene_text));
    ASSERT_EQ(s.flippers.size(), 4u);
    ASSERT_EQ(s.words.size(), 1u);
    // The point letter stands for two perpendicular lines.
    EXPECT_EQ(s.word("w").size(), 4u);
    const std::string once = dump(scene_to_json(s));
    const std::string twice = dump(scene_to_json(scene_from_json(parse_json(once))));
    EXPECT_EQ(once, twice);
}

TEST(Io, PoincareChartMatchesHyperboloid) {
    const Json disk = {{"kind", "point"}, {"coords", {0.5, 0.0}}, {"chart", "poincare-disk"}};
    const Flipper f = flipper_from_json(Space::H2, disk);
    // Disk radius r sits at hyperbolic distance 2 artanh r from the origin.
    const double d = 2 * std::atanh(0.5);
    const Json hyp = {{"kind", "point"}, {"coords", {std::cosh(d), std::sinh(d), 0.0}}};
    EXPECT_TRUE(same_flipper(f, flipper_from_json(Space::H2, hyp)));
}

TEST(Io, IsometryRoundTrip) {
    Rng rng(42);
    for (Space space : all_spaces) {
        const Isometry t = biflip::testing::random_isometry(rng, space);
        const Isometry u = isometry_from_json(parse_json(dump(isometry_to_json(t))));
        EXPECT_EQ(max_abs(t.matrix - u.matrix), 0.0) << to_string(space);
    }
}

TEST(Io, DumpIsDeterministicText) {
    EXPECT_EQ(dump(Json::array({0.1, -0.0, 2.0, 1e-300})), "[0.10000000000000001,0,2,1e-300]");
    EXPECT_EQ(dump(Json::array({std::numeric_limits<double>::quiet_NaN()})), "[null]");
    EXPECT_EQ(dump(Json{{"b", 1}, {"a", "x\"y"}}), R"({"b":1,"a":"x\"y"})");
}

TEST(Io, MalformedScenes) {
    EXPECT_EQ(code_of([] { parse_json("{"); }), ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] { scene_from_json(parse_json(R"({"space":"E9","flippers":[]})")); }), ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] {
                  scene_from_json(parse_json(R"({"space":"E2","flippers":[{"id":"a","kind":"point","coords":[0,0]},
                                                 {"id":"a","kind":"point","coords":[1,0]}]})"));
              }),
              ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] {
                  scene_from_json(parse_json(R"({"space":"E2","flippers":[],"biflippers":[{"id":"b","tail":"x","head":"y"}]})"));
              }),
              ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] { scene_from_json(parse_json(R"({"space":"E2","flippers":[{"id":"a","kind":"point","coords":[0]}]})")); }),
              ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] {
                  scene_from_json(parse_json(R"({"space":"S2","flippers":[{"id":"c","kind":"circle","coords":[0,0,1]}],
                                                 "words":[{"id":"w","letters":["c"]}]})"));
              }),
              ErrorCode::UnsupportedSpace);
}

TEST(Io, InvalidGeometryKeepsItsName) {
    EXPECT_EQ(code_of([] { flipper_from_json(Space::E2, Json{{"kind", "plane"}, {"coords", Json::array()}}); }),
              ErrorCode::InvalidFlipper);
    EXPECT_EQ(code_of([] { flipper_from_json(Space::H2, Json{{"kind", "point"}, {"coords", {0.9, 0.9}}, {"chart", "poincare-disk"}}); }),
              ErrorCode::OutOfDomain);
}
