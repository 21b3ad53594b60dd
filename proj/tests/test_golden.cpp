#include <cstdlib>

#include <gtest/gtest.h>

#include "support/golden.hpp"

using namespace biflip::testing;

// BIFLIP_UPDATE_GOLDEN=1 rewrites the expected files instead of comparing.
TEST(Golden, CorpusHasTwentyScenes) { EXPECT_EQ(corpus_scenes().size(), 20u); }

TEST(Golden, CliOutputMatchesExpectedBytes) {
    const bool update = std::getenv("BIFLIP_UPDATE_GOLDEN") != nullptr;
    if (update) fs::create_directories(golden_dir() / "expected");
    for (const GoldenCase& c : corpus_cases()) {
        const std::string got = golden_text(run_cli_args(c.args));
        if (update) {
            std::ofstream(c.expected_path(), std::ios::binary) << got;
            continue;
        }
        ASSERT_TRUE(fs::exists(c.expected_path())) << c.expected_path();
        EXPECT_EQ(got, read_text(c.expected_path())) << c.scene << " " << c.label;
    }
}

TEST(Golden, RepeatedRunsAreIdentical) {
    for (const GoldenCase& c : corpus_cases()) EXPECT_EQ(golden_text(run_cli_args(c.args)), golden_text(run_cli_args(c.args)));
}

TEST(Golden, StrictComposeOnUnlinkedRotaryPair) {
    const GoldenCase base{"e3_rotary_unlinked", "", {}, "", {}};
    const CliRun r = run_cli_args({"biflip", "compose", base.scene_path().string(), "--first", "b1", "--second", "b2", "--strict"});
    EXPECT_EQ(r.status, 1);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(r.err.rfind("error: NotLinked: ", 0), 0u) << r.err;
}
