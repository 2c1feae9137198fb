#include "generec/creator.hpp"
#include "generec/error.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace generec;
using namespace testutil;

namespace {

GuidanceSignal create_guidance(Vector g)
{
    GuidanceSignal s;
    s.mode = GuidanceSignal::Mode::create;
    s.preference = std::move(g);
    return s;
}

}  // namespace

TEST_CASE("noise-free full blend reaches the guidance after one step")
{
    const auto space = ContentSpace::pixels(3, 3);
    const Encoder enc = Encoder::identity(space.dim);
    std::mt19937_64 rng(1);
    Vector g = random_vector(rng, space.dim, -0.2, 1.2);
    CreationConfig cfg;
    cfg.noise_scale = 0.0;
    cfg.blend = 1.0;
    cfg.num_frames = 5;
    std::vector<Vector> trace;
    const Item item = create(create_guidance(g), cfg, enc, space, "c1", &trace);
    clamp_unit(g);
    REQUIRE(trace.size() == cfg.steps + 1);
    CHECK(trace[1] == g);
    for (const auto& f : item.frames) CHECK(f == g);
    CHECK(item.provenance == Provenance::ai_created);
    CHECK_FALSE(item.watermarked);
    CHECK(item.frames.size() == 5);
}

TEST_CASE("creation is deterministic per seed")
{
    const auto space = ContentSpace::pixels(4, 4);
    const Encoder enc = Encoder::identity(space.dim);
    std::mt19937_64 rng(2);
    const auto g = create_guidance(random_vector(rng, space.dim));
    CreationConfig cfg;
    cfg.seed = 42;
    const Item a = create(g, cfg, enc, space, "x");
    const Item b = create(g, cfg, enc, space, "x");
    CHECK(a == b);
    cfg.seed = 43;
    CHECK(create(g, cfg, enc, space, "x").frames != a.frames);
    for (const auto& f : a.frames)
        for (double v : f) REQUIRE((v >= 0.0 && v <= 1.0));
}

TEST_CASE("creation moves toward the guidance compared with uniform noise")
{
    const auto space = ContentSpace::pixels(16, 16);
    const Encoder enc = Encoder::identity(space.dim);
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed + 77);
        const Vector g = random_vector(rng, space.dim);
        CreationConfig cfg;
        cfg.seed = seed;
        const Item item = create(create_guidance(g), cfg, enc, space, "c");
        const Vector baseline = mean_of(random_frames(rng, cfg.num_frames, space.dim));
        if (cosine(mean_of(item.frames), g) > cosine(baseline, g)) ++wins;
    }
    CHECK(wins >= 95);
}

TEST_CASE("creation applies a style and validates config")
{
    const auto space = ContentSpace::pixels(2, 2);
    const Encoder enc = Encoder::identity(space.dim);
    auto g = create_guidance(Vector(space.dim, 0.5));
    g.style = "grayscale";
    CreationConfig cfg;
    const Item item = create(g, cfg, enc, space, "styled");
    CHECK(item.id == "styled");
    CHECK(item.provenance == Provenance::ai_created);
    CHECK_FALSE(item.parent_id.has_value());
    for (const auto& f : item.frames) CHECK(f[0] == f[1]);

    cfg.noise_decay = 1.5;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = CreationConfig{};
    cfg.num_frames = 0;
    CHECK_THROWS_AS(create(g, cfg, enc, space, "bad"), Error);
}
