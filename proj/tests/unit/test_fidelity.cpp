#include "generec/error.hpp"
#include "generec/fidelity.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace generec;
using namespace testutil;

TEST_CASE("splitmix64 reference values")
{
    // First outputs for seed 0 from the reference implementation.
    SplitMix64 s(0);
    CHECK(s.next() == 0xE220A8397B1DCDAFull);
    CHECK(s.next() == 0x6E789E6AA1B965F4ull);
    CHECK(s.next() == 0x06C45D188009454Full);
}

TEST_CASE("chips are a balanced +-1 sequence keyed per frame")
{
    const auto a = watermark_chips(11, 0, 768);
    const auto b = watermark_chips(11, 1, 768);
    const auto c = watermark_chips(12, 0, 768);
    REQUIRE(a.size() == 768);
    int sum = 0;
    for (int v : a) {
        REQUIRE((v == 1 || v == -1));
        sum += v;
    }
    CHECK(std::abs(sum) < 100);
    CHECK(a != b);
    CHECK(a != c);
    CHECK(a == watermark_chips(11, 0, 768));
}

TEST_CASE("embedding on a zero frame adds alpha times the chips")
{
    const auto space = ContentSpace::features(768);
    const WatermarkKey key{99, 0.05, 0.5};
    Item item = make_item("z", {Vector(768, 0.0), Vector(768, 0.0)});
    item.provenance = Provenance::ai_created;
    const Item marked = watermark_embed(item, key, space);
    CHECK(marked.watermarked);
    for (std::size_t t = 0; t < 2; ++t) {
        const auto s = watermark_chips(99, t, 768);
        for (std::size_t i = 0; i < 768; ++i) REQUIRE(marked.frames[t][i] == 0.05 * s[i]);
    }
    const auto det = watermark_detect(marked, key);
    CHECK(det.statistic == 1.0);
    CHECK(det.detected);

    const auto clean = watermark_detect(item, key);
    CHECK(clean.statistic == 0.0);
    CHECK_FALSE(clean.detected);

    try {
        watermark_embed(marked, key, space);
        FAIL("expected AlreadyWatermarked");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::already_watermarked);
    }
}

TEST_CASE("removing a mark restores the content")
{
    const auto space = ContentSpace::features(64);
    const WatermarkKey key{3, 0.05, 0.5};
    std::mt19937_64 rng(4);
    Item item = make_item("x", random_frames(rng, 3, 64));
    for (auto& f : item.frames)
        for (auto& v : f) v = std::ldexp(std::round(std::ldexp(v, 20)), -20);  // dyadic, so +-alpha*s undoes exactly
    const WatermarkKey dyadic{3, 0.0625, 0.5};
    const Item back = watermark_remove(watermark_embed(item, dyadic, space), dyadic, space);
    CHECK(back == item);
    CHECK(watermark_remove(item, key, space) == item);
}

TEST_CASE("detection rates on random pixel content")
{
    const auto space = ContentSpace::pixels(16, 16);
    const WatermarkKey key{0xabc, 0.05, 0.5};
    const WatermarkKey wrong{0xabd, 0.05, 0.5};
    std::mt19937_64 rng(8);
    int hits = 0, wrong_hits = 0, clean_hits = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Item item = make_item("r", random_frames(rng, 16, space.dim));
        const Item marked = watermark_embed(item, key, space);
        hits += watermark_detect(marked, key).detected;
        wrong_hits += std::abs(watermark_detect(marked, wrong).statistic) >= 0.5;
        clean_hits += watermark_detect(item, key).detected;
    }
    CHECK(hits == 200);
    CHECK(wrong_hits <= 2);
    CHECK(clean_hits <= 2);
}

TEST_CASE("fidelity checks")
{
    const auto space = ContentSpace::pixels(2, 2);
    std::mt19937_64 rng(1);
    const Item human = make_item("h", random_frames(rng, 3, space.dim));

    const CheckReport ok = run_checks(human, space);
    CHECK(ok.pass());
    const std::vector<std::string> order = {"Finiteness", "ValueRange", "WatermarkPresent", "QualityGate",
                                            "Bias",       "Privacy",    "Safety",           "Authenticity",
                                            "Legal"};
    REQUIRE(ok.results.size() == order.size());
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(ok.results[i].check == order[i]);

    Item created = human;
    created.provenance = Provenance::ai_created;
    const CheckReport unmarked = run_checks(created, space);
    CHECK_FALSE(unmarked.pass());
    CHECK_FALSE(unmarked.find("WatermarkPresent")->pass);

    const WatermarkKey key{5, 0.05, 0.5};
    const Item marked = watermark_embed(created, key, space);
    CHECK(run_checks(marked, space, CheckConfig{key}).pass());
    // A flag without a detectable mark fails when the key is known.
    const auto big = ContentSpace::pixels(16, 16);
    Item forged = make_item("f", random_frames(rng, 16, big.dim));
    forged.provenance = Provenance::ai_created;
    forged.watermarked = true;
    CHECK(run_checks(forged, big).pass());
    CHECK_FALSE(run_checks(forged, big, CheckConfig{key}).pass());

    Item nan = human;
    nan.frames[2][1] = std::numeric_limits<double>::quiet_NaN();
    const CheckReport bad = run_checks(nan, space);
    CHECK_FALSE(bad.pass());
    const CheckResult* fin = bad.find("Finiteness");
    REQUIRE(fin != nullptr);
    CHECK_FALSE(fin->pass);
    CHECK(fin->reason.find("frame 2") != std::string::npos);

    Item range = human;
    range.frames[0][0] = 1.2;
    CHECK_FALSE(run_checks(range, space).find("ValueRange")->pass);

    FidelityChecker checker;
    checker.register_predicate("Safety", [](const Item&) { return CheckResult{"Safety", false, "blocked"}; });
    checker.register_predicate("Custom", [](const Item&) { return CheckResult{"Custom", true, ""}; });
    const CheckReport custom = checker.run(human, space, {});
    CHECK_FALSE(custom.pass());
    CHECK(custom.results.size() == order.size() + 1);
    CHECK(custom.results.back().check == "Custom");
    CHECK(custom.to_json().find("\"blocked\"") != std::string::npos);
}

TEST_CASE("batch quality gate")
{
    const auto space = ContentSpace::pixels(2, 2);
    std::mt19937_64 rng(3);
    std::vector<Item> reference, near, far;
    for (int i = 0; i < 12; ++i) {
        reference.push_back(make_item("r" + std::to_string(i), random_frames(rng, 4, space.dim)));
        near.push_back(make_item("n" + std::to_string(i), random_frames(rng, 4, space.dim)));
        far.push_back(make_item("f" + std::to_string(i), {Vector(space.dim, 1.0), Vector(space.dim, 0.0)}));
    }
    const FidelityChecker checker;
    const auto good = checker.run_batch(near, reference, 1.0, space, {});
    CHECK(good.front().find("QualityGate")->pass);
    const auto bad = checker.run_batch(far, reference, 1.0, space, {});
    CHECK_FALSE(bad.front().find("QualityGate")->pass);
}
