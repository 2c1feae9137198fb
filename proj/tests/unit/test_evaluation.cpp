#include "generec/error.hpp"
#include "generec/evaluation.hpp"
#include "generec/synth.hpp"
#include "../oracle/linalg.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace generec;
using namespace testutil;

namespace {

using namespace oracle;

GaussianStats stats_of(const Vector& mean, const Matrix& cov)
{
    GaussianStats s;
    s.mean = mean;
    for (const auto& row : cov) s.covariance.insert(s.covariance.end(), row.begin(), row.end());
    s.count = 1000;
    return s;
}

}  // namespace

TEST_CASE("cosine at K")
{
    const Encoder enc = Encoder::identity(3);
    const std::vector<Vector> one = {{1, 2, 3}};
    CHECK(cosine_at_k(one, one, enc) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine_at_k(std::vector<Vector>{{1, 0, 0}}, std::vector<Vector>{{0, 1, 0}}, enc) == 0.0);
    CHECK_THROWS_AS(cosine_at_k(std::vector<Vector>{{0, 0, 0}}, one, enc), Error);

    std::mt19937_64 rng(5);
    std::vector<Vector> thumbs, hist;
    for (int i = 0; i < 5; ++i) thumbs.push_back(random_vector(rng, 3, -1, 1));
    for (int i = 0; i < 7; ++i) hist.push_back(random_vector(rng, 3, -1, 1));
    double sum = 0;
    for (const auto& a : thumbs)
        for (const auto& b : hist) {
            double ab = 0, aa = 0, bb = 0;
            for (int k = 0; k < 3; ++k) {
                ab += a[k] * b[k];
                aa += a[k] * a[k];
                bb += b[k] * b[k];
            }
            sum += ab / std::sqrt(aa * bb);
        }
    CHECK(std::abs(cosine_at_k(thumbs, hist, enc) - sum / 35.0) <= 1e-12);

    const Vector m = mean_of(hist);
    double to_mean = 0;
    for (const auto& a : thumbs) to_mean += cosine(a, m);
    CHECK(std::abs(cosine_at_k(thumbs, hist, enc, CosineMode::to_mean) - to_mean / 5.0) <= 1e-12);
}

TEST_CASE("scorer on a planted two-cluster corpus")
{
    SynthConfig sc;
    sc.clusters = 2;
    sc.users_per_cluster = 8;
    sc.items_per_cluster = 20;
    sc.width = sc.height = 8;
    sc.frames_per_item = 8;
    const Corpus corpus = synthesize(sc).corpus;
    const Encoder enc = Encoder::identity(corpus.space.dim);
    const LikeHoldout split = split_likes(corpus, 0.25);
    REQUIRE_FALSE(split.held_out.empty());

    ScorerConfig cfg;
    std::size_t epochs_seen = 0;
    const PreferenceScorer trained =
        train_scorer(split.train, enc, cfg, [&](std::size_t e, const PreferenceScorer&) { epochs_seen = e; });
    CHECK(epochs_seen == cfg.epochs);
    CHECK(pairwise_auc(trained, enc, corpus, split.held_out) > 0.8);

    CHECK(train_scorer(split.train, enc, cfg) == trained);

    ScorerConfig zero = cfg;
    zero.epochs = 0;
    const double auc0 = pairwise_auc(train_scorer(split.train, enc, zero), enc, corpus, split.held_out);
    CHECK(std::abs(auc0 - 0.5) <= 0.05);

    Corpus empty;
    empty.space = corpus.space;
    CHECK_THROWS_AS(train_scorer(empty, enc, cfg), Error);
}

TEST_CASE("held-out split keeps the latest likes")
{
    Corpus c;
    c.space = ContentSpace::features(1);
    for (int i = 0; i < 6; ++i) c.items.emplace("i" + std::to_string(i), make_item("i" + std::to_string(i), {{double(i)}}));
    UserProfile u;
    u.id = "u";
    for (int i = 0; i < 5; ++i) u.interactions.push_back({"u", "i" + std::to_string(i), i == 2 ? Signal::dislike : Signal::like, i});
    c.users.emplace("u", u);
    const LikeHoldout h = split_likes(c, 0.5);
    REQUIRE(h.held_out.count("u"));
    CHECK(h.held_out.at("u") == std::vector<std::string>{"i3", "i4"});
    CHECK(h.train.users.at("u").interactions.size() == 3);
    CHECK_NOTHROW(h.train.validate());
}

TEST_CASE("preference score at K")
{
    std::mt19937_64 rng(6);
    PreferenceScorer s({"a", "b"}, 4, 6);
    for (auto& v : s.user_matrix()) v = std::normal_distribution<double>(0, 1)(rng);
    for (auto& v : s.interaction_matrix()) v = std::normal_distribution<double>(0, 1)(rng);
    s.set_bias(0.25);
    const Encoder enc = Encoder::identity(6);

    std::vector<Item> items;
    for (int i = 0; i < 10; ++i) items.push_back(make_item("x" + std::to_string(i), {random_vector(rng, 6)}));
    std::vector<const Item*> ptrs;
    for (const auto& it : items) ptrs.push_back(&it);

    CHECK(std::abs(ps_at_k(s, "b", std::span(ptrs.data(), 1), enc) - s.score("b", items[0].thumbnail())) <= 1e-12);

    // Scalar loop oracle: U_b^T W e + bias.
    const auto& U = s.user_matrix();
    const auto& W = s.interaction_matrix();
    double total = 0;
    std::vector<Vector> feats;
    for (const auto& it : items) {
        const Vector& e = it.thumbnail();
        double v = 0.25;
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 6; ++j) v += U[4 + k] * W[k * 6 + j] * e[j];
        CHECK(std::abs(s.score("b", e) - v) <= 1e-12);
        total += v;
        feats.push_back(e);
    }
    CHECK(std::abs(ps_at_k(s, "b", ptrs, enc) - total / 10.0) <= 1e-12);
    const auto batch = s.score_many("b", feats);
    for (std::size_t i = 0; i < feats.size(); ++i) CHECK(std::abs(batch[i] - s.score("b", feats[i])) <= 1e-12);

    std::vector<const Item*> dup(4, ptrs[3]);
    CHECK(std::abs(ps_at_k(s, "b", dup, enc) - ps_at_k(s, "b", std::span(ptrs.data() + 3, 1), enc)) <= 1e-12);
    CHECK_THROWS_AS(s.score("zed", feats[0]), Error);
}

TEST_CASE("scorer persistence round-trips")
{
    std::mt19937_64 rng(7);
    PreferenceScorer s({"a", "b", "c"}, 3, 5);
    for (auto& v : s.user_matrix()) v = double(float(random_vector(rng, 1)[0]));
    for (auto& v : s.interaction_matrix()) v = double(float(random_vector(rng, 1)[0]));
    s.epochs_trained = 12;
    const auto dir = temp_dir("scorer");
    save_scorer(s, Encoder::identity(5), dir / "model");
    const PreferenceScorer loaded = load_scorer(dir / "model");
    CHECK(loaded.users() == s.users());
    CHECK(loaded.user_matrix() == s.user_matrix());
    CHECK(loaded.interaction_matrix() == s.interaction_matrix());
    CHECK(loaded.epochs_trained == 12);
    CHECK_THROWS_AS(load_scorer(dir / "missing"), Error);
}

TEST_CASE("Frechet distance closed forms")
{
    GaussianStats a, b;
    a.mean = {0.0};
    a.covariance = {1.0};
    b.mean = {3.0};
    b.covariance = {4.0};
    a.count = b.count = 2;
    CHECK(std::abs(frechet_distance(a, b) - 10.0) <= 1e-9);

    std::mt19937_64 rng(10);
    std::vector<Vector> xs;
    for (int i = 0; i < 50; ++i) xs.push_back(gaussian_vector(rng, 6));
    const auto s = gaussian_stats(xs);
    CHECK(frechet_distance(s, s) <= 1e-6);
    CHECK_THROWS_AS(gaussian_stats(std::vector<Vector>{{1.0}}), Error);

    // Covariance uses the n-1 normalisation.
    const auto two = gaussian_stats(std::vector<Vector>{{0.0}, {2.0}});
    CHECK(two.mean[0] == 1.0);
    CHECK(two.covariance[0] == 2.0);

    const Matrix sa = random_spd(rng, 5), sb = random_spd(rng, 5);
    const Vector ma = gaussian_vector(rng, 5), mb = gaussian_vector(rng, 5);
    CHECK(frechet_distance(stats_of(ma, sa), stats_of(mb, sb)) ==
          doctest::Approx(closed_form(ma, sa, mb, sb)).epsilon(1e-9));
}

TEST_CASE("Frechet distance from samples approaches the parameter value")
{
    std::mt19937_64 rng(11);
    const std::size_t d = 8;
    const Matrix sa = random_spd(rng, d), sb = random_spd(rng, d);
    const Vector ma = gaussian_vector(rng, d), mb = gaussian_vector(rng, d);
    const double truth = closed_form(ma, sa, mb, sb);
    const auto xa = sample(rng, ma, sa, 10000);
    const auto xb = sample(rng, mb, sb, 10000);
    const double est = frechet_distance(gaussian_stats(xa), gaussian_stats(xb));
    CHECK(std::abs(est - truth) <= 0.05 * truth);

    // Rotating both sets by the same orthogonal matrix leaves the distance unchanged.
    Matrix q(d, Vector(d));
    for (std::size_t i = 0; i < d; ++i) {
        q[i] = gaussian_vector(rng, d);
        for (std::size_t j = 0; j < i; ++j) {
            const double p = dot(q[i], q[j]);
            for (std::size_t k = 0; k < d; ++k) q[i][k] -= p * q[j][k];
        }
        const double n = norm(q[i]);
        for (auto& v : q[i]) v /= n;
    }
    auto rotate = [&](const std::vector<Vector>& xs) {
        std::vector<Vector> out;
        for (const auto& x : xs) {
            Vector y(d, 0.0);
            for (std::size_t i = 0; i < d; ++i) y[i] = dot(q[i], x);
            out.push_back(std::move(y));
        }
        return out;
    };
    const double rotated = frechet_distance(gaussian_stats(rotate(xa)), gaussian_stats(rotate(xb)));
    CHECK(std::abs(rotated - est) <= 1e-6);
}

TEST_CASE("video FVD features")
{
    const Encoder enc = Encoder::identity(2);
    const FvdEncoder fe(enc);
    CHECK(fe.dim() == 4);
    const Item v = make_item("v", {{0, 0}, {1, 2}, {3, 2}});
    // mean frame (4/3, 4/3); mean difference ((1,2)+(2,0))/2 = (1.5, 1).
    const Vector f = fe.features(v);
    CHECK(f[0] == doctest::Approx(4.0 / 3.0));
    CHECK(f[1] == doctest::Approx(4.0 / 3.0));
    CHECK(f[2] == doctest::Approx(1.5));
    CHECK(f[3] == doctest::Approx(1.0));
    CHECK(fe.features(make_item("s", {{1, 1}}))[2] == 0.0);

    std::mt19937_64 rng(3);
    std::vector<Item> set;
    for (int i = 0; i < 20; ++i) set.push_back(make_item("i", random_frames(rng, 4, 2)));
    CHECK(fvd(set, set, fe) <= 1e-6);
    CHECK(fvd_low_sample_warning(3, 16));
    CHECK_FALSE(fvd_low_sample_warning(4, 16));
}
