#include "generec/synth.hpp"

#include "generec/corpus_io.hpp"
#include "generec/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace generec {

void SynthConfig::validate() const
{
    if (clusters == 0 || users_per_cluster == 0 || items_per_cluster == 0 || frames_per_item == 0 || width == 0 ||
        height == 0 || segment_length == 0)
        throw Error(ErrorCode::config, "synth counts must all be >= 1");
    if (primary_share < 0.0 || primary_share > 1.0) throw Error(ErrorCode::config, "primary_share must be in [0,1]");
}

double sigmoid(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

double centred_cosine(const Vector& a, const Vector& b)
{
    Vector ca(a.size()), cb(b.size());
    std::transform(a.begin(), a.end(), ca.begin(), [](double x) { return x - 0.5; });
    std::transform(b.begin(), b.end(), cb.begin(), [](double x) { return x - 0.5; });
    return cosine(ca, cb);
}

namespace {

std::array<double, 3> hsv_to_rgb(double h, double s, double v)
{
    const double hh = std::fmod(h, 1.0) * 6.0;
    const int sector = int(hh) % 6;
    const double f = hh - std::floor(hh);
    const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    switch (sector) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
    }
}

Vector make_template(std::size_t cluster, std::size_t clusters, std::uint32_t width, std::uint32_t height)
{
    const auto rgb = hsv_to_rgb(double(cluster) / double(clusters), 0.8, 0.9);
    const double angle = std::numbers::pi * double(cluster) / double(clusters);
    const double freq = 2.0 + double(cluster % 3);
    Vector t(std::size_t(width) * height * 3);
    for (std::uint32_t y = 0; y < height; ++y)
        for (std::uint32_t x = 0; x < width; ++x) {
            const double u = (x * std::cos(angle) + y * std::sin(angle)) / double(std::max(width, height));
            const double stripe = 0.12 * std::sin(2.0 * std::numbers::pi * freq * u);
            for (int c = 0; c < 3; ++c) t[(std::size_t(y) * width + x) * 3 + c] = std::clamp(rgb[c] + stripe, 0.0, 1.0);
        }
    return t;
}

Vector jitter(const Vector& base, double sigma, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, sigma);
    Vector out = base;
    if (sigma > 0.0)
        for (double& x : out) x += n(rng);
    clamp_unit(out);
    return out;
}

std::string pad(std::size_t i, const char* prefix)
{
    std::string digits = std::to_string(i);
    if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
    return prefix + digits;
}

}  // namespace

SynthResult synthesize(const SynthConfig& cfg)
{
    cfg.validate();
    SynthResult out;
    out.corpus.space = ContentSpace::pixels(cfg.width, cfg.height);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (std::size_t c = 0; c < cfg.clusters; ++c)
        out.cluster_templates.push_back(make_template(c, cfg.clusters, cfg.width, cfg.height));

    const std::size_t segments = (cfg.frames_per_item + cfg.segment_length - 1) / cfg.segment_length;
    std::vector<std::string> item_ids;
    for (std::size_t c = 0; c < cfg.clusters; ++c)
        for (std::size_t k = 0; k < cfg.items_per_cluster; ++k) {
            Item item;
            item.id = pad(item_ids.size(), "item");
            const Vector proto = jitter(out.cluster_templates[c], cfg.item_noise, rng);

            std::vector<std::size_t> seg_cluster(segments);
            bool has_primary = false;
            for (auto& sc : seg_cluster) {
                if (cfg.clusters == 1 || unit(rng) < cfg.primary_share) {
                    sc = c;
                    has_primary = true;
                } else {
                    sc = (c + 1 + std::size_t(unit(rng) * double(cfg.clusters - 1))) % cfg.clusters;
                }
            }
            if (!has_primary) seg_cluster[std::size_t(unit(rng) * double(segments)) % segments] = c;

            std::vector<Vector> seg_base(segments);
            for (std::size_t s = 0; s < segments; ++s)
                seg_base[s] = seg_cluster[s] == c ? proto : jitter(out.cluster_templates[seg_cluster[s]], cfg.item_noise, rng);

            std::vector<std::size_t> primary_frames;
            for (std::size_t f = 0; f < cfg.frames_per_item; ++f) {
                const std::size_t s = f / cfg.segment_length;
                item.frames.push_back(jitter(seg_base[s], cfg.frame_noise, rng));
                if (seg_cluster[s] == c) primary_frames.push_back(f);
            }
            item.thumbnail_index = primary_frames[std::size_t(unit(rng) * double(primary_frames.size())) % primary_frames.size()];
            quantize_to_float(item);

            out.item_cluster[item.id] = c;
            out.item_prototypes[item.id] = proto;
            item_ids.push_back(item.id);
            out.corpus.items.emplace(item.id, std::move(item));
        }

    std::size_t user_no = 0;
    for (std::size_t c = 0; c < cfg.clusters; ++c)
        for (std::size_t k = 0; k < cfg.users_per_cluster; ++k) {
            UserProfile user;
            user.id = pad(user_no++, "user");
            const Vector proto = jitter(out.cluster_templates[c], cfg.user_noise, rng);

            std::vector<std::size_t> order(item_ids.size());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            order.resize(std::min(cfg.exposures_per_user, order.size()));

            std::int64_t ts = 0;
            for (std::size_t idx : order) {
                const auto& iid = item_ids[idx];
                const double p = sigmoid(cfg.like_slope * centred_cosine(proto, out.item_prototypes[iid]) + cfg.like_offset);
                user.interactions.push_back({user.id, iid, unit(rng) < p ? Signal::like : Signal::dislike, ts++});
            }
            out.user_cluster[user.id] = c;
            out.user_prototypes[user.id] = proto;
            out.corpus.users.emplace(user.id, std::move(user));
        }

    out.corpus.validate();
    return out;
}

}  // namespace generec
