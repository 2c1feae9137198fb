#include "generec/config.hpp"

#include "generec/error.hpp"

#include <json.hpp>

#include <set>

namespace generec {
using nlohmann::json;

Encoder EncoderConfig::build(std::size_t input_dim) const
{
    if (kind == Encoder::Kind::identity_flatten) return Encoder::identity(input_dim);
    return Encoder::random_projection(input_dim, seed, dim);
}

namespace {

// Reads known keys from a section and rejects anything else.
class Section {
public:
    Section(const json& root, const char* name) : name_(name)
    {
        if (auto it = root.find(name); it != root.end()) {
            if (!it->is_object()) throw Error(ErrorCode::config, std::string("config section '") + name + "' must be an object");
            obj_ = &*it;
        }
    }

    template <class T>
    void get(const char* key, T& out)
    {
        seen_.insert(key);
        if (!obj_) return;
        auto it = obj_->find(key);
        if (it == obj_->end()) return;
        try {
            out = it->get<T>();
        } catch (const json::exception&) {
            throw Error(ErrorCode::config, "config '" + name_ + "." + key + "' has the wrong type");
        }
    }

    const json* child(const char* key)
    {
        seen_.insert(key);
        if (!obj_) return nullptr;
        auto it = obj_->find(key);
        return it == obj_->end() ? nullptr : &*it;
    }

    void finish() const
    {
        if (!obj_) return;
        for (const auto& [key, value] : obj_->items())
            if (!seen_.count(key)) throw Error(ErrorCode::config, "unknown config key '" + name_ + "." + key + "'");
    }

private:
    std::string name_;
    const json* obj_ = nullptr;
    std::set<std::string> seen_;
};

}  // namespace

AppConfig parse_config(std::string_view json_text, std::optional<std::uint64_t> seed)
{
    json root = json::object();
    if (!json_text.empty()) {
        try {
            root = json::parse(json_text);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::config, std::string("config is not valid JSON: ") + e.what());
        }
        if (!root.is_object()) throw Error(ErrorCode::config, "config must be a JSON object");
    }
    static const std::set<std::string> sections = {"synth", "encoder", "scorer", "experiment", "creation", "loop"};
    for (const auto& [key, value] : root.items())
        if (!sections.count(key)) throw Error(ErrorCode::config, "unknown config section '" + key + "'");

    AppConfig cfg;

    Section synth(root, "synth");
    auto& s = cfg.synth;
    synth.get("clusters", s.clusters);
    synth.get("users_per_cluster", s.users_per_cluster);
    synth.get("items_per_cluster", s.items_per_cluster);
    synth.get("frames_per_item", s.frames_per_item);
    synth.get("width", s.width);
    synth.get("height", s.height);
    synth.get("segment_length", s.segment_length);
    synth.get("primary_share", s.primary_share);
    synth.get("exposures_per_user", s.exposures_per_user);
    synth.get("like_slope", s.like_slope);
    synth.get("like_offset", s.like_offset);
    synth.get("item_noise", s.item_noise);
    synth.get("user_noise", s.user_noise);
    synth.get("frame_noise", s.frame_noise);
    synth.get("seed", s.seed);
    synth.finish();

    Section encoder(root, "encoder");
    std::string kind = "identity_flatten";
    encoder.get("kind", kind);
    encoder.get("seed", cfg.encoder.seed);
    encoder.get("d", cfg.encoder.dim);
    encoder.finish();
    if (kind == "identity_flatten")
        cfg.encoder.kind = Encoder::Kind::identity_flatten;
    else if (kind == "random_projection")
        cfg.encoder.kind = Encoder::Kind::random_projection;
    else
        throw Error(ErrorCode::config, "unknown encoder kind '" + kind + "'");

    Section scorer(root, "scorer");
    auto& sc = cfg.train.scorer;
    scorer.get("latent_dim", sc.latent_dim);
    scorer.get("learning_rate", sc.learning_rate);
    scorer.get("epochs", sc.epochs);
    scorer.get("l2", sc.l2);
    scorer.get("init_scale", sc.init_scale);
    scorer.get("seed", sc.seed);
    scorer.get("holdout_fraction", cfg.train.holdout_fraction);
    scorer.finish();

    Section creation(root, "creation");
    auto& cc = cfg.loop.creation;
    creation.get("num_frames", cc.num_frames);
    creation.get("steps", cc.steps);
    creation.get("blend", cc.blend);
    creation.get("noise_scale", cc.noise_scale);
    creation.get("noise_decay", cc.noise_decay);
    creation.get("seed", cc.seed);
    creation.finish();
    cc.validate();

    Section exp(root, "experiment");
    auto& e = cfg.experiment;
    exp.get("runs", e.runs);
    exp.get("ks", e.ks);
    exp.get("seed", e.seed);
    exp.get("clip_length", e.clip_length);
    exp.get("clip_stride", e.clip_stride);
    exp.get("blend", e.blend);
    exp.get("fvd_dim", e.fvd_dim);
    exp.get("fvd_seed", e.fvd_seed);
    std::string cosine_mode = "pairwise";
    exp.get("cosine_mode", cosine_mode);
    exp.finish();
    if (cosine_mode == "pairwise")
        e.cosine_mode = CosineMode::pairwise;
    else if (cosine_mode == "to_mean")
        e.cosine_mode = CosineMode::to_mean;
    else
        throw Error(ErrorCode::config, "unknown cosine_mode '" + cosine_mode + "'");
    e.creation = cc;

    Section loop(root, "loop");
    auto& l = cfg.loop;
    loop.get("k", l.k);
    loop.get("dislike_threshold", l.decision.dislike_threshold);
    loop.get("direct_on_explicit_request", l.exposure.direct_on_explicit_request);
    loop.get("direct_on_dislike_streak", l.exposure.direct_on_dislike_streak);
    loop.get("blend", l.blend);
    loop.get("seed", l.seed);
    loop.get("clip_stride", l.clip_stride);
    std::size_t clip_length = 0;
    loop.get("clip_length", clip_length);
    if (clip_length > 0) l.clip_length = clip_length;
    if (const json* wm = loop.child("watermark")) {
        const json holder = {{"watermark", *wm}};
        Section w(holder, "watermark");
        w.get("key", l.watermark.key);
        w.get("strength", l.watermark.strength);
        w.get("threshold", l.watermark.threshold);
        w.finish();
    }
    loop.finish();
    l.decision.direct_expose_on_explicit_request = l.exposure.direct_on_explicit_request;
    if (l.decision.dislike_threshold < 1) throw Error(ErrorCode::config, "loop.dislike_threshold must be >= 1");
    if (l.k == 0) throw Error(ErrorCode::config, "loop.k must be >= 1");
    if (l.blend < 0.0 || l.blend > 1.0) throw Error(ErrorCode::config, "loop.blend must be in [0,1]");
    l.watermark.validate();

    if (seed) {
        s.seed = *seed;
        sc.seed = *seed;
        e.seed = *seed;
        l.seed = *seed;
    }
    return cfg;
}

}  // namespace generec
