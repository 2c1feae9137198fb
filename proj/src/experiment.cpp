#include "generec/experiment.hpp"

#include "generec/editor.hpp"
#include "generec/error.hpp"
#include "generec/fidelity.hpp"
#include "generec/instructor.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace generec {

ExperimentKind experiment_kind_from_string(std::string_view s)
{
    if (s == "thumbnail") return ExperimentKind::thumbnail;
    if (s == "clip") return ExperimentKind::clip;
    if (s == "revise") return ExperimentKind::revise;
    if (s == "create") return ExperimentKind::create;
    throw Error(ErrorCode::config, "unknown experiment kind '" + std::string(s) + "'");
}

const char* to_string(ExperimentKind kind) noexcept
{
    switch (kind) {
    case ExperimentKind::thumbnail: return "thumbnail";
    case ExperimentKind::clip: return "clip";
    case ExperimentKind::revise: return "revise";
    case ExperimentKind::create: return "create";
    }
    return "thumbnail";
}

namespace {

double mean(const std::vector<double>& v)
{
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

struct EvalUser {
    std::string id;
    Vector user_rep;   // encoder space
    Vector emb_pref;   // encoder space
    std::vector<Vector> history;
    std::vector<const Item*> pool;  // non-interacted items
};

struct ArmOutput {
    std::vector<std::vector<Vector>> vectors;  // per user, max K frame-space vectors
    std::vector<Item> generated;               // for FVD; empty when not applicable
};

Vector window_mean(const Item& item, std::size_t start, std::size_t length)
{
    return mean_of(std::span<const Vector>(item.frames).subspan(start, length));
}

}  // namespace

double ArmMetrics::mean_cosine(std::size_t k) const
{
    return mean(cosine.at(k));
}

double ArmMetrics::mean_ps(std::size_t k) const
{
    return mean(ps.at(k));
}

std::optional<double> ArmMetrics::mean_fvd() const
{
    if (fvd.empty()) return std::nullopt;
    return mean(fvd);
}

const ArmMetrics& ExperimentReport::arm(std::string_view name) const
{
    for (const auto& a : arms)
        if (a.arm == name) return a;
    throw Error(ErrorCode::not_found, "no arm named '" + std::string(name) + "'");
}

std::string ExperimentReport::to_tsv() const
{
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    out << "arm";
    for (auto k : config.ks) out << "\tCosine@" << k;
    for (auto k : config.ks) out << "\tPS@" << k;
    out << "\tFVD\n";
    for (const auto& a : arms) {
        out << a.arm;
        for (auto k : config.ks) out << '\t' << a.mean_cosine(k);
        for (auto k : config.ks) out << '\t' << a.mean_ps(k);
        if (auto f = a.mean_fvd())
            out << '\t' << *f;
        else
            out << "\t-";
        out << '\n';
    }
    return out.str();
}

std::string ExperimentReport::to_json() const
{
    nlohmann::json arms_json = nlohmann::json::array();
    for (const auto& a : arms) {
        nlohmann::json cos, ps, cos_runs, ps_runs;
        for (auto k : config.ks) {
            const auto key = std::to_string(k);
            cos[key] = a.mean_cosine(k);
            ps[key] = a.mean_ps(k);
            cos_runs[key] = a.cosine.at(k);
            ps_runs[key] = a.ps.at(k);
        }
        auto f = a.mean_fvd();
        arms_json.push_back({{"arm", a.arm},
                             {"cosine", cos},
                             {"ps", ps},
                             {"fvd", f ? nlohmann::json(*f) : nlohmann::json(nullptr)},
                             {"per_run", {{"cosine", cos_runs}, {"ps", ps_runs}, {"fvd", a.fvd}}}});
    }
    return nlohmann::json{{"kind", to_string(kind)},
                          {"runs", config.runs},
                          {"seed", config.seed},
                          {"users", users},
                          {"ks", config.ks},
                          {"arms", std::move(arms_json)}}
        .dump(2);
}

std::pair<Vector, double> thumbnail_spread(const Corpus& corpus, const Encoder& encoder)
{
    Vector centre = corpus_mean_thumbnail(corpus, encoder);
    double radius = 0.0;
    for (const auto& [id, item] : corpus.items) {
        const Vector e = encoder.encode(item.thumbnail());
        double s = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) s += (e[i] - centre[i]) * (e[i] - centre[i]);
        radius += std::sqrt(s);
    }
    return {std::move(centre), radius / double(corpus.items.size())};
}

Vector embedding_preference(const PreferenceScorer& scorer, std::string_view user, const Vector& centre, double radius)
{
    const Vector dir = scorer.preference_direction(user);
    if (dir.size() != centre.size()) throw Error(ErrorCode::dimension_mismatch, "embedding preference dimension");
    const double n = norm(dir);
    Vector out = centre;
    if (n == 0.0) return out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += radius * dir[i] / n;
    return out;
}

ExperimentReport run_experiment(ExperimentKind kind, const Corpus& corpus, const PreferenceScorer* scorer,
                                const Encoder& encoder, const ExperimentConfig& config)
{
    if (!scorer) throw Error(ErrorCode::missing_scorer, "experiments need a trained scorer for PS@K");
    if (config.runs == 0 || config.ks.empty()) throw Error(ErrorCode::config, "experiment needs runs >= 1 and at least one K");
    if (encoder.input_dim() != corpus.space.dim) throw Error(ErrorCode::dimension_mismatch, "encoder does not match corpus");
    const std::size_t max_k = *std::max_element(config.ks.begin(), config.ks.end());
    if (*std::min_element(config.ks.begin(), config.ks.end()) == 0) throw Error(ErrorCode::config, "K must be >= 1");

    const auto [centre, radius] = thumbnail_spread(corpus, encoder);
    const auto& space = corpus.space;

    std::vector<EvalUser> users;
    for (const auto& [uid, profile] : corpus.users) {
        if (!scorer->knows(uid)) continue;
        EvalUser u;
        u.id = uid;
        std::set<std::string, std::less<>> interacted;
        for (const auto& in : profile.interactions) {
            interacted.insert(in.item_id);
            if (in.signal == Signal::like) u.history.push_back(corpus.find_item(in.item_id)->thumbnail());
        }
        if (u.history.empty()) continue;
        for (const auto& [iid, item] : corpus.items)
            if (!interacted.count(iid)) u.pool.push_back(&item);
        if (u.pool.size() < max_k) continue;
        u.user_rep = compute_user_rep(profile, corpus, encoder);
        u.emb_pref = embedding_preference(*scorer, uid, centre, radius);
        users.push_back(std::move(u));
    }
    if (users.empty()) throw Error(ErrorCode::insufficient_data, "no user qualifies for evaluation");

    std::vector<std::string> arm_names;
    switch (kind) {
    case ExperimentKind::thumbnail: arm_names = {"Random Frame", "Original", "Personalized", "Generated"}; break;
    case ExperimentKind::clip: arm_names = {"Random", "1st Clip", "Unclipped", "Personalized"}; break;
    case ExperimentKind::revise: arm_names = {"Original", "Blend_0", "User_Hist", "User_Emb"}; break;
    case ExperimentKind::create: arm_names = {"Unconditional", "User_Hist", "User_Emb"}; break;
    }

    ExperimentReport report;
    report.kind = kind;
    report.config = config;
    report.users = users.size();
    for (const auto& name : arm_names) report.arms.push_back({name, {}, {}, {}});

    const FvdEncoder fvd_encoder(Encoder::random_projection(space.dim, config.fvd_seed, config.fvd_dim));
    const BlendRevisionGenerator reviser;
    const std::size_t clip_stride = config.clip_stride == 0 ? config.clip_length : config.clip_stride;

    for (std::size_t run = 0; run < config.runs; ++run) {
        const std::uint64_t run_seed = SplitMix64(config.seed + run).next();
        std::mt19937_64 sample_rng(run_seed);

        // Paired candidates: the same K items per user for every arm.
        std::vector<std::vector<const Item*>> candidates;
        for (const auto& u : users) {
            std::vector<const Item*> pool = u.pool;
            std::shuffle(pool.begin(), pool.end(), sample_rng);
            pool.resize(max_k);
            candidates.push_back(std::move(pool));
        }
        std::vector<Item> real_items;
        for (const auto& c : candidates)
            for (const Item* item : c) real_items.push_back(*item);

        for (std::size_t a = 0; a < arm_names.size(); ++a) {
            const std::string& arm = arm_names[a];
            std::mt19937_64 arm_rng(SplitMix64(run_seed ^ (0x1000 + a)).next());
            ArmOutput out;
            out.vectors.resize(users.size());

            for (std::size_t ui = 0; ui < users.size(); ++ui) {
                const EvalUser& u = users[ui];
                for (std::size_t slot = 0; slot < max_k; ++slot) {
                    const Item& item = *candidates[ui][slot];
                    Vector v;
                    switch (kind) {
                    case ExperimentKind::thumbnail: {
                        if (arm == "Random Frame") {
                            std::uniform_int_distribution<std::size_t> pick(0, item.frames.size() - 1);
                            v = item.frames[pick(arm_rng)];
                        } else if (arm == "Original") {
                            v = item.thumbnail();
                        } else {
                            v = item.frames[select_thumbnail(item, u.user_rep, encoder)];
                            if (arm == "Generated") {
                                Item frame_item{item.id, {v}, 0, Provenance::human, false, std::nullopt};
                                const Vector target = frame_space_target(u.user_rep, encoder, space);
                                v = reviser.revise(frame_item, target, config.blend, space).frames[0];
                            }
                        }
                        break;
                    }
                    case ExperimentKind::clip: {
                        const std::size_t n = item.frames.size();
                        if (arm == "Unclipped" || n < config.clip_length) {
                            v = window_mean(item, 0, n);
                        } else if (arm == "1st Clip") {
                            v = window_mean(item, 0, config.clip_length);
                        } else if (arm == "Random") {
                            const std::size_t windows = (n - config.clip_length) / clip_stride + 1;
                            std::uniform_int_distribution<std::size_t> pick(0, windows - 1);
                            v = window_mean(item, pick(arm_rng) * clip_stride, config.clip_length);
                        } else {
                            const auto w = select_clip(item, u.user_rep, encoder, config.clip_length, clip_stride);
                            v = window_mean(item, w.start, w.length);
                        }
                        break;
                    }
                    case ExperimentKind::revise: {
                        if (arm == "Original") {
                            v = item.thumbnail();
                            break;
                        }
                        GuidanceSignal g;
                        g.mode = GuidanceSignal::Mode::edit;
                        g.source_item_id = item.id;
                        g.preference = arm == "User_Emb" ? u.emb_pref : u.user_rep;
                        g.blend_strength = arm == "Blend_0" ? 0.0 : config.blend;
                        Item revised = revise(item, g, reviser, encoder, space);
                        v = revised.thumbnail();
                        out.generated.push_back(std::move(revised));
                        break;
                    }
                    case ExperimentKind::create: {
                        GuidanceSignal g;
                        g.mode = GuidanceSignal::Mode::create;
                        g.preference = arm == "Unconditional" ? centre : (arm == "User_Emb" ? u.emb_pref : u.user_rep);
                        g.blend_strength = config.creation.blend;
                        CreationConfig cc = config.creation;
                        cc.seed = SplitMix64(run_seed ^ (ui << 20) ^ (slot << 8) ^ a).next();
                        Item created = create(g, cc, encoder, space, u.id + "-c" + std::to_string(slot));
                        v = created.thumbnail();
                        out.generated.push_back(std::move(created));
                        break;
                    }
                    }
                    out.vectors[ui].push_back(std::move(v));
                }
            }

            ArmMetrics& metrics = report.arms[a];
            for (auto k : config.ks) {
                double cos_sum = 0.0, ps_sum = 0.0;
                for (std::size_t ui = 0; ui < users.size(); ++ui) {
                    std::span<const Vector> top(out.vectors[ui].data(), k);
                    cos_sum += cosine_at_k(top, users[ui].history, encoder, config.cosine_mode);
                    std::vector<Vector> features;
                    for (const auto& v : top) features.push_back(encoder.encode(v));
                    const auto scores = scorer->score_many(users[ui].id, features);
                    ps_sum += mean(scores);
                }
                metrics.cosine[k].push_back(cos_sum / double(users.size()));
                metrics.ps[k].push_back(ps_sum / double(users.size()));
            }
            if (!out.generated.empty()) metrics.fvd.push_back(fvd(real_items, out.generated, fvd_encoder));
        }
    }
    return report;
}

}  // namespace generec
