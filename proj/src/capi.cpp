#include "generec/generec.h"

#include "generec/config.hpp"
#include "generec/corpus_io.hpp"
#include "generec/error.hpp"
#include "generec/evaluation.hpp"
#include "generec/experiment.hpp"
#include "generec/orchestrator.hpp"
#include "generec/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace generec;

struct generec_engine {
    std::unique_ptr<Engine> engine;
    std::mutex sessions_mutex;
    struct Slot {
        std::mutex mutex;
        std::unique_ptr<Session> session;
    };
    std::map<std::string, std::shared_ptr<Slot>, std::less<>> sessions;
    std::size_t next_session = 1;
    std::size_t next_anonymous = 1;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_json;

char* dup(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void put(char** out, const std::string& s)
{
    if (out) *out = dup(s);
}

generec_status status_of(ErrorCode code)
{
    switch (code) {
    case ErrorCode::config:
    case ErrorCode::missing_scorer: return GENEREC_ERR_CONFIG;
    case ErrorCode::parse: return GENEREC_ERR_PARSE;
    case ErrorCode::io: return GENEREC_ERR_IO;
    case ErrorCode::not_found:
    case ErrorCode::unknown_user:
    case ErrorCode::unknown_source_item: return GENEREC_ERR_NOT_FOUND;
    case ErrorCode::unserved_item: return GENEREC_ERR_UNSERVED;
    default: return GENEREC_ERR_DATA;
    }
}

generec_status fail(generec_status status, const std::string& message, json extra = json::object())
{
    g_last_error = message;
    extra["status"] = generec_status_name(status);
    extra["message"] = message;
    g_last_error_json = extra.dump();
    return status;
}

template <class F>
generec_status guarded(F&& body)
{
    try {
        return body();
    } catch (const ParseError& e) {
        return fail(GENEREC_ERR_PARSE, e.what(),
                    {{"code", to_string(e.code())}, {"kind", to_string(e.kind())}, {"token", e.token()}, {"offset", e.offset()}});
    } catch (const Error& e) {
        return fail(status_of(e.code()), e.what(), {{"code", to_string(e.code())}});
    } catch (const json::exception& e) {
        return fail(GENEREC_ERR_DATA, std::string("malformed JSON: ") + e.what(), {{"code", "InvalidData"}});
    } catch (const std::exception& e) {
        return fail(GENEREC_ERR_INTERNAL, e.what(), {{"code", "Internal"}});
    }
}

std::string text_or_empty(const char* s)
{
    return s ? std::string(s) : std::string();
}

std::optional<std::uint64_t> seed_override(std::uint64_t seed)
{
    return seed == 0 ? std::nullopt : std::optional<std::uint64_t>(seed);
}

std::string base64(const std::vector<std::uint8_t>& bytes)
{
    static constexpr char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < bytes.size(); i += 3) {
        const std::uint32_t n = std::uint32_t(bytes[i]) << 16 | (i + 1 < bytes.size() ? std::uint32_t(bytes[i + 1]) << 8 : 0) |
                                (i + 2 < bytes.size() ? std::uint32_t(bytes[i + 2]) : 0);
        out += table[(n >> 18) & 63];
        out += table[(n >> 12) & 63];
        out += i + 1 < bytes.size() ? table[(n >> 6) & 63] : '=';
        out += i + 2 < bytes.size() ? table[n & 63] : '=';
    }
    return out;
}

std::string rgb_base64(const Vector& frame)
{
    std::vector<std::uint8_t> bytes(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i)
        bytes[i] = std::uint8_t(std::lround(std::clamp(frame[i], 0.0, 1.0) * 255.0));
    return base64(bytes);
}

json thumbnail_json(const Item& item, const ContentSpace& space)
{
    if (!space.pixel) return nullptr;
    return {{"width", space.width}, {"height", space.height}, {"encoding", "rgb8-base64"}, {"data", rgb_base64(item.thumbnail())}};
}

json item_json(const Item& item, const ContentSpace& space, const std::optional<CheckReport>& report)
{
    json j = {{"id", item.id},
              {"provenance", to_string(item.provenance)},
              {"watermarked", item.watermarked},
              {"thumbnail_index", item.thumbnail_index},
              {"num_frames", item.frames.size()},
              {"parent_id", item.parent_id ? json(*item.parent_id) : json(nullptr)},
              {"thumbnail", thumbnail_json(item, space)}};
    j["check_report"] = report ? json::parse(report->to_json()) : json(nullptr);
    return j;
}

json recommendation_json(const std::string& session_id, const Recommendation& rec, const ContentSpace& space)
{
    json items = json::array();
    for (const auto& r : rec.items) items.push_back(item_json(*r.item, space, r.report));
    return {{"session_id", session_id},
            {"action", to_string(rec.action.kind)},
            {"direct", rec.direct_exposure},
            {"items", std::move(items)},
            {"fidelity_failure", rec.fidelity_failure ? json::parse(rec.fidelity_failure->to_json()) : json(nullptr)}};
}

std::vector<Item> load_item_set(const fs::path& path)
{
    if (fs::is_directory(path)) {
        if (fs::exists(path / "manifest.json")) return load_item_set(path / "manifest.json");
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.path().extension() == ".grtf") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        std::vector<Item> items;
        std::optional<ContentSpace> first;
        for (const auto& f : files) {
            ContentSpace space;
            items.push_back(load_item_tensor(f, f.stem().string(), &space));
            if (first && space.dim != first->dim) throw Error(ErrorCode::dimension_mismatch, f.string() + ": dimension differs from set");
            first = space;
        }
        if (items.empty()) throw Error(ErrorCode::io, "no .grtf files in '" + path.string() + "'");
        return items;
    }
    if (!fs::exists(path)) throw Error(ErrorCode::io, "no such item set '" + path.string() + "'");
    Corpus corpus = load_corpus(path);
    std::vector<Item> items;
    for (auto& [id, item] : corpus.items) items.push_back(std::move(item));
    return items;
}

std::shared_ptr<generec_engine::Slot> find_slot(generec_engine* engine, const char* session_id)
{
    if (!session_id) throw Error(ErrorCode::not_found, "missing session id");
    std::lock_guard lock(engine->sessions_mutex);
    auto it = engine->sessions.find(std::string_view(session_id));
    if (it == engine->sessions.end()) throw Error(ErrorCode::not_found, "unknown session '" + std::string(session_id) + "'");
    return it->second;
}

generec_status require(bool ok, const char* what)
{
    return ok ? GENEREC_OK : fail(GENEREC_ERR_INVALID_ARGUMENT, what, {{"code", "InvalidArgument"}});
}

}  // namespace

extern "C" {

GENEREC_API const char* generec_version(void)
{
    return "0.1.0";
}

GENEREC_API const char* generec_status_name(generec_status status)
{
    switch (status) {
    case GENEREC_OK: return "ok";
    case GENEREC_ERR_CONFIG: return "config_error";
    case GENEREC_ERR_DATA: return "data_error";
    case GENEREC_ERR_IO: return "io_error";
    case GENEREC_ERR_PARSE: return "parse_error";
    case GENEREC_ERR_NOT_FOUND: return "not_found";
    case GENEREC_ERR_UNSERVED: return "unserved_item";
    case GENEREC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case GENEREC_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

GENEREC_API const char* generec_last_error(void)
{
    return g_last_error.c_str();
}

GENEREC_API const char* generec_last_error_json(void)
{
    return g_last_error_json.empty() ? "{}" : g_last_error_json.c_str();
}

GENEREC_API void generec_free(char* s)
{
    std::free(s);
}

GENEREC_API generec_status generec_synth(const char* config_json, uint64_t seed, const char* out_dir, char** summary_json)
{
    if (auto st = require(out_dir != nullptr, "out_dir is required"); st != GENEREC_OK) return st;
    return guarded([&] {
        const AppConfig cfg = parse_config(text_or_empty(config_json), seed_override(seed));
        const SynthResult result = synthesize(cfg.synth);
        const auto manifest = save_corpus(result.corpus, out_dir);
        std::size_t likes = 0, interactions = 0;
        for (const auto& [uid, u] : result.corpus.users)
            for (const auto& in : u.interactions) {
                ++interactions;
                likes += in.signal == Signal::like;
            }
        put(summary_json, json{{"manifest", manifest.string()},
                               {"items", result.corpus.items.size()},
                               {"users", result.corpus.users.size()},
                               {"interactions", interactions},
                               {"likes", likes},
                               {"seed", cfg.synth.seed}}
                              .dump(2));
        return GENEREC_OK;
    });
}

GENEREC_API generec_status generec_train(const char* manifest, const char* config_json, uint64_t seed,
                                         const char* out_prefix, char** report_json)
{
    if (auto st = require(manifest && out_prefix, "manifest and out_prefix are required"); st != GENEREC_OK) return st;
    return guarded([&] {
        const AppConfig cfg = parse_config(text_or_empty(config_json), seed_override(seed));
        const Corpus corpus = load_corpus(manifest);
        const Encoder encoder = cfg.encoder.build(corpus.space.dim);
        const LikeHoldout split = split_likes(corpus, cfg.train.holdout_fraction);
        const PreferenceScorer scorer = train_scorer(split.train, encoder, cfg.train.scorer);
        const double auc = pairwise_auc(scorer, encoder, corpus, split.held_out);
        save_scorer(scorer, encoder, out_prefix);
        put(report_json, json{{"scorer", out_prefix},
                              {"users", scorer.users().size()},
                              {"epochs", scorer.epochs_trained},
                              {"seed", cfg.train.scorer.seed},
                              {"holdout_fraction", cfg.train.holdout_fraction},
                              {"heldout_auc", auc}}
                             .dump(2));
        return GENEREC_OK;
    });
}

GENEREC_API generec_status generec_experiment(const char* kind, const char* manifest, const char* scorer_prefix,
                                              const char* config_json, uint64_t seed, char** report_json,
                                              char** report_tsv)
{
    if (auto st = require(kind && manifest, "kind and manifest are required"); st != GENEREC_OK) return st;
    return guarded([&] {
        const AppConfig cfg = parse_config(text_or_empty(config_json), seed_override(seed));
        const ExperimentKind k = experiment_kind_from_string(kind);
        if (!scorer_prefix) throw Error(ErrorCode::missing_scorer, "experiment requires --scorer");
        const Corpus corpus = load_corpus(manifest);
        const Encoder encoder = cfg.encoder.build(corpus.space.dim);
        const PreferenceScorer scorer = load_scorer(scorer_prefix);
        ExperimentConfig ec = cfg.experiment;
        ec.creation = cfg.loop.creation;
        const ExperimentReport report = run_experiment(k, corpus, &scorer, encoder, ec);
        put(report_json, report.to_json());
        put(report_tsv, report.to_tsv());
        return GENEREC_OK;
    });
}

GENEREC_API generec_status generec_fvd(const char* set_a, const char* set_b, const char* config_json,
                                       double* out_value, char** report_json)
{
    if (auto st = require(set_a && set_b, "two item sets are required"); st != GENEREC_OK) return st;
    return guarded([&] {
        const AppConfig cfg = parse_config(text_or_empty(config_json));
        const auto a = load_item_set(set_a);
        const auto b = load_item_set(set_b);
        const std::size_t dim = a.front().frames.front().size();
        if (b.front().frames.front().size() != dim) throw Error(ErrorCode::dimension_mismatch, "item sets have different dimensions");
        const FvdEncoder encoder(Encoder::random_projection(dim, cfg.experiment.fvd_seed, cfg.experiment.fvd_dim));
        const double value = fvd(a, b, encoder);
        if (out_value) *out_value = value;
        const bool warn = fvd_low_sample_warning(std::min(a.size(), b.size()), encoder.dim());
        put(report_json, json{{"fvd", value},
                              {"n_a", a.size()},
                              {"n_b", b.size()},
                              {"feature_dim", encoder.dim()},
                              {"low_sample_warning", warn}}
                             .dump(2));
        return GENEREC_OK;
    });
}

GENEREC_API generec_status generec_engine_open(const char* manifest, const char* scorer_prefix, const char* config_json,
                                               uint64_t seed, generec_engine** out)
{
    if (auto st = require(manifest && out, "manifest and out are required"); st != GENEREC_OK) return st;
    return guarded([&] {
        const AppConfig cfg = parse_config(text_or_empty(config_json), seed_override(seed));
        Corpus corpus = load_corpus(manifest);
        Encoder encoder = cfg.encoder.build(corpus.space.dim);
        std::optional<PreferenceScorer> scorer;
        if (scorer_prefix) scorer = load_scorer(scorer_prefix);
        auto handle = std::make_unique<generec_engine>();
        handle->engine = std::make_unique<Engine>(std::move(corpus), std::move(encoder), std::move(scorer), cfg.loop);
        *out = handle.release();
        return GENEREC_OK;
    });
}

GENEREC_API void generec_engine_close(generec_engine* engine)
{
    delete engine;
}

GENEREC_API generec_status generec_session_create(generec_engine* engine, const char* user_id, char** session_json)
{
    if (auto st = require(engine != nullptr, "engine is required"); st != GENEREC_OK) return st;
    return guarded([&] {
        std::lock_guard lock(engine->sessions_mutex);
        const std::string sid = "s" + std::to_string(engine->next_session++);
        const std::string uid = user_id && *user_id ? std::string(user_id) : "anon" + std::to_string(engine->next_anonymous++);
        if (!is_valid_id(uid)) throw Error(ErrorCode::config, "invalid user id '" + uid + "'");
        auto slot = std::make_shared<generec_engine::Slot>();
        slot->session = std::make_unique<Session>(*engine->engine, sid, uid);
        engine->sessions.emplace(sid, std::move(slot));
        put(session_json, json{{"session_id", sid}, {"user_id", uid}}.dump());
        return GENEREC_OK;
    });
}

namespace {

generec_status run_step(generec_engine* engine, const char* session_id, const char* text, int k, char** out)
{
    if (auto st = require(engine != nullptr, "engine is required"); st != GENEREC_OK) return st;
    return guarded([&] {
        auto slot = find_slot(engine, session_id);
        std::lock_guard lock(slot->mutex);
        std::optional<std::string_view> instruction;
        if (text) instruction = text;
        std::optional<std::size_t> kk;
        if (k > 0) kk = std::size_t(k);
        const Recommendation rec = slot->session->step(instruction, kk);
        put(out, recommendation_json(slot->session->id(), rec, engine->engine->corpus.space).dump());
        return GENEREC_OK;
    });
}

}  // namespace

GENEREC_API generec_status generec_session_feed(generec_engine* engine, const char* session_id, int k,
                                                char** recommendation_json)
{
    return run_step(engine, session_id, nullptr, k, recommendation_json);
}

GENEREC_API generec_status generec_session_instruction(generec_engine* engine, const char* session_id, const char* text,
                                                       int k, char** recommendation_json)
{
    if (auto st = require(text != nullptr, "instruction text is required"); st != GENEREC_OK) return st;
    return run_step(engine, session_id, text, k, recommendation_json);
}

GENEREC_API generec_status generec_session_feedback(generec_engine* engine, const char* session_id, const char* item_id,
                                                    const char* signal, char** ack_json)
{
    if (auto st = require(engine && item_id && signal, "engine, item_id and signal are required"); st != GENEREC_OK)
        return st;
    return guarded([&] {
        auto slot = find_slot(engine, session_id);
        std::lock_guard lock(slot->mutex);
        Signal sig;
        try {
            sig = signal_from_string(signal);
        } catch (const Error& e) {
            throw Error(ErrorCode::config, e.what());
        }
        slot->session->record_feedback(item_id, sig);
        const auto summary = slot->session->profile_summary();
        put(ack_json, json{{"ok", true}, {"item_id", item_id}, {"signal", to_string(sig)}, {"dislike_streak", summary.dislike_streak}}
                          .dump());
        return GENEREC_OK;
    });
}

GENEREC_API generec_status generec_session_profile(generec_engine* engine, const char* session_id, char** profile_json)
{
    if (auto st = require(engine != nullptr, "engine is required"); st != GENEREC_OK) return st;
    return guarded([&] {
        auto slot = find_slot(engine, session_id);
        std::lock_guard lock(slot->mutex);
        const auto s = slot->session->profile_summary();
        const auto& space = engine->engine->corpus.space;

        json mean_rgb = nullptr;
        // Only meaningful when the preference lives in pixel space.
        if (space.pixel && s.preference.size() == space.dim) {
            double rgb[3] = {0, 0, 0};
            for (std::size_t i = 0; i < s.preference.size(); ++i) rgb[i % 3] += s.preference[i];
            const double pixels = double(space.dim / 3);
            mean_rgb = {rgb[0] / pixels, rgb[1] / pixels, rgb[2] / pixels};
        }
        put(profile_json, json{{"session_id", slot->session->id()},
                               {"user_id", slot->session->user_id()},
                               {"preference",
                                {{"dim", s.preference.size()},
                                 {"norm", norm(s.preference)},
                                 {"mean_rgb", mean_rgb},
                                 {"source", s.from_history ? "history" : "corpus_mean"}}},
                               {"liked", s.liked},
                               {"dislike_streak", s.dislike_streak},
                               {"last_action", s.last_action},
                               {"served", slot->session->served().size()},
                               {"feed_cosine", s.feed_cosine ? json(*s.feed_cosine) : json(nullptr)}}
                              .dump());
        return GENEREC_OK;
    });
}

GENEREC_API generec_status generec_session_snapshot(generec_engine* engine, const char* session_id, char** snapshot_json)
{
    if (auto st = require(engine != nullptr, "engine is required"); st != GENEREC_OK) return st;
    return guarded([&] {
        auto slot = find_slot(engine, session_id);
        std::lock_guard lock(slot->mutex);
        put(snapshot_json, slot->session->snapshot_json());
        return GENEREC_OK;
    });
}

GENEREC_API generec_status generec_session_save(generec_engine* engine, const char* session_id, const char* dir, int promote)
{
    if (auto st = require(engine && dir, "engine and dir are required"); st != GENEREC_OK) return st;
    return guarded([&] {
        auto slot = find_slot(engine, session_id);
        std::lock_guard lock(slot->mutex);
        slot->session->save(dir);
        if (promote) save_corpus(promote_ledger(engine->engine->corpus, *slot->session), fs::path(dir) / "promoted");
        return GENEREC_OK;
    });
}

GENEREC_API generec_status generec_item_frames(generec_engine* engine, const char* item_id, const char* session_id,
                                               char** frames_json)
{
    if (auto st = require(engine && item_id, "engine and item_id are required"); st != GENEREC_OK) return st;
    return guarded([&] {
        const auto& space = engine->engine->corpus.space;
        auto emit = [&](const Item& item) {
            json frames = json::array();
            for (const auto& f : item.frames) frames.push_back(space.pixel ? json(rgb_base64(f)) : json(f));
            put(frames_json, json{{"item_id", item.id},
                                  {"width", space.width},
                                  {"height", space.height},
                                  {"num_frames", item.frames.size()},
                                  {"encoding", space.pixel ? "rgb8-base64" : "float-array"},
                                  {"frames", std::move(frames)}}
                                 .dump());
            return GENEREC_OK;
        };
        if (session_id) {
            auto slot = find_slot(engine, session_id);
            std::lock_guard lock(slot->mutex);
            if (const Item* item = slot->session->find_item(item_id)) return emit(*item);
        } else if (const Item* item = engine->engine->corpus.find_item(item_id)) {
            return emit(*item);
        }
        throw Error(ErrorCode::not_found, "unknown item '" + std::string(item_id) + "'");
    });
}

}  // extern "C"
