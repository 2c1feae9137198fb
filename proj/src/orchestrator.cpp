#include "generec/orchestrator.hpp"

#include "generec/corpus_io.hpp"
#include "generec/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>

namespace generec {
namespace fs = std::filesystem;
using nlohmann::json;

LearnedItemScorer::LearnedItemScorer(const PreferenceScorer& scorer, std::string user, const Encoder& encoder)
    : scorer_(scorer), encoder_(encoder), direction_(scorer.preference_direction(user)), bias_(scorer.bias())
{
}

double LearnedItemScorer::score(const Item& item) const
{
    return dot(direction_, encoder_.encode(item.thumbnail())) + bias_;
}

double PreferenceItemScorer::score(const Item& item) const
{
    return dot(preference_, encoder_.encode(item.thumbnail()));
}

std::vector<const Item*> rank(std::span<const Item* const> candidates, const ItemScorer& scorer,
                              const std::set<std::string, std::less<>>& served, std::size_t k)
{
    if (k == 0) throw Error(ErrorCode::config, "rank: k must be >= 1");
    std::vector<std::pair<double, const Item*>> scored;
    scored.reserve(candidates.size());
    for (const Item* item : candidates)
        if (item && !served.count(item->id)) scored.emplace_back(scorer.score(*item), item);
    if (scored.empty()) throw Error(ErrorCode::empty_candidate_set, "no unserved candidates to rank");

    const auto by_score = [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second->id < b.second->id;
    };
    const std::size_t n = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + std::ptrdiff_t(n), scored.end(), by_score);
    std::vector<const Item*> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(scored[i].second);
    return out;
}

Engine::Engine(Corpus corpus_, Encoder encoder_, std::optional<PreferenceScorer> scorer_, LoopConfig config_)
    : corpus(std::move(corpus_)), encoder(std::move(encoder_)), scorer(std::move(scorer_)), config(std::move(config_))
{
    if (encoder.input_dim() != corpus.space.dim)
        throw Error(ErrorCode::dimension_mismatch, "encoder input does not match corpus dimension");
    if (scorer && scorer->feature_dim() != encoder.output_dim())
        throw Error(ErrorCode::dimension_mismatch, "scorer feature dimension does not match encoder");
    config.watermark.validate();
    config.creation.validate();
    mean_thumbnail = corpus_mean_thumbnail(corpus, encoder);
}

namespace {

std::string frame_digest(const Item& item)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& frame : item.frames)
        for (double x : frame) {
            auto bits = std::bit_cast<std::uint64_t>(x);
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xff;
                h *= 0x100000001b3ull;
            }
        }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t string_hash(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

int trailing_dislikes(std::span<const Signal> window)
{
    int n = 0;
    for (auto it = window.rbegin(); it != window.rend() && *it == Signal::dislike; ++it) ++n;
    return n;
}

json item_entry(const LedgerEntry& e)
{
    json report = json::parse(e.report.to_json());
    json j = {{"id", e.item.id},
              {"provenance", to_string(e.item.provenance)},
              {"watermarked", e.item.watermarked},
              {"thumbnail_index", e.item.thumbnail_index},
              {"num_frames", e.item.frames.size()},
              {"quarantined", e.quarantined},
              {"check_report", report}};
    j["parent_id"] = e.item.parent_id ? json(*e.item.parent_id) : json(nullptr);
    return j;
}

}  // namespace

std::string Recommendation::log_line() const
{
    json items_json = json::array();
    for (const auto& r : items)
        items_json.push_back({{"id", r.item->id},
                              {"provenance", to_string(r.item->provenance)},
                              {"watermarked", r.item->watermarked},
                              {"thumbnail_index", r.item->thumbnail_index},
                              {"digest", frame_digest(*r.item)}});
    return json{{"action", to_string(action.kind)},
                {"source", action.source},
                {"direct", direct_exposure},
                {"fidelity_failure", fidelity_failure.has_value()},
                {"items", std::move(items_json)}}
        .dump();
}

Session::Session(const Engine& engine, std::string session_id, std::string user_id)
    : engine_(&engine), id_(std::move(session_id))
{
    if (const UserProfile* existing = engine.corpus.find_user(user_id))
        profile_ = *existing;
    else
        profile_.id = std::move(user_id);
    profile_.user_rep.reset();
}

const Item* Session::find_item(std::string_view id) const
{
    if (const Item* item = engine_->corpus.find_item(id)) return item;
    for (const auto& e : ledger_)
        if (e.item.id == id) return &e.item;
    return nullptr;
}

const std::optional<Vector>& Session::user_rep()
{
    if (!user_rep_valid_) {
        try {
            user_rep_ = compute_user_rep(profile_, [this](std::string_view id) { return find_item(id); }, engine_->encoder);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::no_positive_history) throw;
            user_rep_.reset();
        }
        user_rep_valid_ = true;
    }
    return user_rep_;
}

Vector Session::preference()
{
    const auto& rep = user_rep();
    return rep ? *rep : engine_->mean_thumbnail;
}

std::vector<const Item*> Session::retrieve(std::size_t k, const Item* extra)
{
    std::vector<const Item*> candidates;
    candidates.reserve(engine_->corpus.items.size() + 1);
    for (const auto& [id, item] : engine_->corpus.items) candidates.push_back(&item);
    if (extra) candidates.push_back(extra);

    const auto& scorer = engine_->scorer;
    if (scorer && scorer->knows(profile_.id))
        return rank(candidates, LearnedItemScorer(*scorer, profile_.id, engine_->encoder), served_, k);
    return rank(candidates, PreferenceItemScorer(preference(), engine_->encoder), served_, k);
}

std::string Session::next_generated_id()
{
    return id_ + "-g" + std::to_string(generated_ + 1);
}

Recommendation Session::step(std::optional<std::string_view> instruction_text, std::optional<std::size_t> k_opt)
{
    const auto& cfg = engine_->config;
    const auto& space = engine_->corpus.space;
    const std::size_t k = k_opt.value_or(cfg.k);

    const Instruction instruction = instruction_text ? parse_instruction(*instruction_text) : Instruction{NoInstruction{}};
    const bool reset = std::holds_alternative<ResetInstruction>(instruction);

    const std::vector<Signal> window = reset ? std::vector<Signal>{} : feedback_window_;
    DecisionContext ctx{window,
                        served_order_.empty() ? std::nullopt : std::optional<std::string>(served_order_.back()),
                        [this](std::string_view id) { return find_item(id); }};
    Recommendation rec;
    rec.action = decide(ctx, instruction, cfg.decision);

    // Everything below builds the result; session state is only touched at the end.
    std::optional<LedgerEntry> generated;
    if (rec.action.kind != Action::Kind::retrieve) {
        const GuidanceSignal guidance = build_guidance(user_rep(), engine_->mean_thumbnail, instruction, rec.action, cfg.blend);
        Item out;
        if (rec.action.kind == Action::Kind::invoke_editor) {
            const Item source = watermark_remove(*find_item(rec.action.source), cfg.watermark, space);
            out = guidance.style ? style_transfer(source, *guidance.style, space)
                                 : revise(source, guidance, engine_->reviser, engine_->encoder, space);
            out.thumbnail_index = select_thumbnail(out, guidance.preference, engine_->encoder);
            if (cfg.clip_length && out.frames.size() >= *cfg.clip_length) {
                const auto clip = select_clip(out, guidance.preference, engine_->encoder, *cfg.clip_length, cfg.clip_stride);
                out = crop_to_clip(out, clip);
                out.thumbnail_index = select_thumbnail(out, guidance.preference, engine_->encoder);
            }
            out.id = next_generated_id();
        } else {
            CreationConfig cc = cfg.creation;
            cc.seed = SplitMix64(cfg.seed ^ string_hash(id_) ^ (generated_ * 0x9E3779B97F4A7C15ull)).next();
            out = create(guidance, cc, engine_->encoder, space, next_generated_id());
        }
        out.watermarked = false;
        out = watermark_embed(out, cfg.watermark, space);
        LedgerEntry entry;
        entry.report = engine_->checker.run(out, space, CheckConfig{cfg.watermark});
        entry.quarantined = !entry.report.pass();
        entry.item = std::move(out);
        generated = std::move(entry);
    }

    bool direct = false;
    const Item* staged = generated && !generated->quarantined ? &generated->item : nullptr;
    std::vector<const Item*> picked;
    if (staged) {
        direct = rec.action.from_dislike_streak
                     ? cfg.exposure.direct_on_dislike_streak
                     : cfg.exposure.direct_on_explicit_request && cfg.decision.direct_expose_on_explicit_request;
        picked = direct ? std::vector<const Item*>{staged} : retrieve(k, staged);
    } else {
        picked = retrieve(k, nullptr);
        if (generated) rec.fidelity_failure = generated->report;
    }

    // Commit.
    if (reset) feedback_window_.clear();
    const Item* committed = nullptr;
    if (generated) {
        ledger_.push_back(std::move(*generated));
        ++generated_;
        committed = &ledger_.back().item;
        if (rec.action.from_dislike_streak) feedback_window_.clear();
    }
    last_feed_.clear();
    for (const Item* item : picked) {
        const bool is_generated = staged && item == staged;
        const Item* stored = is_generated ? committed : item;
        RecommendedItem r{stored, std::nullopt};
        if (is_generated) r.report = ledger_.back().report;
        rec.items.push_back(std::move(r));
        served_.insert(stored->id);
        served_order_.push_back(stored->id);
        last_feed_.push_back(stored->id);
    }
    rec.direct_exposure = direct;
    last_action_ = rec.fidelity_failure ? "retrieve_after_fidelity_failure" : to_string(rec.action.kind);
    return rec;
}

void Session::record_feedback(std::string_view item_id, Signal signal)
{
    if (!served_.count(item_id))
        throw Error(ErrorCode::unserved_item, "item '" + std::string(item_id) + "' was not served in this session");
    Interaction in{profile_.id, std::string(item_id), signal, profile_.next_timestamp()};
    profile_.interactions.push_back(std::move(in));
    feedback_window_.push_back(signal);
    if (signal == Signal::like) user_rep_valid_ = false;
}

ProfileSummary Session::profile_summary()
{
    ProfileSummary s;
    s.from_history = user_rep().has_value();
    s.preference = preference();
    for (const auto& in : profile_.interactions)
        if (in.signal == Signal::like) ++s.liked;
    s.dislike_streak = trailing_dislikes(feedback_window_);
    s.last_action = last_action_;
    if (!last_feed_.empty()) {
        double sum = 0.0;
        for (const auto& id : last_feed_) sum += cosine(s.preference, engine_->encoder.encode(find_item(id)->thumbnail()));
        s.feed_cosine = sum / double(last_feed_.size());
    }
    return s;
}

std::string Session::snapshot_json() const
{
    json feedback = json::array();
    for (const auto& in : profile_.interactions)
        feedback.push_back({{"item_id", in.item_id}, {"signal", to_string(in.signal)}, {"timestamp", in.timestamp}});
    json window = json::array();
    for (Signal s : feedback_window_) window.push_back(to_string(s));
    json ledger = json::array();
    for (const auto& e : ledger_) {
        json j = item_entry(e);
        j["file"] = "ledger/" + e.item.id + ".grtf";
        ledger.push_back(std::move(j));
    }
    return json{{"session_id", id_},
                {"user_id", profile_.id},
                {"served", served_order_},
                {"feedback", std::move(feedback)},
                {"feedback_window", std::move(window)},
                {"last_action", last_action_},
                {"last_feed", last_feed_},
                {"generated", generated_},
                {"ledger", std::move(ledger)}}
        .dump(2);
}

void Session::save(const fs::path& dir) const
{
    fs::create_directories(dir / "ledger");
    for (const auto& e : ledger_) save_item_tensor(e.item, engine_->corpus.space, dir / "ledger" / (e.item.id + ".grtf"));
    std::ofstream out(dir / "session.json", std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write session snapshot under '" + dir.string() + "'");
    out << snapshot_json() << '\n';
}

Session Session::load(const Engine& engine, const fs::path& dir)
{
    std::ifstream in(dir / "session.json");
    if (!in) throw Error(ErrorCode::io, "missing session snapshot in '" + dir.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_data, std::string("malformed session snapshot: ") + e.what());
    }

    Session s(engine, j.at("session_id").get<std::string>(), j.at("user_id").get<std::string>());
    s.profile_.interactions.clear();
    if (const UserProfile* base = engine.corpus.find_user(s.profile_.id)) s.profile_ = *base;
    const std::size_t base_count = s.profile_.interactions.size();
    const auto& fb = j.at("feedback");
    for (std::size_t i = base_count; i < fb.size(); ++i)
        s.profile_.interactions.push_back({s.profile_.id, fb[i].at("item_id").get<std::string>(),
                                           signal_from_string(fb[i].at("signal").get<std::string>()),
                                           fb[i].at("timestamp").get<std::int64_t>()});
    for (const auto& sig : j.at("feedback_window")) s.feedback_window_.push_back(signal_from_string(sig.get<std::string>()));
    for (const auto& e : j.at("ledger")) {
        LedgerEntry entry;
        entry.item = load_item_tensor(dir / e.at("file").get<std::string>(), e.at("id").get<std::string>());
        entry.item.provenance = provenance_from_string(e.at("provenance").get<std::string>());
        entry.item.watermarked = e.at("watermarked").get<bool>();
        entry.item.thumbnail_index = e.at("thumbnail_index").get<std::size_t>();
        if (!e.at("parent_id").is_null()) entry.item.parent_id = e.at("parent_id").get<std::string>();
        entry.quarantined = e.at("quarantined").get<bool>();
        for (const auto& c : e.at("check_report").at("checks"))
            entry.report.results.push_back(
                {c.at("check").get<std::string>(), c.at("pass").get<bool>(), c.at("reason").get<std::string>()});
        s.ledger_.push_back(std::move(entry));
    }
    for (const auto& id : j.at("served")) {
        s.served_order_.push_back(id.get<std::string>());
        s.served_.insert(id.get<std::string>());
    }
    s.last_action_ = j.at("last_action").get<std::string>();
    s.last_feed_ = j.at("last_feed").get<std::vector<std::string>>();
    s.generated_ = j.at("generated").get<std::size_t>();
    return s;
}

Corpus promote_ledger(const Corpus& corpus, const Session& session)
{
    Corpus out = corpus;
    for (const auto& e : session.ledger()) {
        if (e.quarantined) continue;
        Item item = e.item;
        quantize_to_float(item);
        if (corpus.space.pixel)
            for (auto& f : item.frames) clamp_unit(f);
        out.items.emplace(item.id, std::move(item));
    }
    out.validate();
    return out;
}

}  // namespace generec
