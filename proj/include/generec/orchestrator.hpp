#pragma once

#include "generec/creator.hpp"
#include "generec/editor.hpp"
#include "generec/encoder.hpp"
#include "generec/evaluation.hpp"
#include "generec/fidelity.hpp"
#include "generec/instructor.hpp"
#include "generec/types.hpp"

#include <deque>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace generec {

// ---------------------------------------------------------------------------
// Ranking
// ---------------------------------------------------------------------------

class ItemScorer {
public:
    virtual ~ItemScorer() = default;
    virtual double score(const Item& item) const = 0;
};

/// Scores thumbnails with a trained PreferenceScorer.
class LearnedItemScorer final : public ItemScorer {
public:
    LearnedItemScorer(const PreferenceScorer& scorer, std::string user, const Encoder& encoder);
    double score(const Item& item) const override;

private:
    const PreferenceScorer& scorer_;
    const Encoder& encoder_;
    Vector direction_;
    double bias_;
};

/// Scores thumbnails by dot product with a preference vector (cold start).
class PreferenceItemScorer final : public ItemScorer {
public:
    PreferenceItemScorer(Vector preference, const Encoder& encoder)
        : preference_(std::move(preference)), encoder_(encoder) {}
    double score(const Item& item) const override;

private:
    Vector preference_;
    const Encoder& encoder_;
};

/// Top-k by descending score, skipping served ids; ties by ascending id.
/// Throws EmptyCandidateSet when nothing is left to rank.
std::vector<const Item*> rank(std::span<const Item* const> candidates, const ItemScorer& scorer,
                              const std::set<std::string, std::less<>>& served, std::size_t k);

// ---------------------------------------------------------------------------
// Engine: everything shared read-only between sessions.
// ---------------------------------------------------------------------------

struct ExposurePolicy {
    bool direct_on_explicit_request = true;
    bool direct_on_dislike_streak = true;
};

struct LoopConfig {
    std::size_t k = 5;
    DecisionPolicy decision;
    ExposurePolicy exposure;
    double blend = 0.3;
    CreationConfig creation;
    WatermarkKey watermark{0x67656e6572656364ull, 0.05, 0.5};
    /// When set, edited items are cropped to their best clip of this length.
    std::optional<std::size_t> clip_length;
    std::size_t clip_stride = 0;
    std::uint64_t seed = 0;
};

struct Engine {
    Engine(Corpus corpus, Encoder encoder, std::optional<PreferenceScorer> scorer, LoopConfig config);

    Corpus corpus;
    Encoder encoder;
    std::optional<PreferenceScorer> scorer;
    LoopConfig config;
    FidelityChecker checker;
    BlendRevisionGenerator reviser;
    Vector mean_thumbnail;  // encoder space
};

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

struct LedgerEntry {
    Item item;
    CheckReport report;
    bool quarantined = false;
};

struct RecommendedItem {
    const Item* item = nullptr;
    std::optional<CheckReport> report;  // generated items only
};

struct Recommendation {
    Action action;
    std::vector<RecommendedItem> items;
    bool direct_exposure = false;
    /// Set when a generated item failed fidelity and the step fell back to retrieval.
    std::optional<CheckReport> fidelity_failure;

    /// Deterministic one-line JSON record of this recommendation.
    std::string log_line() const;
};

struct ProfileSummary {
    Vector preference;
    bool from_history = false;
    std::size_t liked = 0;
    int dislike_streak = 0;
    std::string last_action;
    std::optional<double> feed_cosine;  // mean cosine of last feed thumbnails to the preference
};

class Session {
public:
    Session(const Engine& engine, std::string session_id, std::string user_id);

    const std::string& id() const noexcept { return id_; }
    const std::string& user_id() const noexcept { return profile_.id; }
    const UserProfile& profile() const noexcept { return profile_; }
    const std::vector<std::string>& served() const noexcept { return served_order_; }
    const std::deque<LedgerEntry>& ledger() const noexcept { return ledger_; }

    /// parse -> decide -> retrieve | edit | create -> fidelity -> expose.
    /// Parse and decision errors propagate with the session unchanged.
    Recommendation step(std::optional<std::string_view> instruction_text = std::nullopt,
                        std::optional<std::size_t> k = std::nullopt);

    /// Throws UnservedItem (state unchanged) if the item was not served here.
    void record_feedback(std::string_view item_id, Signal signal);

    /// t* over the session profile, or nullopt without likes. Cached until the next like.
    const std::optional<Vector>& user_rep();

    ProfileSummary profile_summary();

    /// Items visible to this session: corpus plus its own ledger.
    const Item* find_item(std::string_view id) const;

    std::string snapshot_json() const;
    void save(const std::filesystem::path& dir) const;
    static Session load(const Engine& engine, const std::filesystem::path& dir);

private:
    Vector preference();
    std::vector<const Item*> retrieve(std::size_t k, const Item* extra);
    std::string next_generated_id();

    const Engine* engine_;
    std::string id_;
    UserProfile profile_;
    std::vector<std::string> served_order_;
    std::set<std::string, std::less<>> served_;
    std::vector<Signal> feedback_window_;
    std::deque<LedgerEntry> ledger_;
    std::optional<Vector> user_rep_;
    bool user_rep_valid_ = false;
    std::string last_action_ = "none";
    std::vector<std::string> last_feed_;
    std::size_t generated_ = 0;
};

/// Returns a copy of `corpus` with the session's passing ledger items added.
Corpus promote_ledger(const Corpus& corpus, const Session& session);

}  // namespace generec
