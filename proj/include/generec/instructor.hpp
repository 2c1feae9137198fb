#pragma once

#include "generec/encoder.hpp"
#include "generec/instruction.hpp"
#include "generec/types.hpp"

#include <optional>
#include <span>
#include <string>

namespace generec {

/// t* = (1/M) * sum of encoded thumbnails of liked items, in interaction order.
/// Throws NoPositiveHistory when the user has no likes.
Vector compute_user_rep(const UserProfile& user, const ItemLookup& items, const Encoder& encoder);
Vector compute_user_rep(const UserProfile& user, const Corpus& corpus, const Encoder& encoder);

/// Mean encoded thumbnail over the corpus; the cold-start preference.
Vector corpus_mean_thumbnail(const Corpus& corpus, const Encoder& encoder);

struct DecisionPolicy {
    /// Consecutive dislikes that trigger the generator.
    int dislike_threshold = 3;
    bool direct_expose_on_explicit_request = true;
};

struct Action {
    enum class Kind { retrieve, invoke_editor, invoke_creator };
    Kind kind = Kind::retrieve;
    std::string source;  // invoke_editor only

    /// True when the generator was triggered by the dislike streak rather than
    /// by an explicit request.
    bool from_dislike_streak = false;

    bool operator==(const Action&) const = default;
};

const char* to_string(Action::Kind kind) noexcept;

struct DecisionContext {
    std::span<const Signal> feedback;          // oldest first
    std::optional<std::string> last_served;
    ItemLookup items;                          // resolves edit sources
};

/// Only the last policy.dislike_threshold signals are consulted.
Action decide(const DecisionContext& context, const Instruction& instruction, const DecisionPolicy& policy);

struct GuidanceSignal {
    enum class Mode { retrieve, edit, create };
    Mode mode = Mode::retrieve;
    std::string source_item_id;
    Vector preference;  // encoder space
    std::optional<std::string> style;
    double blend_strength = 0.3;

    bool operator==(const GuidanceSignal&) const = default;
};

/// preference = user_rep when present, else `fallback` (the corpus mean).
GuidanceSignal build_guidance(const std::optional<Vector>& user_rep, const Vector& fallback,
                              const Instruction& instruction, const Action& action, double blend_strength = 0.3);

}  // namespace generec
