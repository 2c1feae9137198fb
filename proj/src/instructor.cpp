#include "generec/instructor.hpp"

#include "generec/error.hpp"

#include <algorithm>

namespace generec {

Vector compute_user_rep(const UserProfile& user, const ItemLookup& items, const Encoder& encoder)
{
    Vector sum(encoder.output_dim(), 0.0);
    std::size_t liked = 0;
    for (const auto& in : user.interactions) {
        if (in.signal != Signal::like) continue;
        const Item* item = items(in.item_id);
        if (!item) throw Error(ErrorCode::dangling_reference, "liked item '" + in.item_id + "' not found");
        const Vector e = encoder.encode(item->thumbnail());
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += e[i];
        ++liked;
    }
    if (liked == 0) throw Error(ErrorCode::no_positive_history, "user '" + user.id + "' has no liked items");
    for (double& x : sum) x /= double(liked);
    return sum;
}

Vector compute_user_rep(const UserProfile& user, const Corpus& corpus, const Encoder& encoder)
{
    return compute_user_rep(user, corpus.lookup(), encoder);
}

Vector corpus_mean_thumbnail(const Corpus& corpus, const Encoder& encoder)
{
    if (corpus.items.empty()) throw Error(ErrorCode::insufficient_data, "empty corpus has no mean thumbnail");
    Vector sum(encoder.output_dim(), 0.0);
    for (const auto& [id, item] : corpus.items) {
        const Vector e = encoder.encode(item.thumbnail());
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += e[i];
    }
    for (double& x : sum) x /= double(corpus.items.size());
    return sum;
}

const char* to_string(Action::Kind kind) noexcept
{
    switch (kind) {
    case Action::Kind::retrieve: return "retrieve";
    case Action::Kind::invoke_editor: return "invoke_editor";
    case Action::Kind::invoke_creator: return "invoke_creator";
    }
    return "retrieve";
}

Action decide(const DecisionContext& context, const Instruction& instruction, const DecisionPolicy& policy)
{
    if (policy.dislike_threshold < 1) throw Error(ErrorCode::config, "dislike threshold must be >= 1");

    if (std::holds_alternative<GenerateNew>(instruction)) return {Action::Kind::invoke_creator, {}, false};

    auto editor_action = [&](const std::optional<std::string>& named) {
        const std::optional<std::string> source = named ? named : context.last_served;
        if (!source) throw Error(ErrorCode::unknown_source_item, "no item to edit: nothing served yet");
        if (!context.items || !context.items(*source))
            throw Error(ErrorCode::unknown_source_item, "unknown source item '" + *source + "'");
        return Action{Action::Kind::invoke_editor, *source, false};
    };
    if (const auto* edit = std::get_if<EditInstruction>(&instruction)) return editor_action(edit->item_id);
    if (std::holds_alternative<StyleInstruction>(instruction)) return editor_action(std::nullopt);

    const auto r = std::size_t(policy.dislike_threshold);
    const auto& fb = context.feedback;
    if (fb.size() >= r && std::all_of(fb.end() - std::ptrdiff_t(r), fb.end(), [](Signal s) { return s == Signal::dislike; }))
        return {Action::Kind::invoke_creator, {}, true};
    return {};
}

GuidanceSignal build_guidance(const std::optional<Vector>& user_rep, const Vector& fallback,
                              const Instruction& instruction, const Action& action, double blend_strength)
{
    if (blend_strength < 0.0 || blend_strength > 1.0) throw Error(ErrorCode::config, "blend strength must be in [0,1]");
    GuidanceSignal g;
    g.preference = user_rep ? *user_rep : fallback;
    g.blend_strength = blend_strength;
    switch (action.kind) {
    case Action::Kind::retrieve: g.mode = GuidanceSignal::Mode::retrieve; break;
    case Action::Kind::invoke_editor:
        g.mode = GuidanceSignal::Mode::edit;
        g.source_item_id = action.source;
        break;
    case Action::Kind::invoke_creator: g.mode = GuidanceSignal::Mode::create; break;
    }
    if (const auto* s = std::get_if<StyleInstruction>(&instruction)) g.style = s->name;
    if (const auto* e = std::get_if<EditInstruction>(&instruction)) g.style = e->style;
    return g;
}

}  // namespace generec
