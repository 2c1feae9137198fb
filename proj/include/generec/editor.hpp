#pragma once

#include "generec/encoder.hpp"
#include "generec/instructor.hpp"
#include "generec/types.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace generec {

// Thumbnail selection: j = argmax_i t*^T f(v_i), lowest index on ties.
std::size_t select_thumbnail(std::span<const Vector> frames, std::span<const double> user_rep, const Encoder& encoder);
std::size_t select_thumbnail(const Item& item, std::span<const double> user_rep, const Encoder& encoder);

struct ClipWindow {
    std::size_t start = 0;
    std::size_t length = 8;
    std::size_t stride = 8;

    bool operator==(const ClipWindow&) const = default;
};

/// Clip selection over windows start = 0, stride, 2*stride, ... with
/// start + length <= N; each window scored by t*^T (mean of its frame
/// embeddings). Earliest start wins ties. Throws VideoTooShort when N < length.
ClipWindow select_clip(std::span<const Vector> frames, std::span<const double> user_rep, const Encoder& encoder,
                       std::size_t length = 8, std::size_t stride = 0);
ClipWindow select_clip(const Item& item, std::span<const double> user_rep, const Encoder& encoder,
                       std::size_t length = 8, std::size_t stride = 0);

/// Copy of `item` restricted to the window's frames.
Item crop_to_clip(const Item& item, const ClipWindow& window);

// Styles: grayscale, sepia, invert.
const std::vector<std::string_view>& registered_styles();
bool is_registered_style(std::string_view name);

Item style_transfer(const Item& item, std::string_view style, const ContentSpace& space);

/// Pluggable content reviser. Output keeps N and D; pixel content stays in [0,1].
class RevisionGenerator {
public:
    virtual ~RevisionGenerator() = default;

    /// `target` is in frame space.
    virtual Item revise(const Item& item, std::span<const double> target, double strength,
                        const ContentSpace& space) const = 0;
};

/// Reference reviser: y_t = (1 - strength) x_t + strength * target, clamped for pixels.
class BlendRevisionGenerator final : public RevisionGenerator {
public:
    Item revise(const Item& item, std::span<const double> target, double strength,
                const ContentSpace& space) const override;
};

/// Frame-space image of the guidance preference (exact for identity encoders,
/// transpose map for random projections; clamped for pixel spaces).
Vector frame_space_target(std::span<const double> preference, const Encoder& encoder, const ContentSpace& space);

/// Guided revision; guidance.mode must be edit. Output provenance ai_edited.
Item revise(const Item& item, const GuidanceSignal& guidance, const RevisionGenerator& generator,
            const Encoder& encoder, const ContentSpace& space);

}  // namespace generec
