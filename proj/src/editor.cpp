#include "generec/editor.hpp"

#include "generec/error.hpp"

#include <algorithm>
#include <array>

namespace generec {

std::size_t select_thumbnail(std::span<const Vector> frames, std::span<const double> user_rep, const Encoder& encoder)
{
    if (frames.empty()) throw Error(ErrorCode::invalid_data, "select_thumbnail: item has no frames");
    if (user_rep.size() != encoder.output_dim())
        throw Error(ErrorCode::dimension_mismatch, "select_thumbnail: user representation does not match encoder");

    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const double s = dot(user_rep, encoder.encode(frames[i]));
        if (i == 0 || s > best_score) {
            best = i;
            best_score = s;
        }
    }
    return best;
}

std::size_t select_thumbnail(const Item& item, std::span<const double> user_rep, const Encoder& encoder)
{
    return select_thumbnail(item.frames, user_rep, encoder);
}

ClipWindow select_clip(std::span<const Vector> frames, std::span<const double> user_rep, const Encoder& encoder,
                       std::size_t length, std::size_t stride)
{
    if (length == 0) throw Error(ErrorCode::config, "clip length must be positive");
    if (stride == 0) stride = length;
    if (frames.size() < length)
        throw Error(ErrorCode::video_too_short, "video has " + std::to_string(frames.size()) +
                                                    " frames, clip length is " + std::to_string(length));
    if (user_rep.size() != encoder.output_dim())
        throw Error(ErrorCode::dimension_mismatch, "select_clip: user representation does not match encoder");

    std::vector<Vector> embedded;
    embedded.reserve(frames.size());
    for (const auto& f : frames) embedded.push_back(encoder.encode(f));

    ClipWindow best{0, length, stride};
    double best_score = 0.0;
    bool first = true;
    Vector clip_rep(encoder.output_dim());
    for (std::size_t start = 0; start + length <= frames.size(); start += stride) {
        std::fill(clip_rep.begin(), clip_rep.end(), 0.0);
        for (std::size_t k = start; k < start + length; ++k)
            for (std::size_t i = 0; i < clip_rep.size(); ++i) clip_rep[i] += embedded[k][i];
        for (double& x : clip_rep) x /= double(length);
        const double s = dot(user_rep, clip_rep);
        if (first || s > best_score) {
            best.start = start;
            best_score = s;
            first = false;
        }
    }
    return best;
}

ClipWindow select_clip(const Item& item, std::span<const double> user_rep, const Encoder& encoder,
                       std::size_t length, std::size_t stride)
{
    return select_clip(item.frames, user_rep, encoder, length, stride);
}

Item crop_to_clip(const Item& item, const ClipWindow& window)
{
    if (window.length == 0 || window.start + window.length > item.frames.size())
        throw Error(ErrorCode::video_too_short, "clip window exceeds item '" + item.id + "'");
    Item out = item;
    out.frames.assign(item.frames.begin() + std::ptrdiff_t(window.start),
                      item.frames.begin() + std::ptrdiff_t(window.start + window.length));
    if (item.thumbnail_index >= window.start && item.thumbnail_index < window.start + window.length)
        out.thumbnail_index = item.thumbnail_index - window.start;
    else
        out.thumbnail_index = 0;
    return out;
}

const std::vector<std::string_view>& registered_styles()
{
    static const std::vector<std::string_view> styles = {"grayscale", "sepia", "invert"};
    return styles;
}

bool is_registered_style(std::string_view name)
{
    const auto& s = registered_styles();
    return std::find(s.begin(), s.end(), name) != s.end();
}

Item style_transfer(const Item& item, std::string_view style, const ContentSpace& space)
{
    if (!is_registered_style(style)) throw Error(ErrorCode::unknown_style, "unknown style '" + std::string(style) + "'");
    if (!space.pixel) throw Error(ErrorCode::not_pixel_interpretable, "style transfer needs pixel content");

    static constexpr std::array<std::array<double, 3>, 3> sepia = {{
        {0.393, 0.769, 0.189},
        {0.349, 0.686, 0.168},
        {0.272, 0.534, 0.131},
    }};

    Item out = item;
    for (auto& frame : out.frames) {
        if (frame.size() != space.dim) throw Error(ErrorCode::dimension_mismatch, "style_transfer: frame size");
        for (std::size_t p = 0; p + 2 < frame.size(); p += 3) {
            const double r = frame[p], g = frame[p + 1], b = frame[p + 2];
            if (style == "grayscale") {
                const double y = 0.299 * r + 0.587 * g + 0.114 * b;
                frame[p] = frame[p + 1] = frame[p + 2] = y;
            } else if (style == "sepia") {
                for (std::size_t c = 0; c < 3; ++c)
                    frame[p + c] = std::clamp(sepia[c][0] * r + sepia[c][1] * g + sepia[c][2] * b, 0.0, 1.0);
            } else {
                frame[p] = 1.0 - r;
                frame[p + 1] = 1.0 - g;
                frame[p + 2] = 1.0 - b;
            }
        }
    }
    out.id = item.id + "_" + std::string(style);
    out.provenance = Provenance::ai_edited;
    out.parent_id = item.id;
    out.watermarked = false;
    return out;
}

Item BlendRevisionGenerator::revise(const Item& item, std::span<const double> target, double strength,
                                    const ContentSpace& space) const
{
    if (target.size() != space.dim)
        throw Error(ErrorCode::dimension_mismatch, "revise: guidance target has dimension " +
                                                       std::to_string(target.size()) + ", content is " +
                                                       std::to_string(space.dim));
    Item out = item;
    for (auto& frame : out.frames) {
        if (frame.size() != space.dim) throw Error(ErrorCode::dimension_mismatch, "revise: frame size");
        for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = (1.0 - strength) * frame[i] + strength * target[i];
        if (space.pixel) clamp_unit(frame);
    }
    return out;
}

Vector frame_space_target(std::span<const double> preference, const Encoder& encoder, const ContentSpace& space)
{
    Vector target = encoder.to_frame_space(preference);
    if (target.size() != space.dim) throw Error(ErrorCode::dimension_mismatch, "guidance does not map to frame space");
    if (space.pixel) clamp_unit(target);
    return target;
}

Item revise(const Item& item, const GuidanceSignal& guidance, const RevisionGenerator& generator,
            const Encoder& encoder, const ContentSpace& space)
{
    if (guidance.mode != GuidanceSignal::Mode::edit) throw Error(ErrorCode::invalid_data, "revise: guidance mode is not edit");
    const Vector target = frame_space_target(guidance.preference, encoder, space);
    Item out = generator.revise(item, target, guidance.blend_strength, space);
    out.id = item.id + "_rev";
    out.provenance = Provenance::ai_edited;
    out.parent_id = item.id;
    out.watermarked = false;
    return out;
}

}  // namespace generec
