#include "generec/types.hpp"

#include "generec/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace generec {

const char* to_string(Provenance p) noexcept
{
    switch (p) {
    case Provenance::human: return "human";
    case Provenance::ai_edited: return "ai_edited";
    case Provenance::ai_created: return "ai_created";
    }
    return "human";
}

Provenance provenance_from_string(std::string_view s)
{
    if (s == "human") return Provenance::human;
    if (s == "ai_edited") return Provenance::ai_edited;
    if (s == "ai_created") return Provenance::ai_created;
    throw Error(ErrorCode::invalid_data, "unknown provenance '" + std::string(s) + "'");
}

const char* to_string(Signal s) noexcept
{
    switch (s) {
    case Signal::like: return "like";
    case Signal::dislike: return "dislike";
    case Signal::click: return "click";
    }
    return "click";
}

Signal signal_from_string(std::string_view s)
{
    if (s == "like") return Signal::like;
    if (s == "dislike") return Signal::dislike;
    if (s == "click") return Signal::click;
    throw Error(ErrorCode::invalid_data, "unknown signal '" + std::string(s) + "'");
}

bool is_valid_id(std::string_view id) noexcept
{
    if (id.empty()) return false;
    return std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-';
    });
}

void validate_item(const Item& item, const ContentSpace& space)
{
    auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::invalid_data, "item '" + item.id + "': " + what);
    };
    if (item.frames.empty()) fail("no frames");
    if (item.thumbnail_index >= item.frames.size()) fail("thumbnail index out of range");
    for (std::size_t f = 0; f < item.frames.size(); ++f) {
        const auto& frame = item.frames[f];
        if (frame.size() != space.dim)
            fail("frame " + std::to_string(f) + " has dimension " + std::to_string(frame.size()) +
                 ", expected " + std::to_string(space.dim));
        for (double x : frame) {
            if (!std::isfinite(x)) fail("non-finite value in frame " + std::to_string(f));
            if (space.pixel && (x < 0.0 || x > 1.0)) fail("pixel value out of [0,1] in frame " + std::to_string(f));
        }
    }
    if (item.provenance == Provenance::ai_edited && !item.parent_id) fail("ai_edited item without parent_id");
    if (item.provenance == Provenance::human && item.watermarked) fail("human item flagged as watermarked");
}

const Item* Corpus::find_item(std::string_view id) const
{
    auto it = items.find(id);
    return it == items.end() ? nullptr : &it->second;
}

const UserProfile* Corpus::find_user(std::string_view id) const
{
    auto it = users.find(id);
    return it == users.end() ? nullptr : &it->second;
}

ItemLookup Corpus::lookup() const
{
    return [this](std::string_view id) { return find_item(id); };
}

void Corpus::validate() const
{
    if (space.dim == 0) throw Error(ErrorCode::invalid_data, "corpus dimension is zero");
    if (space.pixel && space.dim != std::size_t(space.width) * space.height * 3)
        throw Error(ErrorCode::invalid_data, "pixel corpus dimension does not match width*height*3");
    for (const auto& [id, item] : items) {
        if (id != item.id) throw Error(ErrorCode::invalid_data, "item key mismatch for '" + id + "'");
        validate_item(item, space);
    }
    for (const auto& [uid, user] : users) {
        std::optional<std::int64_t> last;
        for (const auto& in : user.interactions) {
            if (in.user_id != uid)
                throw Error(ErrorCode::invalid_data, "interaction of '" + in.user_id + "' filed under '" + uid + "'");
            if (!find_item(in.item_id))
                throw Error(ErrorCode::dangling_reference,
                            "interaction references unknown item '" + in.item_id + "' (user '" + uid + "')");
            if (last && in.timestamp <= *last)
                throw Error(ErrorCode::invalid_data, "timestamps not strictly increasing for user '" + uid + "'");
            last = in.timestamp;
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw Error(ErrorCode::dimension_mismatch,
                    "dot: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

double cosine(std::span<const double> a, std::span<const double> b)
{
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::zero_norm_embedding, "cosine of a zero-norm vector");
    return dot(a, b) / (na * nb);
}

Vector mean_of(std::span<const Vector> vectors)
{
    if (vectors.empty()) throw Error(ErrorCode::invalid_data, "mean of an empty set");
    Vector m(vectors.front().size(), 0.0);
    for (const auto& v : vectors) {
        if (v.size() != m.size()) throw Error(ErrorCode::dimension_mismatch, "mean: ragged input");
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += v[i];
    }
    const double inv = 1.0 / double(vectors.size());
    for (double& x : m) x *= inv;
    return m;
}

void clamp_unit(Vector& v)
{
    for (double& x : v) x = std::clamp(x, 0.0, 1.0);
}

}  // namespace generec
