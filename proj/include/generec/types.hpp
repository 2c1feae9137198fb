#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace generec {

/// A frame or embedding. All content in a corpus shares one dimension D.
using Vector = std::vector<double>;

enum class Provenance { human, ai_edited, ai_created };

const char* to_string(Provenance p) noexcept;
Provenance provenance_from_string(std::string_view s);

enum class Signal { like, dislike, click };

const char* to_string(Signal s) noexcept;
Signal signal_from_string(std::string_view s);

/// Shape of the content vectors. Pixel-interpretable content is laid out as
/// height x width x 3 (row-major, interleaved RGB) with values in [0,1].
struct ContentSpace {
    std::size_t dim = 0;
    bool pixel = false;
    std::uint32_t width = 0;
    std::uint32_t height = 0;

    static ContentSpace pixels(std::uint32_t width, std::uint32_t height)
    {
        return {std::size_t(width) * height * 3, true, width, height};
    }
    static ContentSpace features(std::size_t dim) { return {dim, false, 0, 0}; }

    bool operator==(const ContentSpace&) const = default;
};

/// A micro-video.
struct Item {
    std::string id;
    std::vector<Vector> frames;
    std::size_t thumbnail_index = 0;
    Provenance provenance = Provenance::human;
    bool watermarked = false;
    std::optional<std::string> parent_id;

    const Vector& thumbnail() const { return frames.at(thumbnail_index); }
    std::size_t num_frames() const noexcept { return frames.size(); }

    bool operator==(const Item&) const = default;
};

/// Throws Error(invalid_data) when an Item invariant is violated.
void validate_item(const Item& item, const ContentSpace& space);

struct Interaction {
    std::string user_id;
    std::string item_id;
    Signal signal = Signal::click;
    std::int64_t timestamp = 0;

    bool operator==(const Interaction&) const = default;
};

struct UserProfile {
    std::string id;
    std::vector<Interaction> interactions;
    std::optional<Vector> user_rep;
    std::optional<Vector> learned_embedding;

    std::int64_t next_timestamp() const noexcept
    {
        return interactions.empty() ? 0 : interactions.back().timestamp + 1;
    }

    bool operator==(const UserProfile&) const = default;
};

using ItemLookup = std::function<const Item*(std::string_view)>;

/// Items and users. Immutable once loaded; shared read-only across threads.
struct Corpus {
    ContentSpace space;
    std::map<std::string, Item, std::less<>> items;
    std::map<std::string, UserProfile, std::less<>> users;

    const Item* find_item(std::string_view id) const;
    const UserProfile* find_user(std::string_view id) const;
    ItemLookup lookup() const;

    /// Checks every item and interaction invariant; throws Error on violation.
    void validate() const;

    bool operator==(const Corpus&) const = default;
};

bool is_valid_id(std::string_view id) noexcept;

// Small dense helpers shared by every module.
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double cosine(std::span<const double> a, std::span<const double> b);
Vector mean_of(std::span<const Vector> vectors);
void clamp_unit(Vector& v);

}  // namespace generec
