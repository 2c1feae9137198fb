#pragma once

#include "generec/types.hpp"

#include <filesystem>

namespace generec {

// On-disk layout: a manifest.json listing items (one GRTF tensor file each)
// and a tab-separated interactions file. Frame values are stored as float32;
// save_corpus rounds to float32, so data that came from disk round-trips
// bit-exactly.

Corpus load_corpus(const std::filesystem::path& manifest_path);

/// Writes manifest.json, interactions.tsv and items/<id>.grtf under `dir`.
/// Returns the manifest path.
std::filesystem::path save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

/// Reads a single tensor file as an Item (used by `fvd` on loose sets).
Item load_item_tensor(const std::filesystem::path& path, const std::string& id, ContentSpace* space = nullptr);
void save_item_tensor(const Item& item, const ContentSpace& space, const std::filesystem::path& path);

/// Rounds every value to float32 precision in place.
void quantize_to_float(Item& item);

}  // namespace generec
