#include "generec/corpus_io.hpp"

#include "generec/error.hpp"
#include "generec/tensor_file.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace generec {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open manifest '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_data, "malformed manifest '" + path.string() + "': " + e.what());
    }
}

template <class T>
T required(const json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(ErrorCode::invalid_data, where + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::invalid_data, where + ": field '" + key + "' has the wrong type");
    }
}

Item item_from_blob(const TensorBlob& blob, const std::string& id)
{
    Item item;
    item.id = id;
    item.frames.resize(blob.header.num_frames);
    for (std::size_t f = 0; f < item.frames.size(); ++f) {
        const float* row = blob.values.data() + f * blob.header.dim;
        item.frames[f].assign(row, row + blob.header.dim);
    }
    return item;
}

std::vector<std::string_view> split_tabs(std::string_view line)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        parts.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return parts;
}

}  // namespace

void quantize_to_float(Item& item)
{
    for (auto& frame : item.frames)
        for (double& x : frame) x = double(static_cast<float>(x));
}

Item load_item_tensor(const fs::path& path, const std::string& id, ContentSpace* space)
{
    if (!fs::exists(path)) throw Error(ErrorCode::io, "missing tensor file '" + path.string() + "'");
    const auto blob = read_tensor_file(path);
    if (blob.header.flags & kFlagScorerBlob)
        throw Error(ErrorCode::invalid_data, path.string() + ": scorer blob is not an item tensor");
    if (blob.header.num_frames == 0) throw Error(ErrorCode::invalid_data, path.string() + ": num_frames is 0");
    if (blob.header.dim == 0) throw Error(ErrorCode::invalid_data, path.string() + ": dim is 0");
    if (space) {
        space->dim = blob.header.dim;
        space->pixel = (blob.header.flags & kFlagPixel) != 0;
        space->width = blob.header.width;
        space->height = blob.header.height;
    }
    return item_from_blob(blob, id);
}

void save_item_tensor(const Item& item, const ContentSpace& space, const fs::path& path)
{
    TensorHeader h;
    h.flags = space.pixel ? kFlagPixel : 0;
    h.num_frames = std::uint32_t(item.frames.size());
    h.dim = std::uint32_t(space.dim);
    h.width = space.width;
    h.height = space.height;
    std::vector<float> values;
    values.reserve(item.frames.size() * space.dim);
    for (const auto& frame : item.frames) {
        if (frame.size() != space.dim) throw Error(ErrorCode::dimension_mismatch, "item '" + item.id + "': ragged frames");
        for (double x : frame) values.push_back(static_cast<float>(x));
    }
    write_tensor_file(path, h, values);
}

Corpus load_corpus(const fs::path& manifest_path)
{
    const json manifest = read_json(manifest_path);
    const fs::path base = manifest_path.parent_path();
    const std::string where = manifest_path.string();

    Corpus corpus;
    corpus.space.dim = required<std::size_t>(manifest, "dim", where);
    corpus.space.pixel = required<bool>(manifest, "pixel", where);
    corpus.space.width = manifest.value("width", 0u);
    corpus.space.height = manifest.value("height", 0u);

    for (const auto& entry : required<json>(manifest, "items", where)) {
        const auto id = required<std::string>(entry, "id", where);
        const auto file = base / required<std::string>(entry, "file", where + " item '" + id + "'");
        ContentSpace file_space;
        Item item = load_item_tensor(file, id, &file_space);
        if (file_space.dim != corpus.space.dim || file_space.pixel != corpus.space.pixel)
            throw Error(ErrorCode::dimension_mismatch, file.string() + ": tensor shape disagrees with manifest");
        item.thumbnail_index = required<std::size_t>(entry, "thumbnail_index", where);
        item.provenance = provenance_from_string(required<std::string>(entry, "provenance", where));
        item.watermarked = required<bool>(entry, "watermarked", where);
        if (auto p = entry.find("parent_id"); p != entry.end() && !p->is_null()) item.parent_id = p->get<std::string>();
        if (!corpus.items.emplace(id, std::move(item)).second)
            throw Error(ErrorCode::invalid_data, where + ": duplicate item id '" + id + "'");
    }

    if (auto users = manifest.find("users"); users != manifest.end())
        for (const auto& uid : *users) {
            UserProfile u;
            u.id = uid.get<std::string>();
            corpus.users.emplace(u.id, std::move(u));
        }

    const auto interactions_path = base / required<std::string>(manifest, "interactions", where);
    std::ifstream in(interactions_path);
    if (!in) throw Error(ErrorCode::io, "missing interactions file '" + interactions_path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto parts = split_tabs(line);
        const std::string at = interactions_path.string() + ":" + std::to_string(line_no);
        if (parts.size() != 4) throw Error(ErrorCode::invalid_data, at + ": expected 4 tab-separated fields");
        Interaction in_rec;
        in_rec.user_id = std::string(parts[0]);
        in_rec.item_id = std::string(parts[1]);
        in_rec.signal = signal_from_string(parts[2]);
        const auto ts = parts[3];
        if (std::from_chars(ts.data(), ts.data() + ts.size(), in_rec.timestamp).ptr != ts.data() + ts.size())
            throw Error(ErrorCode::invalid_data, at + ": bad timestamp");
        auto& user = corpus.users[in_rec.user_id];
        user.id = in_rec.user_id;
        user.interactions.push_back(std::move(in_rec));
    }

    corpus.validate();
    return corpus;
}

fs::path save_corpus(const Corpus& corpus, const fs::path& dir)
{
    corpus.validate();
    fs::create_directories(dir / "items");

    json items = json::array();
    for (const auto& [id, item] : corpus.items) {
        const std::string file = "items/" + id + ".grtf";
        save_item_tensor(item, corpus.space, dir / file);
        json entry = {{"id", id},
                      {"file", file},
                      {"thumbnail_index", item.thumbnail_index},
                      {"provenance", to_string(item.provenance)},
                      {"watermarked", item.watermarked}};
        if (item.parent_id) entry["parent_id"] = *item.parent_id;
        items.push_back(std::move(entry));
    }

    json users = json::array();
    std::ostringstream tsv;
    for (const auto& [uid, user] : corpus.users) {
        users.push_back(uid);
        for (const auto& in : user.interactions)
            tsv << in.user_id << '\t' << in.item_id << '\t' << to_string(in.signal) << '\t' << in.timestamp << '\n';
    }
    {
        std::ofstream out(dir / "interactions.tsv", std::ios::trunc);
        if (!out) throw Error(ErrorCode::io, "cannot write interactions under '" + dir.string() + "'");
        out << tsv.str();
    }

    const json manifest = {{"format", "generec-corpus"},
                           {"version", 1},
                           {"dim", corpus.space.dim},
                           {"pixel", corpus.space.pixel},
                           {"width", corpus.space.width},
                           {"height", corpus.space.height},
                           {"items", std::move(items)},
                           {"users", std::move(users)},
                           {"interactions", "interactions.tsv"}};
    const auto manifest_path = dir / "manifest.json";
    std::ofstream out(manifest_path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + manifest_path.string() + "'");
    out << manifest.dump(2) << '\n';
    return manifest_path;
}

}  // namespace generec
