#include "generec/tensor_file.hpp"

#include "generec/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace generec {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p)
{
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const TensorHeader& header, std::span<const float> values)
{
    if (values.size() != std::size_t(header.num_frames) * header.dim)
        throw Error(ErrorCode::invalid_data, "tensor value count does not match header");

    std::vector<std::uint8_t> out;
    out.reserve(kTensorHeaderSize + values.size() * 4);
    for (char c : {'G', 'R', 'T', 'F'}) out.push_back(std::uint8_t(c));
    out.push_back(header.version);
    out.push_back(header.flags);
    out.push_back(0);
    out.push_back(0);
    put_u32(out, header.num_frames);
    put_u32(out, header.dim);
    put_u32(out, header.width);
    put_u32(out, header.height);
    for (float f : values) put_u32(out, std::bit_cast<std::uint32_t>(f));
    return out;
}

TensorBlob decode_tensor(std::span<const std::uint8_t> bytes, const std::string& source)
{
    if (bytes.size() < kTensorHeaderSize)
        throw Error(ErrorCode::truncated_file, source + ": truncated header");
    if (std::memcmp(bytes.data(), "GRTF", 4) != 0)
        throw Error(ErrorCode::bad_magic, source + ": bad magic");

    TensorBlob blob;
    auto& h = blob.header;
    h.version = bytes[4];
    h.flags = bytes[5];
    if (h.version != kTensorVersion)
        throw Error(ErrorCode::version_mismatch,
                    source + ": unsupported version " + std::to_string(int(h.version)));
    if (bytes[6] != 0 || bytes[7] != 0)
        throw Error(ErrorCode::invalid_data, source + ": reserved field is non-zero");
    h.num_frames = get_u32(bytes.data() + 8);
    h.dim = get_u32(bytes.data() + 12);
    h.width = get_u32(bytes.data() + 16);
    h.height = get_u32(bytes.data() + 20);

    const std::uint64_t count = std::uint64_t(h.num_frames) * h.dim;
    const std::uint64_t expected = kTensorHeaderSize + count * 4;
    if (bytes.size() < expected) throw Error(ErrorCode::truncated_file, source + ": truncated payload");
    if (bytes.size() > expected) throw Error(ErrorCode::invalid_data, source + ": trailing bytes after payload");

    blob.values.resize(count);
    const std::uint8_t* p = bytes.data() + kTensorHeaderSize;
    for (std::size_t i = 0; i < count; ++i, p += 4) blob.values[i] = std::bit_cast<float>(get_u32(p));
    return blob;
}

void write_tensor_file(const std::filesystem::path& path, const TensorHeader& header, std::span<const float> values)
{
    const auto bytes = encode_tensor(header, values);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
}

TensorBlob read_tensor_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open tensor file '" + path.string() + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_tensor(bytes, path.string());
}

}  // namespace generec
