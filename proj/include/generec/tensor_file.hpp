#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace generec {

// GRTF container, little-endian:
//   "GRTF" | u8 version=1 | u8 flags | u16 reserved=0 |
//   u32 num_frames | u32 dim | u32 width | u32 height | num_frames*dim f32
inline constexpr std::uint8_t kTensorVersion = 1;
inline constexpr std::uint8_t kFlagPixel = 0x01;
inline constexpr std::uint8_t kFlagScorerBlob = 0x02;
inline constexpr std::size_t kTensorHeaderSize = 24;

struct TensorHeader {
    std::uint8_t version = kTensorVersion;
    std::uint8_t flags = 0;
    std::uint32_t num_frames = 0;
    std::uint32_t dim = 0;
    std::uint32_t width = 0;
    std::uint32_t height = 0;

    bool operator==(const TensorHeader&) const = default;
};

struct TensorBlob {
    TensorHeader header;
    std::vector<float> values;  // num_frames * dim, row-major
};

std::vector<std::uint8_t> encode_tensor(const TensorHeader& header, std::span<const float> values);

/// Validates magic, version, reserved bits and length. `source` names the
/// origin in error messages.
TensorBlob decode_tensor(std::span<const std::uint8_t> bytes, const std::string& source);

void write_tensor_file(const std::filesystem::path& path, const TensorHeader& header, std::span<const float> values);
TensorBlob read_tensor_file(const std::filesystem::path& path);

}  // namespace generec
