#pragma once

#include "generec/types.hpp"

#include <cstdint>
#include <span>

namespace generec {

/// Deterministic frame encoder. identity_flatten passes frames through;
/// random_projection multiplies by a fixed seeded Gaussian matrix scaled by 1/sqrt(d).
class Encoder {
public:
    enum class Kind { identity_flatten, random_projection };

    static Encoder identity(std::size_t input_dim);
    static Encoder random_projection(std::size_t input_dim, std::uint64_t seed, std::size_t output_dim);

    Kind kind() const noexcept { return kind_; }
    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t output_dim() const noexcept { return output_dim_; }
    std::uint64_t seed() const noexcept { return seed_; }

    Vector encode(std::span<const double> frame) const;

    /// Maps an embedding back to frame space. Exact for identity; the
    /// transpose for random_projection (approximate inverse only).
    Vector to_frame_space(std::span<const double> embedding) const;

    /// Row-major output_dim x input_dim; empty for identity.
    const std::vector<double>& matrix() const noexcept { return matrix_; }

private:
    Kind kind_ = Kind::identity_flatten;
    std::size_t input_dim_ = 0;
    std::size_t output_dim_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<double> matrix_;
};

}  // namespace generec
