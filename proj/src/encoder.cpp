#include "generec/encoder.hpp"

#include "generec/error.hpp"

#include <cmath>
#include <random>

namespace generec {

Encoder Encoder::identity(std::size_t input_dim)
{
    if (input_dim == 0) throw Error(ErrorCode::config, "encoder input dimension must be positive");
    Encoder e;
    e.kind_ = Kind::identity_flatten;
    e.input_dim_ = input_dim;
    e.output_dim_ = input_dim;
    return e;
}

Encoder Encoder::random_projection(std::size_t input_dim, std::uint64_t seed, std::size_t output_dim)
{
    if (input_dim == 0 || output_dim == 0) throw Error(ErrorCode::config, "encoder dimensions must be positive");
    Encoder e;
    e.kind_ = Kind::random_projection;
    e.input_dim_ = input_dim;
    e.output_dim_ = output_dim;
    e.seed_ = seed;
    e.matrix_.resize(input_dim * output_dim);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(double(output_dim));
    for (double& w : e.matrix_) w = normal(rng) * scale;
    return e;
}

Vector Encoder::encode(std::span<const double> frame) const
{
    if (frame.size() != input_dim_)
        throw Error(ErrorCode::dimension_mismatch, "encoder expects dimension " + std::to_string(input_dim_) +
                                                       ", got " + std::to_string(frame.size()));
    if (kind_ == Kind::identity_flatten) return Vector(frame.begin(), frame.end());

    Vector out(output_dim_, 0.0);
    for (std::size_t r = 0; r < output_dim_; ++r) {
        const double* row = matrix_.data() + r * input_dim_;
        double s = 0.0;
        for (std::size_t c = 0; c < input_dim_; ++c) s += row[c] * frame[c];
        out[r] = s;
    }
    return out;
}

Vector Encoder::to_frame_space(std::span<const double> embedding) const
{
    if (embedding.size() != output_dim_)
        throw Error(ErrorCode::dimension_mismatch, "embedding has dimension " + std::to_string(embedding.size()) +
                                                       ", encoder output is " + std::to_string(output_dim_));
    if (kind_ == Kind::identity_flatten) return Vector(embedding.begin(), embedding.end());

    Vector out(input_dim_, 0.0);
    for (std::size_t r = 0; r < output_dim_; ++r) {
        const double* row = matrix_.data() + r * input_dim_;
        for (std::size_t c = 0; c < input_dim_; ++c) out[c] += row[c] * embedding[r];
    }
    return out;
}

}  // namespace generec
