#pragma once

#include "generec/encoder.hpp"
#include "generec/instructor.hpp"
#include "generec/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace generec {

struct CreationConfig {
    std::size_t num_frames = 16;
    std::size_t steps = 10;
    double blend = 0.3;
    double noise_scale = 0.2;  // sigma_0
    double noise_decay = 0.6;  // gamma, in (0,1)
    std::uint64_t seed = 0;

    void validate() const;
};

/// Reference creator. Frame 0 starts from seeded uniform noise and iterates
///   x <- (1 - blend) x + blend * g + decay^k * noise_scale * eps_k
/// for `steps` steps, clamping pixel content each step. Later frames start
/// from the previous frame's final state plus noise of scale
/// noise_scale * decay^steps. Thumbnail = best frame against the guidance.
/// A guidance style, if any, is applied afterwards.
///
/// If `frame0_trace` is given it receives x^0 .. x^steps of frame 0.
Item create(const GuidanceSignal& guidance, const CreationConfig& config, const Encoder& encoder,
            const ContentSpace& space, const std::string& id, std::vector<Vector>* frame0_trace = nullptr);

}  // namespace generec
