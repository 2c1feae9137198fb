#pragma once

#include "generec/encoder.hpp"
#include "generec/evaluation.hpp"
#include "generec/experiment.hpp"
#include "generec/orchestrator.hpp"
#include "generec/synth.hpp"

#include <optional>
#include <string_view>

namespace generec {

// One JSON document configures every command:
//   { "synth": {...}, "encoder": {...}, "scorer": {...}, "experiment": {...},
//     "creation": {...}, "loop": {...} }
// Unknown keys are rejected with ErrorCode::config.

struct EncoderConfig {
    Encoder::Kind kind = Encoder::Kind::identity_flatten;
    std::uint64_t seed = 7;
    std::size_t dim = 64;

    Encoder build(std::size_t input_dim) const;
};

struct TrainConfig {
    ScorerConfig scorer;
    double holdout_fraction = 0.2;
};

struct AppConfig {
    SynthConfig synth;
    EncoderConfig encoder;
    TrainConfig train;
    ExperimentConfig experiment;
    LoopConfig loop;
};

/// Empty text yields defaults. `seed`, when given, overrides every seed.
AppConfig parse_config(std::string_view json_text, std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace generec
