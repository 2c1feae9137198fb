#pragma once

#include "generec/creator.hpp"
#include "generec/encoder.hpp"
#include "generec/evaluation.hpp"
#include "generec/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace generec {

enum class ExperimentKind { thumbnail, clip, revise, create };

ExperimentKind experiment_kind_from_string(std::string_view s);
const char* to_string(ExperimentKind kind) noexcept;

struct ExperimentConfig {
    std::size_t runs = 10;
    std::vector<std::size_t> ks = {5, 10};
    std::uint64_t seed = 2023;
    std::size_t clip_length = 8;
    std::size_t clip_stride = 0;  // 0 = non-overlapping
    double blend = 0.3;
    CreationConfig creation;
    std::size_t fvd_dim = 16;     // FVD features use a random projection of this size
    std::uint64_t fvd_seed = 99;
    CosineMode cosine_mode = CosineMode::pairwise;
};

struct ArmMetrics {
    std::string arm;
    std::map<std::size_t, std::vector<double>> cosine;  // K -> per-run value
    std::map<std::size_t, std::vector<double>> ps;
    std::vector<double> fvd;                            // per run; empty when not applicable

    double mean_cosine(std::size_t k) const;
    double mean_ps(std::size_t k) const;
    std::optional<double> mean_fvd() const;
};

struct ExperimentReport {
    ExperimentKind kind = ExperimentKind::thumbnail;
    ExperimentConfig config;
    std::size_t users = 0;
    std::vector<ArmMetrics> arms;

    const ArmMetrics& arm(std::string_view name) const;
    std::string to_tsv() const;
    std::string to_json() const;
};

/// Runs every arm of the experiment `config.runs` times. Candidate items
/// (K random non-interacted items per user) are shared across arms within a
/// run. Users need at least one like and must be known to the scorer.
/// Throws MissingScorer when `scorer` is null. Never modifies `corpus`.
ExperimentReport run_experiment(ExperimentKind kind, const Corpus& corpus, const PreferenceScorer* scorer,
                                const Encoder& encoder, const ExperimentConfig& config);

/// Encoder-space preference built from the scorer's learned user embedding:
/// centre + radius * unit(W^T U_u).
Vector embedding_preference(const PreferenceScorer& scorer, std::string_view user, const Vector& centre, double radius);

/// Mean encoded thumbnail and mean distance of thumbnails from it.
std::pair<Vector, double> thumbnail_spread(const Corpus& corpus, const Encoder& encoder);

}  // namespace generec
