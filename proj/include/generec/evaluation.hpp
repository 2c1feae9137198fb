#pragma once

#include "generec/encoder.hpp"
#include "generec/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace generec {

// ---------------------------------------------------------------------------
// Cosine@K
// ---------------------------------------------------------------------------

enum class CosineMode {
    pairwise,  // mean over all K*M (thumb, history) pairs
    to_mean,   // mean over K of cosine to the mean history embedding
};

/// Throws ZeroNormEmbedding if any embedding has zero norm.
double cosine_at_k(std::span<const Vector> thumbs, std::span<const Vector> history, const Encoder& encoder,
                   CosineMode mode = CosineMode::pairwise);

// ---------------------------------------------------------------------------
// Preference scorer: score(u, e) = U_u^T W e + b, trained with BPR.
// ---------------------------------------------------------------------------

struct ScorerConfig {
    std::size_t latent_dim = 32;
    double learning_rate = 0.05;
    std::size_t epochs = 50;
    double l2 = 1e-4;
    double init_scale = 0.1;
    std::uint64_t seed = 1;
    bool operator==(const ScorerConfig&) const = default;
};

class PreferenceScorer {
public:
    PreferenceScorer() = default;
    PreferenceScorer(std::vector<std::string> users, std::size_t latent_dim, std::size_t feature_dim);

    std::size_t latent_dim() const noexcept { return latent_dim_; }
    std::size_t feature_dim() const noexcept { return feature_dim_; }
    const std::vector<std::string>& users() const noexcept { return users_; }
    std::optional<std::size_t> user_index(std::string_view user) const;
    bool knows(std::string_view user) const { return user_index(user).has_value(); }

    double score(std::string_view user, std::span<const double> feature) const;
    double score(std::size_t user, std::span<const double> feature) const;

    /// Scores many features at once through the precomputed W^T U_u.
    std::vector<double> score_many(std::string_view user, std::span<const Vector> features) const;

    /// W^T U_u: the feature-space direction that raises the user's score.
    Vector preference_direction(std::string_view user) const;
    std::span<const double> user_embedding(std::size_t user) const;

    std::vector<double>& user_matrix() noexcept { return user_embeddings_; }
    std::vector<double>& interaction_matrix() noexcept { return interaction_; }
    const std::vector<double>& user_matrix() const noexcept { return user_embeddings_; }
    const std::vector<double>& interaction_matrix() const noexcept { return interaction_; }
    double bias() const noexcept { return bias_; }
    void set_bias(double b) noexcept { bias_ = b; }

    ScorerConfig config;
    std::size_t epochs_trained = 0;

    bool operator==(const PreferenceScorer&) const = default;

private:
    std::size_t require_user(std::string_view user) const;

    std::vector<std::string> users_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::size_t latent_dim_ = 0;
    std::size_t feature_dim_ = 0;
    std::vector<double> user_embeddings_;  // users x latent_dim
    std::vector<double> interaction_;      // latent_dim x feature_dim
    double bias_ = 0.0;
};

/// Called after each epoch (1-based) during training.
using EpochCallback = std::function<void(std::size_t epoch, const PreferenceScorer&)>;

/// Users with at least one like are trained; negatives are sampled uniformly
/// from items the user has not liked. Throws InsufficientData when nothing
/// can be trained.
PreferenceScorer train_scorer(const Corpus& corpus, const Encoder& encoder, const ScorerConfig& config,
                              const EpochCallback& on_epoch = {});

/// Held-out likes per user (the most recent `fraction` of each user's likes,
/// users with >= 2 likes only) and a training corpus without them.
struct LikeHoldout {
    Corpus train;
    std::map<std::string, std::vector<std::string>> held_out;
};
LikeHoldout split_likes(const Corpus& corpus, double fraction);

/// Mean per-user AUC over every (positive, negative) pair; negatives are
/// items the user never liked in `full`. Ties count one half.
double pairwise_auc(const PreferenceScorer& scorer, const Encoder& encoder, const Corpus& full,
                    const std::map<std::string, std::vector<std::string>>& positives);

/// Mean score of the user against the encoded thumbnails of `items`.
double ps_at_k(const PreferenceScorer& scorer, std::string_view user, std::span<const Item* const> items,
               const Encoder& encoder);

void save_scorer(const PreferenceScorer& scorer, const Encoder& encoder, const std::filesystem::path& prefix);
PreferenceScorer load_scorer(const std::filesystem::path& prefix);

// ---------------------------------------------------------------------------
// FVD
// ---------------------------------------------------------------------------

/// Video feature: [mean frame embedding, mean first-difference embedding].
class FvdEncoder {
public:
    explicit FvdEncoder(Encoder frame_encoder) : encoder_(std::move(frame_encoder)) {}

    std::size_t dim() const noexcept { return 2 * encoder_.output_dim(); }
    Vector features(const Item& item) const;

private:
    Encoder encoder_;
};

struct GaussianStats {
    Vector mean;
    std::vector<double> covariance;  // row-major dim x dim
    std::size_t count = 0;

    std::size_t dim() const noexcept { return mean.size(); }
};

/// Sample mean and (n-1)-normalized covariance. Throws TooFewSamples for n < 2.
GaussianStats gaussian_stats(std::span<const Vector> samples);

/// |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a S_b)^{1/2}), with the cross term
/// taken as Tr sqrt(S_a^{1/2} S_b S_a^{1/2}); clamped at 0.
double frechet_distance(const GaussianStats& a, const GaussianStats& b);

double fvd(std::span<const Item> real, std::span<const Item> generated, const FvdEncoder& encoder);

/// True when n is below the recommended d_f / 4 samples.
bool fvd_low_sample_warning(std::size_t samples, std::size_t feature_dim);

}  // namespace generec
