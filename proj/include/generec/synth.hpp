#pragma once

#include "generec/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace generec {

/// Planted-cluster corpus. Each cluster has a colour/stripe template; items
/// are sequences of frame segments drawn from their own cluster and others;
/// users like items with P = sigmoid(like_slope * cos(p_u, q_i) + like_offset),
/// the cosine taken on mid-grey-centred prototypes.
struct SynthConfig {
    std::size_t clusters = 4;
    std::size_t users_per_cluster = 10;
    std::size_t items_per_cluster = 30;
    std::size_t frames_per_item = 16;
    std::uint32_t width = 16;
    std::uint32_t height = 16;
    std::size_t segment_length = 4;
    double primary_share = 0.5;       // chance a segment shows the item's own cluster
    std::size_t exposures_per_user = 48;
    double like_slope = 10.0;
    double like_offset = -5.0;
    double item_noise = 0.05;
    double user_noise = 0.05;
    double frame_noise = 0.03;
    std::uint64_t seed = 7;

    void validate() const;
};

struct SynthResult {
    Corpus corpus;
    std::vector<Vector> cluster_templates;
    std::map<std::string, std::size_t> item_cluster;
    std::map<std::string, std::size_t> user_cluster;
    std::map<std::string, Vector> item_prototypes;
    std::map<std::string, Vector> user_prototypes;
};

SynthResult synthesize(const SynthConfig& config);

/// Cosine of two prototypes after centring at mid-grey (the like-model input).
double centred_cosine(const Vector& a, const Vector& b);

double sigmoid(double x);

}  // namespace generec
