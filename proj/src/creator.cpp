#include "generec/creator.hpp"

#include "generec/editor.hpp"
#include "generec/error.hpp"

#include <cmath>
#include <random>

namespace generec {

void CreationConfig::validate() const
{
    if (num_frames == 0 || steps == 0) throw Error(ErrorCode::config, "creation needs num_frames and steps >= 1");
    if (!(blend > 0.0 && blend <= 1.0)) throw Error(ErrorCode::config, "creation blend must be in (0,1]");
    if (noise_scale < 0.0) throw Error(ErrorCode::config, "creation noise scale must be non-negative");
    if (!(noise_decay > 0.0 && noise_decay < 1.0)) throw Error(ErrorCode::config, "creation noise decay must be in (0,1)");
}

Item create(const GuidanceSignal& guidance, const CreationConfig& config, const Encoder& encoder,
            const ContentSpace& space, const std::string& id, std::vector<Vector>* frame0_trace)
{
    if (guidance.mode != GuidanceSignal::Mode::create) throw Error(ErrorCode::invalid_data, "create: guidance mode is not create");
    config.validate();

    const Vector target = frame_space_target(guidance.preference, encoder, space);
    const std::size_t dim = space.dim;

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    Item item;
    item.id = id;
    item.provenance = Provenance::ai_created;
    item.frames.reserve(config.num_frames);

    Vector x(dim);
    for (double& v : x) v = uniform(rng);
    if (frame0_trace) {
        frame0_trace->clear();
        frame0_trace->push_back(x);
    }

    const double carry_noise = config.noise_scale * std::pow(config.noise_decay, double(config.steps));
    for (std::size_t t = 0; t < config.num_frames; ++t) {
        if (t > 0) {
            for (double& v : x) v += carry_noise * normal(rng);
            if (space.pixel) clamp_unit(x);
        }
        double scale = config.noise_scale;
        for (std::size_t k = 0; k < config.steps; ++k) {
            for (std::size_t i = 0; i < dim; ++i) {
                const double eps = scale != 0.0 ? normal(rng) : 0.0;
                x[i] = (1.0 - config.blend) * x[i] + config.blend * target[i] + scale * eps;
            }
            if (space.pixel) clamp_unit(x);
            if (frame0_trace && t == 0) frame0_trace->push_back(x);
            scale *= config.noise_decay;
        }
        item.frames.push_back(x);
    }

    item.thumbnail_index = select_thumbnail(item.frames, guidance.preference, encoder);

    if (guidance.style) {
        item = style_transfer(item, *guidance.style, space);
        item.id = id;
        item.provenance = Provenance::ai_created;
        item.parent_id.reset();
    }
    return item;
}

}  // namespace generec
