#include "generec/error.hpp"
#include "generec/evaluation.hpp"
#include "generec/tensor_file.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

namespace generec {

double cosine_at_k(std::span<const Vector> thumbs, std::span<const Vector> history, const Encoder& encoder,
                   CosineMode mode)
{
    if (thumbs.empty() || history.empty())
        throw Error(ErrorCode::insufficient_data, "cosine_at_k needs K >= 1 and M >= 1");

    std::vector<Vector> hist;
    hist.reserve(history.size());
    for (const auto& h : history) hist.push_back(encoder.encode(h));

    if (mode == CosineMode::to_mean) {
        const Vector centre = mean_of(hist);
        double sum = 0.0;
        for (const auto& t : thumbs) sum += cosine(encoder.encode(t), centre);
        return sum / double(thumbs.size());
    }

    double sum = 0.0;
    for (const auto& t : thumbs) {
        const Vector e = encoder.encode(t);
        for (const auto& h : hist) sum += cosine(e, h);
    }
    return sum / double(thumbs.size() * hist.size());
}

PreferenceScorer::PreferenceScorer(std::vector<std::string> users, std::size_t latent_dim, std::size_t feature_dim)
    : users_(std::move(users)), latent_dim_(latent_dim), feature_dim_(feature_dim),
      user_embeddings_(users_.size() * latent_dim, 0.0), interaction_(latent_dim * feature_dim, 0.0)
{
    for (std::size_t i = 0; i < users_.size(); ++i)
        if (!index_.emplace(users_[i], i).second) throw Error(ErrorCode::invalid_data, "duplicate scorer user '" + users_[i] + "'");
}

std::optional<std::size_t> PreferenceScorer::user_index(std::string_view user) const
{
    auto it = index_.find(user);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t PreferenceScorer::require_user(std::string_view user) const
{
    auto idx = user_index(user);
    if (!idx) throw Error(ErrorCode::unknown_user, "scorer has no user '" + std::string(user) + "'");
    return *idx;
}

std::span<const double> PreferenceScorer::user_embedding(std::size_t user) const
{
    return {user_embeddings_.data() + user * latent_dim_, latent_dim_};
}

double PreferenceScorer::score(std::size_t user, std::span<const double> feature) const
{
    if (feature.size() != feature_dim_) throw Error(ErrorCode::dimension_mismatch, "scorer feature dimension");
    const auto u = user_embedding(user);
    double s = 0.0;
    for (std::size_t r = 0; r < latent_dim_; ++r) {
        const double* row = interaction_.data() + r * feature_dim_;
        double we = 0.0;
        for (std::size_t c = 0; c < feature_dim_; ++c) we += row[c] * feature[c];
        s += u[r] * we;
    }
    return s + bias_;
}

double PreferenceScorer::score(std::string_view user, std::span<const double> feature) const
{
    return score(require_user(user), feature);
}

Vector PreferenceScorer::preference_direction(std::string_view user) const
{
    const auto u = user_embedding(require_user(user));
    Vector dir(feature_dim_, 0.0);
    for (std::size_t r = 0; r < latent_dim_; ++r) {
        const double* row = interaction_.data() + r * feature_dim_;
        for (std::size_t c = 0; c < feature_dim_; ++c) dir[c] += u[r] * row[c];
    }
    return dir;
}

std::vector<double> PreferenceScorer::score_many(std::string_view user, std::span<const Vector> features) const
{
    const Vector dir = preference_direction(user);
    std::vector<double> out;
    out.reserve(features.size());
    for (const auto& f : features) out.push_back(dot(dir, f) + bias_);
    return out;
}

PreferenceScorer train_scorer(const Corpus& corpus, const Encoder& encoder, const ScorerConfig& config,
                              const EpochCallback& on_epoch)
{
    if (config.latent_dim == 0) throw Error(ErrorCode::config, "scorer latent dimension must be positive");
    if (!(config.learning_rate > 0.0)) throw Error(ErrorCode::config, "scorer learning rate must be positive");

    std::vector<std::string> item_ids;
    std::map<std::string, std::size_t, std::less<>> item_index;
    std::vector<Vector> features;
    for (const auto& [id, item] : corpus.items) {
        item_index.emplace(id, item_ids.size());
        item_ids.push_back(id);
        features.push_back(encoder.encode(item.thumbnail()));
    }
    if (item_ids.size() < 2) throw Error(ErrorCode::insufficient_data, "scorer training needs at least two items");

    std::vector<std::string> users;
    std::vector<std::set<std::size_t>> liked;
    for (const auto& [uid, user] : corpus.users) {
        std::set<std::size_t> likes;
        for (const auto& in : user.interactions)
            if (in.signal == Signal::like) likes.insert(item_index.at(in.item_id));
        if (likes.empty() || likes.size() == item_ids.size()) continue;
        users.push_back(uid);
        liked.push_back(std::move(likes));
    }
    if (users.empty()) throw Error(ErrorCode::insufficient_data, "no user has a trainable like history");

    PreferenceScorer scorer(users, config.latent_dim, encoder.output_dim());
    scorer.config = config;

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, config.init_scale);
    for (double& x : scorer.user_matrix()) x = normal(rng);
    // W starts at zero so an untrained scorer ranks every item equally.

    std::vector<std::pair<std::size_t, std::size_t>> positives;
    for (std::size_t u = 0; u < users.size(); ++u)
        for (std::size_t i : liked[u]) positives.emplace_back(u, i);

    const std::size_t ds = config.latent_dim;
    const std::size_t d = encoder.output_dim();
    auto& U = scorer.user_matrix();
    auto& W = scorer.interaction_matrix();
    std::uniform_int_distribution<std::size_t> pick_item(0, item_ids.size() - 1);
    Vector delta(d), w_delta(ds), u_old(ds);
    const double lr = config.learning_rate;
    const double decay = 1.0 - lr * config.l2;

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(positives.begin(), positives.end(), rng);
        for (const auto& [u, i] : positives) {
            std::size_t j = pick_item(rng);
            while (liked[u].count(j)) j = pick_item(rng);

            for (std::size_t c = 0; c < d; ++c) delta[c] = features[i][c] - features[j][c];
            double* urow = U.data() + u * ds;
            double x = 0.0;
            for (std::size_t r = 0; r < ds; ++r) {
                const double* wrow = W.data() + r * d;
                double s = 0.0;
                for (std::size_t c = 0; c < d; ++c) s += wrow[c] * delta[c];
                w_delta[r] = s;
                x += urow[r] * s;
            }
            // d/dx ln sigmoid(x) = sigmoid(-x)
            const double g = 1.0 / (1.0 + std::exp(x));
            std::copy(urow, urow + ds, u_old.begin());
            for (std::size_t r = 0; r < ds; ++r) urow[r] = decay * urow[r] + lr * g * w_delta[r];
            for (std::size_t r = 0; r < ds; ++r) {
                double* wrow = W.data() + r * d;
                const double step = lr * g * u_old[r];
                for (std::size_t c = 0; c < d; ++c) wrow[c] = decay * wrow[c] + step * delta[c];
            }
        }
        scorer.epochs_trained = epoch;
        if (on_epoch) on_epoch(epoch, scorer);
    }
    return scorer;
}

LikeHoldout split_likes(const Corpus& corpus, double fraction)
{
    if (!(fraction > 0.0 && fraction < 1.0)) throw Error(ErrorCode::config, "holdout fraction must be in (0,1)");
    LikeHoldout out;
    out.train = corpus;
    for (auto& [uid, user] : out.train.users) {
        std::vector<std::size_t> like_pos;
        for (std::size_t k = 0; k < user.interactions.size(); ++k)
            if (user.interactions[k].signal == Signal::like) like_pos.push_back(k);
        if (like_pos.size() < 2) continue;
        const auto n_test = std::max<std::size_t>(1, std::size_t(std::floor(fraction * double(like_pos.size()))));
        std::set<std::size_t> drop(like_pos.end() - std::ptrdiff_t(n_test), like_pos.end());
        std::vector<Interaction> kept;
        auto& test = out.held_out[uid];
        for (std::size_t k = 0; k < user.interactions.size(); ++k) {
            if (drop.count(k))
                test.push_back(user.interactions[k].item_id);
            else
                kept.push_back(user.interactions[k]);
        }
        user.interactions = std::move(kept);
        user.user_rep.reset();
    }
    return out;
}

double pairwise_auc(const PreferenceScorer& scorer, const Encoder& encoder, const Corpus& full,
                    const std::map<std::string, std::vector<std::string>>& positives)
{
    std::map<std::string, double, std::less<>> item_score;
    double total = 0.0;
    std::size_t users = 0;
    for (const auto& [uid, pos_ids] : positives) {
        const auto uidx = scorer.user_index(uid);
        const UserProfile* profile = full.find_user(uid);
        if (!uidx || !profile || pos_ids.empty()) continue;

        std::set<std::string, std::less<>> ever_liked;
        for (const auto& in : profile->interactions)
            if (in.signal == Signal::like) ever_liked.insert(in.item_id);

        std::vector<double> pos, neg;
        for (const auto& [id, item] : full.items) {
            const double s = scorer.score(*uidx, encoder.encode(item.thumbnail()));
            if (std::find(pos_ids.begin(), pos_ids.end(), id) != pos_ids.end())
                pos.push_back(s);
            else if (!ever_liked.count(id))
                neg.push_back(s);
        }
        if (pos.empty() || neg.empty()) continue;
        double wins = 0.0;
        for (double p : pos)
            for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
        total += wins / double(pos.size() * neg.size());
        ++users;
    }
    if (users == 0) throw Error(ErrorCode::insufficient_data, "no user with both positives and negatives for AUC");
    return total / double(users);
}

double ps_at_k(const PreferenceScorer& scorer, std::string_view user, std::span<const Item* const> items,
               const Encoder& encoder)
{
    if (items.empty()) throw Error(ErrorCode::insufficient_data, "ps_at_k needs K >= 1");
    std::vector<Vector> features;
    features.reserve(items.size());
    for (const Item* item : items) features.push_back(encoder.encode(item->thumbnail()));
    const auto scores = scorer.score_many(user, features);
    double sum = 0.0;
    for (double s : scores) sum += s;
    return sum / double(scores.size());
}

void save_scorer(const PreferenceScorer& scorer, const Encoder& encoder, const std::filesystem::path& prefix)
{
    const std::size_t ds = scorer.latent_dim();
    const std::size_t d = scorer.feature_dim();
    std::vector<float> values;
    values.reserve(scorer.user_matrix().size() + scorer.interaction_matrix().size() + 1);
    for (double x : scorer.user_matrix()) values.push_back(float(x));
    for (double x : scorer.interaction_matrix()) values.push_back(float(x));
    values.push_back(float(scorer.bias()));

    TensorHeader h;
    h.flags = kFlagScorerBlob;
    h.num_frames = 1;
    h.dim = std::uint32_t(values.size());
    h.width = std::uint32_t(ds);
    h.height = std::uint32_t(d);
    auto blob_path = prefix;
    blob_path += ".grtf";
    write_tensor_file(blob_path, h, values);

    nlohmann::json meta = {
        {"d_s", ds},
        {"d", d},
        {"seed", scorer.config.seed},
        {"epochs", scorer.epochs_trained},
        {"learning_rate", scorer.config.learning_rate},
        {"l2", scorer.config.l2},
        {"users", scorer.users()},
        {"encoder",
         {{"kind", encoder.kind() == Encoder::Kind::identity_flatten ? "identity_flatten" : "random_projection"},
          {"seed", encoder.seed()},
          {"d", encoder.output_dim()}}},
    };
    auto meta_path = prefix;
    meta_path += ".json";
    std::ofstream out(meta_path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + meta_path.string() + "'");
    out << meta.dump(2) << '\n';
}

PreferenceScorer load_scorer(const std::filesystem::path& prefix)
{
    auto meta_path = prefix;
    meta_path += ".json";
    std::ifstream in(meta_path);
    if (!in) throw Error(ErrorCode::io, "cannot open scorer metadata '" + meta_path.string() + "'");
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_data, "malformed scorer metadata: " + std::string(e.what()));
    }

    auto blob_path = prefix;
    blob_path += ".grtf";
    const auto blob = read_tensor_file(blob_path);
    if (!(blob.header.flags & kFlagScorerBlob))
        throw Error(ErrorCode::invalid_data, blob_path.string() + ": not a scorer blob");

    const auto ds = meta.at("d_s").get<std::size_t>();
    const auto d = meta.at("d").get<std::size_t>();
    auto users = meta.at("users").get<std::vector<std::string>>();
    if (blob.header.width != ds || blob.header.height != d ||
        blob.values.size() != users.size() * ds + ds * d + 1)
        throw Error(ErrorCode::invalid_data, blob_path.string() + ": scorer blob shape disagrees with metadata");

    PreferenceScorer scorer(std::move(users), ds, d);
    auto it = blob.values.begin();
    for (double& x : scorer.user_matrix()) x = *it++;
    for (double& x : scorer.interaction_matrix()) x = *it++;
    scorer.set_bias(*it);
    scorer.config.latent_dim = ds;
    scorer.config.seed = meta.value("seed", std::uint64_t(0));
    scorer.config.learning_rate = meta.value("learning_rate", scorer.config.learning_rate);
    scorer.config.l2 = meta.value("l2", scorer.config.l2);
    scorer.epochs_trained = meta.value("epochs", std::size_t(0));
    scorer.config.epochs = scorer.epochs_trained;
    return scorer;
}

}  // namespace generec
