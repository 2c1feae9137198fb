#pragma once

#include "generec/types.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace testutil {

using generec::Vector;

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, double lo = 0.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

inline Vector gaussian_vector(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

inline std::vector<Vector> random_frames(std::mt19937_64& rng, std::size_t n, std::size_t dim)
{
    std::vector<Vector> frames;
    for (std::size_t i = 0; i < n; ++i) frames.push_back(random_vector(rng, dim));
    return frames;
}

inline Vector one_hot(std::size_t n, std::size_t i)
{
    Vector v(n, 0.0);
    v[i] = 1.0;
    return v;
}

inline generec::Item make_item(std::string id, std::vector<Vector> frames, std::size_t thumb = 0)
{
    generec::Item item;
    item.id = std::move(id);
    item.frames = std::move(frames);
    item.thumbnail_index = thumb;
    return item;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("generec_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testutil
