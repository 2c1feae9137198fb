#pragma once

#include "generec/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace generec {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

struct WatermarkKey {
    std::uint64_t key = 0;
    double strength = 0.05;  // alpha
    double threshold = 0.5;  // tau

    void validate() const;
};

/// Chip sequence for one frame: s_i = +1 iff the high bit of the i-th output
/// of splitmix64(key ^ frame_index) is 0, else -1.
std::vector<int> watermark_chips(std::uint64_t key, std::uint64_t frame_index, std::size_t dim);

/// y = x + alpha * s per frame; clamped for pixel content. Throws AlreadyWatermarked.
Item watermark_embed(const Item& item, const WatermarkKey& key, const ContentSpace& space);

/// Subtracts the mark again (exact unless embedding clipped). Unmarked items are returned unchanged.
/// Editors strip the mark first: a transformed old mark can cancel the new one.
Item watermark_remove(const Item& item, const WatermarkKey& key, const ContentSpace& space);

struct WatermarkDetection {
    std::vector<double> per_frame;  // c = (1/(D alpha)) sum y_i s_i
    double statistic = 0.0;         // mean over frames
    bool detected = false;          // statistic >= tau
};

WatermarkDetection watermark_detect(const Item& item, const WatermarkKey& key);

struct CheckResult {
    std::string check;
    bool pass = true;
    std::string reason;

    bool operator==(const CheckResult&) const = default;
};

struct CheckReport {
    std::vector<CheckResult> results;

    bool pass() const;
    const CheckResult* find(std::string_view check) const;
    std::string to_json() const;

    bool operator==(const CheckReport&) const = default;
};

using CheckPredicate = std::function<CheckResult(const Item&)>;

struct CheckConfig {
    /// When set, WatermarkPresent also requires detection under this key.
    std::optional<WatermarkKey> key;
};

/// Runs Finiteness, ValueRange, WatermarkPresent, QualityGate (batch-level;
/// reported as skipped for single items) and the registered policy
/// predicates, in registration order.
class FidelityChecker {
public:
    /// Registers Bias, Privacy, Safety, Authenticity and Legal as always-pass stubs.
    FidelityChecker();

    /// Replaces a predicate of the same name, else appends.
    void register_predicate(const std::string& name, CheckPredicate predicate);

    CheckReport run(const Item& item, const ContentSpace& space, const CheckConfig& config) const;

    /// Batch variant; QualityGate compares FVD(reference, items) against `fvd_bound`.
    std::vector<CheckReport> run_batch(std::span<const Item> items, std::span<const Item> reference,
                                       double fvd_bound, const ContentSpace& space, const CheckConfig& config) const;

private:
    std::vector<std::pair<std::string, CheckPredicate>> predicates_;
};

CheckReport run_checks(const Item& item, const ContentSpace& space, const CheckConfig& config = {});

}  // namespace generec
