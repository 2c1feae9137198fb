#include "generec/fidelity.hpp"

#include "generec/error.hpp"
#include "generec/evaluation.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace generec {

void WatermarkKey::validate() const
{
    if (!(strength > 0.0)) throw Error(ErrorCode::config, "watermark strength must be positive");
    if (!(threshold > 0.0 && threshold < 1.0)) throw Error(ErrorCode::config, "watermark threshold must be in (0,1)");
}

std::vector<int> watermark_chips(std::uint64_t key, std::uint64_t frame_index, std::size_t dim)
{
    SplitMix64 gen(key ^ frame_index);
    std::vector<int> chips(dim);
    for (auto& s : chips) s = (gen.next() >> 63) == 0 ? 1 : -1;
    return chips;
}

Item watermark_embed(const Item& item, const WatermarkKey& key, const ContentSpace& space)
{
    key.validate();
    if (item.watermarked) throw Error(ErrorCode::already_watermarked, "item '" + item.id + "' is already watermarked");
    Item out = item;
    for (std::size_t f = 0; f < out.frames.size(); ++f) {
        auto& frame = out.frames[f];
        const auto chips = watermark_chips(key.key, f, frame.size());
        for (std::size_t i = 0; i < frame.size(); ++i) frame[i] += key.strength * chips[i];
        if (space.pixel) clamp_unit(frame);
    }
    out.watermarked = true;
    return out;
}

Item watermark_remove(const Item& item, const WatermarkKey& key, const ContentSpace& space)
{
    key.validate();
    if (!item.watermarked) return item;
    Item out = item;
    for (std::size_t f = 0; f < out.frames.size(); ++f) {
        auto& frame = out.frames[f];
        const auto chips = watermark_chips(key.key, f, frame.size());
        for (std::size_t i = 0; i < frame.size(); ++i) frame[i] -= key.strength * chips[i];
        if (space.pixel) clamp_unit(frame);
    }
    out.watermarked = false;
    return out;
}

WatermarkDetection watermark_detect(const Item& item, const WatermarkKey& key)
{
    key.validate();
    WatermarkDetection d;
    d.per_frame.reserve(item.frames.size());
    for (std::size_t f = 0; f < item.frames.size(); ++f) {
        const auto& frame = item.frames[f];
        if (frame.empty()) {
            d.per_frame.push_back(0.0);
            continue;
        }
        const auto chips = watermark_chips(key.key, f, frame.size());
        // Extended accumulator: on an exact mark the sum equals D * alpha bit for bit.
        long double s = 0.0L;
        for (std::size_t i = 0; i < frame.size(); ++i) s += frame[i] * chips[i];
        d.per_frame.push_back(double(s) / (double(frame.size()) * key.strength));
    }
    if (!d.per_frame.empty()) {
        double sum = 0.0;
        for (double c : d.per_frame) sum += c;
        d.statistic = sum / double(d.per_frame.size());
    }
    d.detected = d.statistic >= key.threshold;
    return d;
}

bool CheckReport::pass() const
{
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

const CheckResult* CheckReport::find(std::string_view check) const
{
    for (const auto& r : results)
        if (r.check == check) return &r;
    return nullptr;
}

std::string CheckReport::to_json() const
{
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& r : results) checks.push_back({{"check", r.check}, {"pass", r.pass}, {"reason", r.reason}});
    return nlohmann::json{{"pass", pass()}, {"checks", std::move(checks)}}.dump();
}

namespace {

CheckResult check_finite(const Item& item)
{
    for (std::size_t f = 0; f < item.frames.size(); ++f)
        for (std::size_t i = 0; i < item.frames[f].size(); ++i)
            if (!std::isfinite(item.frames[f][i]))
                return {"Finiteness", false,
                        "non-finite value in frame " + std::to_string(f) + " at index " + std::to_string(i)};
    return {"Finiteness", true, "all values finite"};
}

CheckResult check_range(const Item& item, const ContentSpace& space)
{
    if (!space.pixel) return {"ValueRange", true, "not pixel content"};
    for (std::size_t f = 0; f < item.frames.size(); ++f)
        for (double x : item.frames[f])
            if (!(x >= 0.0 && x <= 1.0))
                return {"ValueRange", false, "pixel value outside [0,1] in frame " + std::to_string(f)};
    return {"ValueRange", true, "pixels in [0,1]"};
}

CheckResult check_watermark(const Item& item, const CheckConfig& config)
{
    if (item.provenance == Provenance::human) return {"WatermarkPresent", true, "not required for human items"};
    if (!item.watermarked) return {"WatermarkPresent", false, "AI-provenance item is not watermarked"};
    if (config.key) {
        const auto d = watermark_detect(item, *config.key);
        if (!d.detected) {
            std::ostringstream msg;
            msg << "watermark statistic " << d.statistic << " below threshold " << config.key->threshold;
            return {"WatermarkPresent", false, msg.str()};
        }
    }
    return {"WatermarkPresent", true, "watermark present"};
}

}  // namespace

FidelityChecker::FidelityChecker()
{
    for (const char* name : {"Bias", "Privacy", "Safety", "Authenticity", "Legal"}) {
        const std::string n = name;
        predicates_.emplace_back(n, [n](const Item&) { return CheckResult{n, true, "no classifier registered"}; });
    }
}

void FidelityChecker::register_predicate(const std::string& name, CheckPredicate predicate)
{
    for (auto& [n, p] : predicates_)
        if (n == name) {
            p = std::move(predicate);
            return;
        }
    predicates_.emplace_back(name, std::move(predicate));
}

CheckReport FidelityChecker::run(const Item& item, const ContentSpace& space, const CheckConfig& config) const
{
    CheckReport report;
    report.results.push_back(check_finite(item));
    report.results.push_back(check_range(item, space));
    report.results.push_back(check_watermark(item, config));
    report.results.push_back({"QualityGate", true, "skipped: batch-level check"});
    for (const auto& [name, predicate] : predicates_) {
        CheckResult r = predicate(item);
        r.check = name;
        report.results.push_back(std::move(r));
    }
    return report;
}

std::vector<CheckReport> FidelityChecker::run_batch(std::span<const Item> items, std::span<const Item> reference,
                                                    double fvd_bound, const ContentSpace& space,
                                                    const CheckConfig& config) const
{
    std::vector<CheckReport> reports;
    reports.reserve(items.size());
    for (const auto& item : items) reports.push_back(run(item, space, config));

    CheckResult gate{"QualityGate", true, ""};
    try {
        const Encoder enc = Encoder::random_projection(space.dim, 0x5eed, 8);
        const double value = fvd(reference, items, FvdEncoder(enc));
        std::ostringstream msg;
        msg << "batch FVD " << value << (value <= fvd_bound ? " <= " : " > ") << "bound " << fvd_bound;
        gate.pass = value <= fvd_bound;
        gate.reason = msg.str();
    } catch (const Error& e) {
        gate.pass = false;
        gate.reason = std::string("FVD unavailable: ") + e.what();
    }
    for (auto& r : reports)
        for (auto& c : r.results)
            if (c.check == "QualityGate") c = gate;
    return reports;
}

CheckReport run_checks(const Item& item, const ContentSpace& space, const CheckConfig& config)
{
    static const FidelityChecker checker;
    return checker.run(item, space, config);
}

}  // namespace generec
