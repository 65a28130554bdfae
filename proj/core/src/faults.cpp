#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "crch/faults.hpp"
#include "crch/rng.hpp"
#include "crch/textio.hpp"

namespace crch {

EnvironmentProfile environment_profile(const std::string& name) {
    EnvironmentProfile p;
    p.name = name;
    if (name == "stable") {
        p.mtbf_scale = 60.0;
        p.size_shape = 1.5;
        p.size_scale = 0.6;
        p.mttr_median = 1.0;
        p.busy_as_failure = true;
    } else if (name == "normal") {
        p.mtbf_scale = 30.0;
        p.size_shape = 2.0;
        p.size_scale = 1.7;
        p.mttr_median = 3.0;
        p.busy_as_failure = true;
    } else if (name == "unstable") {
        p.mtbf_scale = 10.0;
        p.size_shape = 2.4;
        p.size_scale = 2.8;
        p.mttr_median = 6.0;
        p.busy_as_failure = false;
    } else if (name == "none") {
        // failure-free environment: no episodes ever fire
        p.mtbf_scale = 0.0;
        p.busy_as_failure = true;
    } else {
        throw std::runtime_error("unknown environment '" + name + "' (expected stable|normal|unstable|none)");
    }
    return p;
}

std::vector<std::string> FailureTrace::fvm() const {
    std::vector<std::string> out;
    out.reserve(downtimes.size());
    for (const auto& [vm, intervals] : downtimes) out.push_back(vm);
    return out;
}

FailureTrace build_trace(const EnvironmentProfile& profile, const ResourcePool& pool,
                         double horizon, std::uint64_t seed) {
    if (!(horizon > 0.0)) throw std::runtime_error("trace horizon must be positive");

    FailureTrace trace;
    trace.horizon = horizon;
    trace.seed = seed;
    trace.busy_as_failure = profile.busy_as_failure;

    std::vector<int> unreliable;
    for (int i = 0; i < pool.vm_count(); ++i)
        if (!pool.is_reliable(i)) unreliable.push_back(i);
    if (unreliable.empty()) {
        trace.warnings.push_back("pool is entirely reliable; trace is empty");
        return trace;
    }
    if (profile.mtbf_scale <= 0.0) return trace;  // failure-free profile

    std::map<int, std::vector<DowntimeInterval>> raw;
    double clock = 0.0;
    const double mttr_mu = std::log(profile.mttr_median);
    for (std::uint64_t episode = 0;; ++episode) {
        // independent substream per episode: contents stay paired when
        // only the episode spacing (mtbf_scale) changes
        Rng rng(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (episode + 1)));
        clock += rng.weibull(profile.mtbf_shape, profile.mtbf_scale);
        if (clock >= horizon) break;

        const int affected = std::min<int>(
            static_cast<int>(unreliable.size()),
            std::max(1, static_cast<int>(std::ceil(rng.weibull(profile.size_shape, profile.size_scale)))));

        // partial Fisher-Yates over the unreliable VM indices
        std::vector<int> picks = unreliable;
        for (int k = 0; k < affected; ++k) {
            const int j = rng.uniform_int(k, static_cast<int>(picks.size()) - 1);
            std::swap(picks[static_cast<size_t>(k)], picks[static_cast<size_t>(j)]);
            const double length = rng.lognormal(mttr_mu, profile.mttr_sigma);
            const double begin = clock;
            const double end = std::min(horizon, clock + length);
            if (end > begin) raw[picks[static_cast<size_t>(k)]].push_back({begin, end});
        }
    }

    for (auto& [vm_idx, intervals] : raw) {
        std::sort(intervals.begin(), intervals.end(),
                  [](const DowntimeInterval& a, const DowntimeInterval& b) { return a.begin < b.begin; });
        std::vector<DowntimeInterval> merged;
        for (const DowntimeInterval& iv : intervals) {
            if (!merged.empty() && iv.begin <= merged.back().end)
                merged.back().end = std::max(merged.back().end, iv.end);
            else
                merged.push_back(iv);
        }
        trace.downtimes[pool.vms[static_cast<size_t>(vm_idx)]] = std::move(merged);
    }
    return trace;
}

std::optional<DowntimeInterval> downtime_overlap(const FailureTrace& trace, const std::string& vm,
                                                 double from, double to, OverlapMode mode) {
    if (from > to) throw std::runtime_error("downtime_overlap: from > to");
    auto it = trace.downtimes.find(vm);
    if (it == trace.downtimes.end()) {
        // only VMs that actually fail carry interval lists; an empty
        // result is correct for any other VM the pool knows about
        return std::nullopt;
    }
    for (const DowntimeInterval& iv : it->second) {
        if (mode == OverlapMode::containing) {
            if (iv.begin <= from && from < iv.end) return iv;
            if (iv.begin > from) return std::nullopt;
        } else {
            if (iv.begin >= from) return iv.begin <= to ? std::optional<DowntimeInterval>(iv) : std::nullopt;
        }
    }
    return std::nullopt;
}

std::string emit_trace(const FailureTrace& trace) {
    std::ostringstream out;
    out << "{\n  \"horizon\": " << format_double(trace.horizon) << ",\n  \"seed\": " << trace.seed
        << ",\n  \"busy_as_failure\": " << (trace.busy_as_failure ? "true" : "false")
        << ",\n  \"downtimes\": {";
    bool first_vm = true;
    for (const auto& [vm, intervals] : trace.downtimes) {
        out << (first_vm ? "\n" : ",\n") << "    \"" << vm << "\": [";
        first_vm = false;
        for (size_t i = 0; i < intervals.size(); ++i) {
            if (i) out << ", ";
            out << '[' << format_double(intervals[i].begin) << ", " << format_double(intervals[i].end) << ']';
        }
        out << ']';
    }
    out << (first_vm ? "}" : "\n  }") << "\n}\n";
    return out.str();
}

FailureTrace parse_trace(const std::string& bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("trace parse error: ") + e.what());
    }
    FailureTrace trace;
    trace.horizon = doc.at("horizon").get<double>();
    trace.seed = doc.at("seed").get<std::uint64_t>();
    trace.busy_as_failure = doc.value("busy_as_failure", true);
    for (const auto& [vm, list] : doc.at("downtimes").items()) {
        std::vector<DowntimeInterval> intervals;
        for (const auto& pair : list)
            intervals.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
        trace.downtimes[vm] = std::move(intervals);
    }
    return trace;
}

}  // namespace crch
