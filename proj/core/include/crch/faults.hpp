#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crch/model.hpp"

namespace crch {

// Failure environments: episodes arrive with Weibull-distributed gaps,
// each hits a Weibull-sized set of unreliable VMs, each hit VM stays
// down for a log-normal repair time.
struct EnvironmentProfile {
    std::string name = "normal";
    double mtbf_shape = 12.0;
    double mtbf_scale = 30.0;   // minutes between failure episodes
    double size_shape = 2.0;
    double size_scale = 1.7;    // ceil(Weibull) VMs affected per episode
    double mttr_median = 3.0;   // minutes
    double mttr_sigma = 0.5;
    bool busy_as_failure = true;
};

// stable / normal / unstable presets
EnvironmentProfile environment_profile(const std::string& name);

struct DowntimeInterval {
    double begin;  // X
    double end;    // Y
};

struct FailureTrace {
    std::map<std::string, std::vector<DowntimeInterval>> downtimes;  // failing VMs only
    double horizon = 0.0;
    std::uint64_t seed = 0;
    bool busy_as_failure = true;
    std::vector<std::string> warnings;

    bool is_failing(const std::string& vm) const { return downtimes.count(vm) > 0; }
    std::vector<std::string> fvm() const;
};

// Deterministic for a fixed (profile, pool, horizon, seed). Each episode
// draws from its own seed-derived substream, so traces are prefix-stable
// in the horizon and episode contents are comparable across MTBF scales.
FailureTrace build_trace(const EnvironmentProfile& profile, const ResourcePool& pool,
                         double horizon, std::uint64_t seed);

enum class OverlapMode {
    next_after,   // earliest interval with begin >= from
    containing,   // interval with begin <= from < end
};

// Interval lookup used by the runtime engine; `to` bounds the search for
// next_after. Unknown VM ids throw.
std::optional<DowntimeInterval> downtime_overlap(const FailureTrace& trace, const std::string& vm,
                                                 double from, double to, OverlapMode mode);

std::string emit_trace(const FailureTrace& trace);
FailureTrace parse_trace(const std::string& bytes);

}  // namespace crch
