#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crch/model.hpp"

namespace crch {

// ---------------------------------------------------------------------
// Native structured-text format (JSON). Top-level keys: name, family,
// size, tasks [{id, priority, runtimes}], deps [{parent, child, data}],
// vms [{id, reliable}], rates (row-major). emit_native() is canonical:
// fixed key order, two-space indent, shortest round-trip numbers, so
// emit(parse(x)) == x for any x produced by emit.
// ---------------------------------------------------------------------

WorkflowSpec parse_native(const std::string& bytes);
std::string emit_native(const WorkflowSpec& spec);

// ---------------------------------------------------------------------
// DAX XML subset: `job` (attrs id, runtime), `child`/`parent` (attr ref),
// `uses` (attrs file|name, size, optional link=input|output). Other
// elements are ignored with a warning. Edge data volume = total size of
// files written by the parent and read by the child.
// ---------------------------------------------------------------------

struct DaxPoolOptions {
    int vm_count = 20;
    int reliable = 4;          // trailing VMs in the list are reliable
    std::uint64_t seed = 1;    // drives speed factors and rates when no sidecar is given
    std::optional<std::string> sidecar;  // resource document (see parse_resources)
};

WorkflowSpec parse_dax(const std::string& xml, const DaxPoolOptions& options,
                       std::vector<std::string>* warnings = nullptr);

// Sidecar resource document: {"vms":[{id,reliable}], "rates":[[..]], "factors":[..]}.
struct ResourceSidecar {
    ResourcePool pool;
    std::vector<double> factors;  // per-VM runtime multipliers
};
ResourceSidecar parse_resources(const std::string& bytes);
std::string emit_resources(const ResourceSidecar& sidecar);

// ---------------------------------------------------------------------
// Synthetic workflow families. Deterministic for a fixed config.
// ---------------------------------------------------------------------

enum class Family { layered_random, montage_like, cybershake_like, ligo_like, sipht_like };

Family family_from_name(const std::string& name);
std::string family_name(Family family);

struct GeneratorConfig {
    Family family = Family::layered_random;
    int size = 100;     // task count
    int vm_count = 20;
    int reliable = 4;   // trailing VMs are reliable
    std::uint64_t seed = 1;
    double runtime_min = 1.0, runtime_max = 10.0;  // minutes, uniform
    double data_min = 1.0, data_max = 10.0;        // data units, uniform
    double rate_min = 0.5, rate_max = 2.0;         // units per minute, uniform
};

WorkflowSpec generate(const GeneratorConfig& config);

// Throws when the spec does not validate; used by all ingest paths.
void require_valid(const WorkflowSpec& spec);

}  // namespace crch
