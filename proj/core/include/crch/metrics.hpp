#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crch/simruntime.hpp"

namespace crch {

struct RunMetrics {
    double tet = 0.0;      // minutes; horizon for incomplete runs
    double usage = 0.0;    // busy VM minutes (execution + checkpoint overhead)
    double wastage = 0.0;  // minutes that did not contribute to the result
    double slr = 0.0;      // tet / B-level of the critical path head
    bool completed = false;
    int resubmissions = 0;
    int replica_executions = 0;
};

// Event-log accounting; `schedule` must be the one the log was produced
// from (its critical path fixes the SLR denominator).
RunMetrics compute(const ExecutionLog& log, const Schedule& schedule, const WorkflowSpec& spec);

struct FieldStats {
    double mean = 0.0;
    double stddev = 0.0;  // population
};

struct Summary {
    int reps = 0;
    double completion_rate = 0.0;
    FieldStats tet, usage, wastage, slr, resubmissions, replica_executions;
};

Summary aggregate(const std::vector<RunMetrics>& runs, int reps);

struct SweepPoint {
    double lambda = 0.0;
    double mean_tet = 0.0;
    double mean_co = 0.0;          // executed * gamma / lambda, averaged over seeds
    double mean_tet_excl_co = 0.0; // mean_tet - mean_co
};

// Lemma-1 style sweep: simulate the over-provisioned schedule across the
// lambda grid and seeds, reporting the TET curve and its checkpoint
// overhead decomposition TET = TET_excl_co + CO.
std::vector<SweepPoint> lambda_sweep(const WorkflowSpec& spec, const ReplicationPlan& plan,
                                     const EnvironmentProfile& profile,
                                     const std::vector<double>& lambdas, double gamma,
                                     const std::vector<std::uint64_t>& seeds);

// Trace horizon generous enough for delayed replays of this schedule.
double horizon_for(const Schedule& schedule, const CheckpointConfig& cp);

}  // namespace crch
