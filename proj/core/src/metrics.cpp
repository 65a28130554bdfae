#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crch/metrics.hpp"

namespace crch {

RunMetrics compute(const ExecutionLog& log, const Schedule& schedule, const WorkflowSpec& spec) {
    if (static_cast<int>(log.final_states.size()) != schedule.copy_count())
        throw std::runtime_error("execution log does not match the schedule");

    RunMetrics m;
    m.completed = log.completed;
    m.resubmissions = log.resubmissions;

    double max_aft = 0.0;
    for (size_t i = 0; i < log.final_states.size(); ++i) {
        const CopyState& c = log.final_states[i];
        m.usage += c.occupied;
        if (c.aft >= 0.0) max_aft = std::max(max_aft, c.aft);
        if (c.ast >= 0.0 && schedule.copies[i].ordinal > 0) ++m.replica_executions;
    }
    m.tet = log.completed ? max_aft : log.horizon;

    if (!log.completed) {
        // failed-run convention: everything executed is waste
        m.wastage = m.usage;
    } else {
        for (size_t i = 0; i < log.final_states.size(); ++i) {
            const CopyState& c = log.final_states[i];
            // (i) execution lost past the last checkpoint at each failure
            m.wastage += c.wasted_failure;
            // (ii) whole executions of copies other than the task's first
            // success, net of losses already counted under (i)
            auto it = log.store.find(schedule.copies[i].origin);
            if (it != log.store.end() && it->second.copy_id != c.copy_id)
                m.wastage += c.executed - c.wasted_failure;
        }
    }

    // SLR denominator: B-level of the first task on the backtracked
    // critical path of the (possibly over-provisioned) schedule
    const std::vector<int> path = critical_path(schedule, spec);
    const std::string& head = schedule.copies[static_cast<size_t>(path.front())].origin;
    const double denom = schedule.rank[static_cast<size_t>(spec.workflow.index_of(head))];
    if (!(denom > 0.0)) throw std::runtime_error("critical path head has nonpositive B-level");
    m.slr = m.tet / denom;
    return m;
}

Summary aggregate(const std::vector<RunMetrics>& runs, int reps) {
    if (runs.empty()) throw std::runtime_error("aggregate: no runs");
    if (reps < 1) throw std::runtime_error("aggregate: reps must be >= 1");
    if (static_cast<int>(runs.size()) != reps)
        throw std::runtime_error("aggregate: run count does not match reps");

    Summary s;
    s.reps = reps;
    auto stats = [&](auto field) {
        FieldStats fs;
        double sum = 0.0;
        for (const RunMetrics& r : runs) sum += field(r);
        fs.mean = sum / static_cast<double>(reps);
        double var = 0.0;
        for (const RunMetrics& r : runs) {
            const double d = field(r) - fs.mean;
            var += d * d;
        }
        fs.stddev = std::sqrt(var / static_cast<double>(reps));
        return fs;
    };
    s.tet = stats([](const RunMetrics& r) { return r.tet; });
    s.usage = stats([](const RunMetrics& r) { return r.usage; });
    s.wastage = stats([](const RunMetrics& r) { return r.wastage; });
    s.slr = stats([](const RunMetrics& r) { return r.slr; });
    s.resubmissions = stats([](const RunMetrics& r) { return static_cast<double>(r.resubmissions); });
    s.replica_executions =
        stats([](const RunMetrics& r) { return static_cast<double>(r.replica_executions); });
    int completed = 0;
    for (const RunMetrics& r : runs) completed += r.completed ? 1 : 0;
    s.completion_rate = static_cast<double>(completed) / static_cast<double>(reps);
    return s;
}

double horizon_for(const Schedule& schedule, const CheckpointConfig& cp) {
    const double stretched = tet_perfect(schedule) * (1.0 + cp.gamma / cp.lambda);
    return stretched * 10.0 + 500.0;
}

std::vector<SweepPoint> lambda_sweep(const WorkflowSpec& spec, const ReplicationPlan& plan,
                                     const EnvironmentProfile& profile,
                                     const std::vector<double>& lambdas, double gamma,
                                     const std::vector<std::uint64_t>& seeds) {
    if (lambdas.size() < 2) throw std::runtime_error("lambda sweep needs at least two interval values");
    if (seeds.empty()) throw std::runtime_error("lambda sweep needs at least one seed");

    const Schedule schedule = overprovision(spec, plan);

    // one horizon across the grid, so every lambda sees identical traces
    double min_lambda = lambdas.front();
    for (double l : lambdas) min_lambda = std::min(min_lambda, l);
    CheckpointConfig worst;
    worst.lambda = min_lambda;
    worst.gamma = gamma;
    const double horizon = horizon_for(schedule, worst);

    std::vector<SweepPoint> curve;
    for (double lambda : lambdas) {
        CheckpointConfig cp;
        cp.lambda = lambda;
        cp.gamma = gamma;
        SweepPoint point;
        point.lambda = lambda;
        for (std::uint64_t seed : seeds) {
            const FailureTrace trace = build_trace(profile, spec.pool, horizon, seed);
            const ExecutionLog log = simulate(schedule, trace, cp, spec);
            const RunMetrics m = compute(log, schedule, spec);
            double executed = 0.0;
            for (const CopyState& c : log.final_states) executed += c.executed;
            point.mean_tet += m.tet;
            point.mean_co += executed * gamma / lambda;
        }
        const double n = static_cast<double>(seeds.size());
        point.mean_tet /= n;
        point.mean_co /= n;
        point.mean_tet_excl_co = point.mean_tet - point.mean_co;
        curve.push_back(point);
    }
    return curve;
}

}  // namespace crch
