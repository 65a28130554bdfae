#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "crch/scheduler.hpp"
#include "crch/textio.hpp"

namespace crch {

int Schedule::copy_index(const std::string& copy_id) const {
    for (int i = 0; i < copy_count(); ++i)
        if (copies[static_cast<size_t>(i)].copy_id == copy_id) return i;
    return -1;
}

std::vector<int> Schedule::copies_of_task(const std::string& origin) const {
    std::vector<int> out;
    for (int i = 0; i < copy_count(); ++i)
        if (copies[static_cast<size_t>(i)].origin == origin) out.push_back(i);
    return out;
}

std::vector<double> b_levels(const WorkflowSpec& spec) {
    const Workflow& w = spec.workflow;
    const int n = w.task_count();
    std::vector<double> b(static_cast<size_t>(n), -1.0);
    std::vector<double> mean_edge(w.deps().size(), 0.0);
    for (size_t d = 0; d < w.deps().size(); ++d) mean_edge[d] = mean_transfer(w.deps()[d], spec.pool);

    // children before parents: iterative post-order
    std::vector<std::pair<int, bool>> stack;
    for (int root = 0; root < n; ++root) {
        if (b[static_cast<size_t>(root)] >= 0.0) continue;
        stack.emplace_back(root, false);
        while (!stack.empty()) {
            auto [node, expanded] = stack.back();
            stack.pop_back();
            if (b[static_cast<size_t>(node)] >= 0.0) continue;
            if (!expanded) {
                stack.emplace_back(node, true);
                for (int d : w.child_deps(node)) {
                    const int child = w.index_of(w.deps()[static_cast<size_t>(d)].child);
                    if (child >= 0 && b[static_cast<size_t>(child)] < 0.0) stack.emplace_back(child, false);
                }
            } else {
                double best = 0.0;
                for (int d : w.child_deps(node)) {
                    const int child = w.index_of(w.deps()[static_cast<size_t>(d)].child);
                    if (child < 0) continue;
                    best = std::max(best, mean_edge[static_cast<size_t>(d)] + b[static_cast<size_t>(child)]);
                }
                b[static_cast<size_t>(node)] = mean_runtime(w.task(node)) + best;
            }
        }
    }
    return b;
}

namespace {

struct Slot {
    double est;
    double eft;
    int copy;
};

// Per-VM busy intervals kept sorted by start time.
class VmTimeline {
public:
    // earliest insertion-based start at or after `ready` for `duration`
    double earliest_start(double ready, double duration) const {
        double candidate = ready;
        for (const Slot& s : slots_) {
            if (candidate + duration <= s.est) break;
            candidate = std::max(candidate, s.eft);
        }
        return candidate;
    }

    void insert(double est, double eft, int copy) {
        auto it = std::lower_bound(slots_.begin(), slots_.end(), est,
                                   [](const Slot& s, double v) { return s.est < v; });
        slots_.insert(it, Slot{est, eft, copy});
    }

    const std::vector<Slot>& slots() const { return slots_; }

private:
    std::vector<Slot> slots_;
};

struct Placer {
    const WorkflowSpec& spec;
    Schedule& schedule;
    std::vector<VmTimeline> timelines;
    // indices of all placed copies per task index
    std::vector<std::vector<int>> placed_copies;

    Placer(const WorkflowSpec& s, Schedule& sched)
        : spec(s), schedule(sched),
          timelines(static_cast<size_t>(s.pool.vm_count())),
          placed_copies(static_cast<size_t>(s.workflow.task_count())) {}

    // data-ready time on `vm`; originals see only original parent copies,
    // replicas take the earliest-finishing copy of each parent
    double ready_time(int task, int vm, bool original) const {
        const Workflow& w = spec.workflow;
        double ready = 0.0;
        for (int d : w.parent_deps(task)) {
            const Dependency& dep = w.deps()[static_cast<size_t>(d)];
            const int parent = w.index_of(dep.parent);
            double best = std::numeric_limits<double>::infinity();
            for (int c : placed_copies[static_cast<size_t>(parent)]) {
                if (original && schedule.copies[static_cast<size_t>(c)].ordinal != 0) continue;
                const CopyAssignment& a = schedule.assignments[static_cast<size_t>(c)];
                best = std::min(best, a.eft + transfer_time(dep.data, a.vm, vm, spec.pool));
            }
            if (!std::isfinite(best))
                throw std::runtime_error("internal: parent of '" + w.task(task).id + "' not yet placed");
            ready = std::max(ready, best);
        }
        return ready;
    }

    int place(int task, int ordinal, const std::vector<bool>* forbidden_vms) {
        const Workflow& w = spec.workflow;
        const Task& t = w.task(task);
        const int v = spec.pool.vm_count();

        int best_vm = -1;
        double best_est = 0.0, best_eft = 0.0;
        for (int vm = 0; vm < v; ++vm) {
            if (forbidden_vms && (*forbidden_vms)[static_cast<size_t>(vm)]) continue;
            const double ready = ready_time(task, vm, ordinal == 0);
            const double duration = t.runtimes[static_cast<size_t>(vm)];
            const double est = timelines[static_cast<size_t>(vm)].earliest_start(ready, duration);
            const double eft = est + duration;
            if (best_vm < 0 || est < best_est || (est == best_est && eft < best_eft)) {
                best_vm = vm;
                best_est = est;
                best_eft = eft;
            }
        }
        if (best_vm < 0) throw std::runtime_error("internal: no candidate VM");

        const int idx = schedule.copy_count();
        schedule.copies.push_back(TaskCopy{t.id + "#" + std::to_string(ordinal), t.id, ordinal});
        schedule.assignments.push_back(CopyAssignment{best_vm, best_est, best_eft});
        timelines[static_cast<size_t>(best_vm)].insert(best_est, best_eft, idx);
        placed_copies[static_cast<size_t>(task)].push_back(idx);
        return idx;
    }

    void place_replicas(int task, int rep_count) {
        const int v = spec.pool.vm_count();
        for (int ordinal = 1; ordinal < rep_count; ++ordinal) {
            std::vector<bool> forbidden(static_cast<size_t>(v), false);
            int open = v;
            for (int c : placed_copies[static_cast<size_t>(task)]) {
                const int vm = schedule.assignments[static_cast<size_t>(c)].vm;
                if (!forbidden[static_cast<size_t>(vm)]) {
                    forbidden[static_cast<size_t>(vm)] = true;
                    --open;
                }
            }
            place(task, ordinal, open > 0 ? &forbidden : nullptr);
        }
    }
};

std::vector<int> rank_order(const WorkflowSpec& spec, const std::vector<double>& ranks) {
    std::vector<int> order(static_cast<size_t>(spec.workflow.task_count()));
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ra = ranks[static_cast<size_t>(a)];
        const double rb = ranks[static_cast<size_t>(b)];
        if (ra != rb) return ra > rb;
        return spec.workflow.task(a).id < spec.workflow.task(b).id;
    });
    return order;
}

}  // namespace

Schedule overprovision(const WorkflowSpec& spec, const ReplicationPlan& plan) {
    const Workflow& w = spec.workflow;
    Schedule schedule;
    schedule.rank = b_levels(spec);
    Placer placer(spec, schedule);

    const std::vector<int> order = rank_order(spec, schedule.rank);
    std::vector<bool> original_placed(static_cast<size_t>(w.task_count()), false);
    std::vector<bool> replicas_done(static_cast<size_t>(w.task_count()), false);

    for (int task : order) {
        placer.place(task, 0, nullptr);
        original_placed[static_cast<size_t>(task)] = true;

        // Algorithm-2 trigger: a parent's replicas go in once all of its
        // original children are scheduled
        std::vector<int> parents;
        for (int d : w.parent_deps(task)) parents.push_back(w.index_of(w.deps()[static_cast<size_t>(d)].parent));
        std::sort(parents.begin(), parents.end());
        parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
        for (int parent : parents) {
            if (replicas_done[static_cast<size_t>(parent)]) continue;
            bool all_children_placed = true;
            for (int d : w.child_deps(parent)) {
                const int child = w.index_of(w.deps()[static_cast<size_t>(d)].child);
                if (!original_placed[static_cast<size_t>(child)]) {
                    all_children_placed = false;
                    break;
                }
            }
            if (!all_children_placed) continue;
            placer.place_replicas(parent, plan.count_of(w.task(parent).id));
            replicas_done[static_cast<size_t>(parent)] = true;
        }
    }

    // replicas of childless tasks (and anything left) trail the main pass
    for (int task : order) {
        if (replicas_done[static_cast<size_t>(task)]) continue;
        placer.place_replicas(task, plan.count_of(w.task(task).id));
        replicas_done[static_cast<size_t>(task)] = true;
    }
    return schedule;
}

Schedule heft(const WorkflowSpec& spec) {
    ReplicationPlan ones;
    for (const Task& t : spec.workflow.tasks()) ones.counts[t.id] = 1;
    return overprovision(spec, ones);
}

double tet_perfect(const Schedule& schedule) {
    double makespan = 0.0;
    for (const CopyAssignment& a : schedule.assignments) makespan = std::max(makespan, a.eft);
    return makespan;
}

std::vector<int> critical_path(const Schedule& schedule, const WorkflowSpec& spec) {
    if (schedule.copy_count() == 0) throw std::runtime_error("critical path of an empty schedule");
    const Workflow& w = spec.workflow;

    int cur = 0;
    for (int i = 1; i < schedule.copy_count(); ++i) {
        const auto& a = schedule.assignments[static_cast<size_t>(i)];
        const auto& b = schedule.assignments[static_cast<size_t>(cur)];
        if (a.eft > b.eft ||
            (a.eft == b.eft && schedule.copies[static_cast<size_t>(i)].copy_id <
                                   schedule.copies[static_cast<size_t>(cur)].copy_id))
            cur = i;
    }

    std::vector<int> chain{cur};
    while (true) {
        const auto& cur_copy = schedule.copies[static_cast<size_t>(cur)];
        const auto& cur_assign = schedule.assignments[static_cast<size_t>(cur)];
        if (cur_assign.est <= 0.0) break;

        const int task = w.index_of(cur_copy.origin);
        struct Candidate {
            int copy;
            double contribution;  // runtime + transfer into the current copy
            double finish;        // eft (+ transfer), for the gap fallback
        };
        std::vector<Candidate> exact, earlier;

        for (int i = 0; i < schedule.copy_count(); ++i) {
            if (i == cur) continue;
            const auto& a = schedule.assignments[static_cast<size_t>(i)];
            if (a.vm == cur_assign.vm && a.eft <= cur_assign.est) {
                const Candidate c{i, a.eft - a.est, a.eft};
                (a.eft == cur_assign.est ? exact : earlier).push_back(c);
            }
        }
        for (int d : w.parent_deps(task)) {
            const Dependency& dep = w.deps()[static_cast<size_t>(d)];
            for (int i : schedule.copies_of_task(dep.parent)) {
                const auto& a = schedule.assignments[static_cast<size_t>(i)];
                const double tr = transfer_time(dep.data, a.vm, cur_assign.vm, spec.pool);
                const double arrive = a.eft + tr;
                if (arrive > cur_assign.est) continue;
                const Candidate c{i, a.eft - a.est + tr, arrive};
                (arrive == cur_assign.est ? exact : earlier).push_back(c);
            }
        }

        auto better = [&](const Candidate& a, const Candidate& b) {
            if (a.contribution != b.contribution) return a.contribution > b.contribution;
            return schedule.copies[static_cast<size_t>(a.copy)].copy_id <
                   schedule.copies[static_cast<size_t>(b.copy)].copy_id;
        };
        const Candidate* pick = nullptr;
        if (!exact.empty()) {
            for (const Candidate& c : exact)
                if (!pick || better(c, *pick)) pick = &c;
        } else if (!earlier.empty()) {
            // idle gap before this copy; continue from the latest finisher
            for (const Candidate& c : earlier)
                if (!pick || c.finish > pick->finish || (c.finish == pick->finish && better(c, *pick))) pick = &c;
        }
        if (!pick) break;
        cur = pick->copy;
        chain.push_back(cur);
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

std::string schedule_to_csv(const Schedule& schedule, const WorkflowSpec&) {
    std::ostringstream out;
    out << "copy,origin,ordinal,vm,est,eft\n";
    for (int i = 0; i < schedule.copy_count(); ++i) {
        const TaskCopy& c = schedule.copies[static_cast<size_t>(i)];
        const CopyAssignment& a = schedule.assignments[static_cast<size_t>(i)];
        out << csv_field(c.copy_id) << ',' << csv_field(c.origin) << ',' << c.ordinal << ',' << a.vm
            << ',' << format_double(a.est) << ',' << format_double(a.eft) << '\n';
    }
    return out.str();
}

}  // namespace crch
