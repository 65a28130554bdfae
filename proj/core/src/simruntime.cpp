#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "crch/simruntime.hpp"
#include "crch/textio.hpp"

namespace crch {

void validate_checkpoint_config(const CheckpointConfig& cp) {
    if (!(cp.lambda > 0.0)) throw std::runtime_error("checkpoint interval must be positive");
    if (cp.gamma < 0.0) throw std::runtime_error("checkpoint overhead must be >= 0");
    if (cp.gamma >= cp.lambda) throw std::runtime_error("checkpoint overhead must be smaller than the interval");
}

CheckpointConfig plain_execution() {
    CheckpointConfig cp;
    cp.lambda = 1e18;  // no checkpoint ever completes
    cp.gamma = 0.0;
    cp.resubmission = false;
    return cp;
}

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::start: return "start";
        case EventKind::checkpoint: return "checkpoint";
        case EventKind::vm_down: return "vm_down";
        case EventKind::vm_up: return "vm_up";
        case EventKind::copy_failed: return "copy_failed";
        case EventKind::resubmit: return "resubmit";
        case EventKind::wait_busy: return "wait_busy";
        case EventKind::terminate_replica: return "terminate_replica";
        case EventKind::complete: return "complete";
    }
    return "?";
}

ResubmissionDecision decide_resubmission(int alpha, double lambda, double runtime_on_current_vm,
                                         const VmAvailability& avail, int current_vm,
                                         const DowntimeInterval& window) {
    ResubmissionDecision d;
    d.saved = static_cast<double>(alpha) * lambda;
    d.remaining = runtime_on_current_vm - d.saved;

    int best_vm = -1;
    double best_est = std::numeric_limits<double>::infinity();
    for (size_t vm = 0; vm < avail.est.size(); ++vm) {
        if (!avail.nonfailing[vm]) continue;
        if (avail.est[vm] < best_est) {
            best_est = avail.est[vm];
            best_vm = static_cast<int>(vm);
        }
    }

    // moving re-executes the checkpointed prefix; that is its overhead
    if (best_vm >= 0 && best_est + d.saved < window.end) {
        d.move = true;
        d.vm = best_vm;
        d.est = best_est;
    } else {
        d.move = false;
        d.vm = current_vm;
        d.est = window.end;
    }
    return d;
}

double auto_lambda(const EnvironmentProfile& profile, double gamma) {
    if (!(gamma > 0.0)) throw std::runtime_error("auto lambda needs gamma > 0");
    const double raw = 2.0 * std::sqrt(gamma * profile.mtbf_scale);
    const double lo = 2.0 * gamma;
    const double hi = 10.0 * profile.mttr_median;
    return std::min(std::max(raw, lo), std::max(hi, lo));
}

namespace {

// Ordering at equal times: completions free VMs before failures are
// charged, VMs come up before fresh starts are attempted.
enum class QKind : int { finish = 0, fail = 1, vm_down = 2, vm_up = 3, try_start = 4 };

struct QEvent {
    double time = 0.0;
    QKind kind = QKind::try_start;
    int copy = -1;  // -1 for vm events
    int vm = -1;
    std::uint64_t version = 0;  // try_start invalidation token
    std::string tie;            // deterministic tie key
    DowntimeInterval window{0.0, 0.0};  // fail events carry (X, Y)
};

struct QCompare {
    bool operator()(const QEvent& a, const QEvent& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
        return a.tie > b.tie;
    }
};

class Engine {
public:
    Engine(const Schedule& schedule, const FailureTrace& trace, const CheckpointConfig& cp,
           const WorkflowSpec& spec)
        : s_(schedule), trace_(trace), cp_(cp), spec_(spec) {}

    ExecutionLog run();

private:
    const Schedule& s_;
    const FailureTrace& trace_;
    const CheckpointConfig& cp_;
    const WorkflowSpec& spec_;

    int n_copies_ = 0, n_tasks_ = 0, n_vms_ = 0;
    std::vector<int> copy_task_;                 // copy -> task index
    std::vector<std::vector<int>> task_copies_;  // task -> copies
    std::vector<int> rep_count_;                 // task -> total copies
    std::vector<bool> vm_failing_;

    ExecutionLog log_;
    std::vector<CopyState> cs_;
    std::vector<double> queue_key_;     // wait order: planned EST or failure time
    std::vector<double> progress_;      // checkpointed execution minutes retained
    std::vector<double> attempt_begin_; // wall time the running attempt started
    std::vector<int> running_on_;       // vm -> copy, -1 when idle
    std::vector<double> frees_at_;      // vm -> when the running copy releases it
    std::vector<std::vector<int>> waiting_;
    std::vector<int> parents_pending_;  // task -> parent tasks without results
    std::vector<bool> task_done_;
    std::vector<std::uint64_t> version_;
    std::vector<double> next_try_;      // pending TryStart time per copy
    std::priority_queue<QEvent, std::vector<QEvent>, QCompare> queue_;

    const std::string& vm_name(int vm) const { return spec_.pool.vms[static_cast<size_t>(vm)]; }

    double runtime_on(int copy, int vm) const {
        const int task = copy_task_[static_cast<size_t>(copy)];
        return spec_.workflow.task(task).runtimes[static_cast<size_t>(vm)];
    }

    void record(double time, EventKind kind, int copy, int vm, std::string detail) {
        log_.events.push_back(Event{time, kind,
                                    copy >= 0 ? cs_[static_cast<size_t>(copy)].copy_id : std::string{},
                                    vm >= 0 ? vm_name(vm) : std::string{}, std::move(detail)});
    }

    int survivors(int task) const {
        int n = 0;
        for (int c : task_copies_[static_cast<size_t>(task)]) {
            const CopyStatus st = cs_[static_cast<size_t>(c)].status;
            if (st == CopyStatus::pending || st == CopyStatus::running) ++n;
        }
        return n;
    }

    void push_try_start(int copy, double time) {
        auto& v = version_[static_cast<size_t>(copy)];
        ++v;
        next_try_[static_cast<size_t>(copy)] = time;
        queue_.push(QEvent{time, QKind::try_start, copy, -1, v, cs_[static_cast<size_t>(copy)].copy_id});
    }

    std::optional<DowntimeInterval> downtime_at(int vm, double t) const {
        return downtime_overlap(trace_, vm_name(vm), t, t, OverlapMode::containing);
    }
    std::optional<DowntimeInterval> downtime_after(int vm, double t) const {
        return downtime_overlap(trace_, vm_name(vm), t, std::numeric_limits<double>::infinity(),
                                OverlapMode::next_after);
    }

    // earliest parent-data arrival on `vm`, over completed parent copies
    double dep_ready(int task, int vm) const {
        const Workflow& w = spec_.workflow;
        double ready = 0.0;
        for (int d : w.parent_deps(task)) {
            const Dependency& dep = w.deps()[static_cast<size_t>(d)];
            const int parent = w.index_of(dep.parent);
            double best = std::numeric_limits<double>::infinity();
            for (int c : task_copies_[static_cast<size_t>(parent)]) {
                const CopyState& p = cs_[static_cast<size_t>(c)];
                if (p.status != CopyStatus::done) continue;
                best = std::min(best, p.aft + transfer_time(dep.data, p.vm, vm, spec_.pool));
            }
            if (!std::isfinite(best)) return std::numeric_limits<double>::infinity();
            ready = std::max(ready, best);
        }
        return ready;
    }

    // (re)issue the initial TryStart when dependencies resolve or improve
    void refresh_try_start(int copy, double now) {
        CopyState& c = cs_[static_cast<size_t>(copy)];
        if (c.status != CopyStatus::pending || c.attempts > 0) return;
        const int task = copy_task_[static_cast<size_t>(copy)];
        if (parents_pending_[static_cast<size_t>(task)] > 0) return;
        const double ready = dep_ready(task, c.vm);
        if (!std::isfinite(ready)) return;
        const double t = std::max({now, s_.assignments[static_cast<size_t>(copy)].est, ready});
        if (t < next_try_[static_cast<size_t>(copy)]) push_try_start(copy, t);
    }

    VmAvailability availability(double now) const {
        VmAvailability a;
        a.est.resize(static_cast<size_t>(n_vms_));
        a.nonfailing.resize(static_cast<size_t>(n_vms_));
        for (int vm = 0; vm < n_vms_; ++vm) {
            a.nonfailing[static_cast<size_t>(vm)] = !vm_failing_[static_cast<size_t>(vm)];
            a.est[static_cast<size_t>(vm)] =
                running_on_[static_cast<size_t>(vm)] >= 0 ? std::max(now, frees_at_[static_cast<size_t>(vm)]) : now;
        }
        return a;
    }

    void mark_dead_end(int task, double now) {
        if (task_done_[static_cast<size_t>(task)] || survivors(task) > 0) return;
        log_.errors.push_back("workflow incomplete: task '" + spec_.workflow.task(task).id +
                              "' exhausted all copies at " + format_double(now));
    }

    void apply_decision(int copy, double now, const DowntimeInterval& window, double total_runtime) {
        CopyState& c = cs_[static_cast<size_t>(copy)];
        const ResubmissionDecision d =
            decide_resubmission(c.alpha, cp_.lambda, total_runtime, availability(now), c.vm, window);
        ++log_.resubmissions;
        c.status = CopyStatus::pending;
        queue_key_[static_cast<size_t>(copy)] = now;
        if (d.move) {
            c.vm = d.vm;
            c.alpha = 0;
            progress_[static_cast<size_t>(copy)] = 0.0;
            record(now, EventKind::resubmit, copy, d.vm, "move est=" + format_double(d.est));
            push_try_start(copy, d.est);
        } else {
            record(now, EventKind::resubmit, copy, c.vm,
                   "stay until " + format_double(window.end) + " remaining=" + format_double(d.remaining));
            push_try_start(copy, window.end);
        }
    }

    void terminate_copy(int copy, double now, const char* reason, bool count_failure) {
        CopyState& c = cs_[static_cast<size_t>(copy)];
        c.status = CopyStatus::terminated;
        ++version_[static_cast<size_t>(copy)];
        record(now, EventKind::terminate_replica, copy, c.vm, reason);
        if (count_failure)
            ++log_.failures[spec_.workflow.task(copy_task_[static_cast<size_t>(copy)]).id];
    }

    void start_attempt(int copy, double now) {
        CopyState& c = cs_[static_cast<size_t>(copy)];
        const double total = runtime_on(copy, c.vm);
        const double remaining = total - progress_[static_cast<size_t>(copy)];
        const int ckpts = std::max(0, static_cast<int>(std::floor(total / cp_.lambda)) - c.alpha);
        const double finish_at = now + remaining + static_cast<double>(ckpts) * cp_.gamma;

        c.status = CopyStatus::running;
        if (c.ast < 0.0) c.ast = now;
        ++c.attempts;
        attempt_begin_[static_cast<size_t>(copy)] = now;
        running_on_[static_cast<size_t>(c.vm)] = copy;
        frees_at_[static_cast<size_t>(c.vm)] = finish_at;
        record(now, EventKind::start, copy, c.vm,
               c.attempts > 1 ? "attempt " + std::to_string(c.attempts) : "");

        const auto next_down = downtime_after(c.vm, now);
        if (next_down && finish_at > next_down->begin) {
            frees_at_[static_cast<size_t>(c.vm)] = next_down->begin;
            queue_.push(QEvent{next_down->begin, QKind::fail, copy, -1, 0, c.copy_id, *next_down});
        } else {
            queue_.push(QEvent{finish_at, QKind::finish, copy, -1, 0, c.copy_id});
        }
    }

    void attempt_start(int copy, double now) {
        CopyState& c = cs_[static_cast<size_t>(copy)];
        if (c.status != CopyStatus::pending) return;
        const int task = copy_task_[static_cast<size_t>(copy)];
        const int vm = c.vm;

        if (running_on_[static_cast<size_t>(vm)] >= 0) {
            // a blocked copy of an already-completed task frees its slot
            if (task_done_[static_cast<size_t>(task)]) {
                terminate_copy(copy, now, "redundant", false);
                return;
            }
            // busy VM: the last surviving copy waits; others are failures
            // unless busy waits are treated silently
            if (survivors(task) > 1 && trace_.busy_as_failure) {
                terminate_copy(copy, now, "busy", true);
                mark_dead_end(task, now);
            } else {
                record(now, EventKind::wait_busy, copy, vm, "");
                waiting_[static_cast<size_t>(vm)].push_back(copy);
            }
            return;
        }

        if (const auto window = downtime_at(vm, now)) {
            handle_start_failure(copy, now, *window);
            return;
        }
        start_attempt(copy, now);
    }

    void serve_vm(int vm, double now) {
        // waiting copies ride out downtimes in the queue; service resumes
        // at the matching vm_up event
        if (downtime_at(vm, now)) return;
        while (running_on_[static_cast<size_t>(vm)] < 0) {
            auto& q = waiting_[static_cast<size_t>(vm)];
            int best = -1;
            size_t best_at = 0;
            for (size_t i = 0; i < q.size(); ++i) {
                const int c = q[i];
                if (cs_[static_cast<size_t>(c)].status != CopyStatus::pending) continue;
                if (best >= 0) {
                    const double ka = queue_key_[static_cast<size_t>(c)];
                    const double kb = queue_key_[static_cast<size_t>(best)];
                    const std::string& ta = s_.copies[static_cast<size_t>(c)].origin;
                    const std::string& tb = s_.copies[static_cast<size_t>(best)].origin;
                    const std::string& ia = cs_[static_cast<size_t>(c)].copy_id;
                    const std::string& ib = cs_[static_cast<size_t>(best)].copy_id;
                    if (std::tie(ka, ta, ia) >= std::tie(kb, tb, ib)) continue;
                }
                best = c;
                best_at = i;
            }
            if (best < 0) {
                q.clear();
                return;
            }
            q.erase(q.begin() + static_cast<std::ptrdiff_t>(best_at));
            attempt_start(best, now);
        }
    }

    void handle_start_failure(int copy, double now, const DowntimeInterval& window) {
        CopyState& c = cs_[static_cast<size_t>(copy)];
        const int task = copy_task_[static_cast<size_t>(copy)];
        c.status = CopyStatus::failed;
        const int fails = ++log_.failures[spec_.workflow.task(task).id];
        record(now, EventKind::copy_failed, copy, c.vm, "down at start");

        if (cp_.resubmission && fails == rep_count_[static_cast<size_t>(task)] &&
            !task_done_[static_cast<size_t>(task)]) {
            apply_decision(copy, now, window, runtime_on(copy, c.vm));
        } else {
            mark_dead_end(task, now);
        }
    }

    void handle_finish(const QEvent& ev) {
        const int copy = ev.copy;
        CopyState& c = cs_[static_cast<size_t>(copy)];
        const int task = copy_task_[static_cast<size_t>(copy)];
        const double now = ev.time;
        const double begin = attempt_begin_[static_cast<size_t>(copy)];

        const double total = runtime_on(copy, c.vm);
        const double exec = total - progress_[static_cast<size_t>(copy)];
        const int ckpts = std::max(0, static_cast<int>(std::floor(total / cp_.lambda)) - c.alpha);
        c.executed += exec;
        c.occupied += now - begin;
        c.overhead_charged += static_cast<double>(ckpts) * cp_.gamma;
        for (int k = 1; k <= ckpts; ++k)
            record(begin + static_cast<double>(k) * (cp_.lambda + cp_.gamma), EventKind::checkpoint,
                   copy, c.vm, std::to_string(c.alpha + k));
        c.alpha += ckpts;
        progress_[static_cast<size_t>(copy)] = total;

        c.status = CopyStatus::done;
        c.aft = now;
        running_on_[static_cast<size_t>(c.vm)] = -1;
        record(now, EventKind::complete, copy, c.vm, "");

        const Workflow& w = spec_.workflow;
        if (!task_done_[static_cast<size_t>(task)]) {
            task_done_[static_cast<size_t>(task)] = true;
            log_.store[w.task(task).id] =
                StoreEntry{c.copy_id, vm_name(c.vm), vm_failing_[static_cast<size_t>(c.vm)], now};
            // redundant pending siblings free their slots immediately;
            // running ones finish and land in the wastage account
            for (int sibling : task_copies_[static_cast<size_t>(task)]) {
                if (sibling != copy && cs_[static_cast<size_t>(sibling)].status == CopyStatus::pending)
                    terminate_copy(sibling, now, "redundant", false);
            }
            std::vector<int> children;
            for (int d : w.child_deps(task)) children.push_back(w.index_of(w.deps()[static_cast<size_t>(d)].child));
            std::sort(children.begin(), children.end());
            children.erase(std::unique(children.begin(), children.end()), children.end());
            for (int child : children) {
                --parents_pending_[static_cast<size_t>(child)];
                for (int cc : task_copies_[static_cast<size_t>(child)]) refresh_try_start(cc, now);
            }
        } else {
            // a sibling already published; this completion can still lower
            // children's data-ready times
            for (int d : w.child_deps(task)) {
                const int child = w.index_of(w.deps()[static_cast<size_t>(d)].child);
                for (int cc : task_copies_[static_cast<size_t>(child)]) refresh_try_start(cc, now);
            }
        }
        serve_vm(c.vm, now);
    }

    void handle_fail(const QEvent& ev) {
        const int copy = ev.copy;
        CopyState& c = cs_[static_cast<size_t>(copy)];
        const int task = copy_task_[static_cast<size_t>(copy)];
        const double now = ev.time;
        const double begin = attempt_begin_[static_cast<size_t>(copy)];

        // alternating lambda execution slices and gamma pauses from the
        // attempt start; a checkpoint only counts once its pause completed
        const double wall = now - begin;
        const double cycle = cp_.lambda + cp_.gamma;
        const int full_cycles = static_cast<int>(std::floor(wall / cycle));
        const double rem = wall - static_cast<double>(full_cycles) * cycle;
        const double exec = static_cast<double>(full_cycles) * cp_.lambda + std::min(rem, cp_.lambda);

        c.executed += exec;
        c.occupied += wall;
        c.overhead_charged += static_cast<double>(full_cycles) * cp_.gamma;
        for (int k = 1; k <= full_cycles; ++k)
            record(begin + static_cast<double>(k) * cycle, EventKind::checkpoint, copy, c.vm,
                   std::to_string(c.alpha + k));
        c.alpha += full_cycles;
        const double progress_now = progress_[static_cast<size_t>(copy)] + exec;
        const double saved = static_cast<double>(c.alpha) * cp_.lambda;
        c.wasted_failure += progress_now - saved;
        progress_[static_cast<size_t>(copy)] = std::min(saved, progress_now);

        c.status = CopyStatus::failed;
        running_on_[static_cast<size_t>(c.vm)] = -1;
        const int fails = ++log_.failures[spec_.workflow.task(task).id];
        record(now, EventKind::copy_failed, copy, c.vm, "mid-run alpha=" + std::to_string(c.alpha));

        if (cp_.resubmission && fails == rep_count_[static_cast<size_t>(task)] &&
            !task_done_[static_cast<size_t>(task)]) {
            apply_decision(copy, now, ev.window, runtime_on(copy, c.vm));
        } else {
            mark_dead_end(task, now);
        }
        serve_vm(c.vm, now);
    }

    void handle_try_start(const QEvent& ev) {
        if (ev.version != version_[static_cast<size_t>(ev.copy)]) return;  // superseded
        next_try_[static_cast<size_t>(ev.copy)] = std::numeric_limits<double>::infinity();
        attempt_start(ev.copy, ev.time);
    }
};

ExecutionLog Engine::run() {
    const Workflow& w = spec_.workflow;
    n_copies_ = s_.copy_count();
    n_tasks_ = w.task_count();
    n_vms_ = spec_.pool.vm_count();

    if (tet_perfect(s_) > trace_.horizon)
        throw std::runtime_error("schedule horizon exceeds trace horizon");
    for (const TaskCopy& tc : s_.copies)
        if (w.index_of(tc.origin) < 0)
            throw std::runtime_error("schedule references unknown task '" + tc.origin + "'");

    log_.horizon = trace_.horizon;
    copy_task_.resize(static_cast<size_t>(n_copies_));
    task_copies_.assign(static_cast<size_t>(n_tasks_), {});
    rep_count_.assign(static_cast<size_t>(n_tasks_), 0);
    cs_.resize(static_cast<size_t>(n_copies_));
    queue_key_.assign(static_cast<size_t>(n_copies_), 0.0);
    progress_.assign(static_cast<size_t>(n_copies_), 0.0);
    attempt_begin_.assign(static_cast<size_t>(n_copies_), 0.0);
    version_.assign(static_cast<size_t>(n_copies_), 0);
    next_try_.assign(static_cast<size_t>(n_copies_), std::numeric_limits<double>::infinity());
    running_on_.assign(static_cast<size_t>(n_vms_), -1);
    frees_at_.assign(static_cast<size_t>(n_vms_), 0.0);
    waiting_.assign(static_cast<size_t>(n_vms_), {});
    parents_pending_.assign(static_cast<size_t>(n_tasks_), 0);
    task_done_.assign(static_cast<size_t>(n_tasks_), false);

    vm_failing_.assign(static_cast<size_t>(n_vms_), false);
    for (int vm = 0; vm < n_vms_; ++vm)
        vm_failing_[static_cast<size_t>(vm)] = trace_.is_failing(vm_name(vm));

    for (int i = 0; i < n_copies_; ++i) {
        const int task = w.index_of(s_.copies[static_cast<size_t>(i)].origin);
        copy_task_[static_cast<size_t>(i)] = task;
        task_copies_[static_cast<size_t>(task)].push_back(i);
        ++rep_count_[static_cast<size_t>(task)];
        cs_[static_cast<size_t>(i)].copy_id = s_.copies[static_cast<size_t>(i)].copy_id;
        cs_[static_cast<size_t>(i)].vm = s_.assignments[static_cast<size_t>(i)].vm;
        queue_key_[static_cast<size_t>(i)] = s_.assignments[static_cast<size_t>(i)].est;
    }

    for (int t = 0; t < n_tasks_; ++t) {
        std::vector<int> parents;
        for (int d : w.parent_deps(t)) parents.push_back(w.index_of(w.deps()[static_cast<size_t>(d)].parent));
        std::sort(parents.begin(), parents.end());
        parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
        parents_pending_[static_cast<size_t>(t)] = static_cast<int>(parents.size());
    }

    // trace intervals drive vm_up queue service and the event log
    for (const auto& [vm_id, intervals] : trace_.downtimes) {
        const int vm = spec_.pool.index_of(vm_id);
        if (vm < 0) throw std::runtime_error("trace references unknown VM '" + vm_id + "'");
        for (const DowntimeInterval& iv : intervals) {
            queue_.push(QEvent{iv.begin, QKind::vm_down, -1, vm, 0, vm_id});
            queue_.push(QEvent{iv.end, QKind::vm_up, -1, vm, 0, vm_id});
        }
    }

    // entry-task copies are ready at their planned EST
    for (int t = 0; t < n_tasks_; ++t) {
        if (parents_pending_[static_cast<size_t>(t)] > 0) continue;
        for (int c : task_copies_[static_cast<size_t>(t)])
            push_try_start(c, s_.assignments[static_cast<size_t>(c)].est);
    }

    while (!queue_.empty()) {
        const QEvent ev = queue_.top();
        queue_.pop();
        switch (ev.kind) {
            case QKind::finish: handle_finish(ev); break;
            case QKind::fail: handle_fail(ev); break;
            case QKind::vm_down: record(ev.time, EventKind::vm_down, -1, ev.vm, ""); break;
            case QKind::vm_up:
                record(ev.time, EventKind::vm_up, -1, ev.vm, "");
                serve_vm(ev.vm, ev.time);
                break;
            case QKind::try_start: handle_try_start(ev); break;
        }
    }

    log_.completed = true;
    for (int t = 0; t < n_tasks_; ++t)
        if (!task_done_[static_cast<size_t>(t)]) {
            log_.completed = false;
            if (log_.errors.empty())
                log_.errors.push_back("workflow incomplete: task '" + w.task(t).id + "' never completed");
            break;
        }

    std::stable_sort(log_.events.begin(), log_.events.end(),
                     [](const Event& a, const Event& b) { return a.time < b.time; });
    log_.final_states = std::move(cs_);
    return log_;
}

}  // namespace

ExecutionLog simulate(const Schedule& schedule, const FailureTrace& trace,
                      const CheckpointConfig& cp, const WorkflowSpec& spec) {
    validate_checkpoint_config(cp);
    Engine engine(schedule, trace, cp, spec);
    return engine.run();
}

std::string emit_log(const ExecutionLog& log) {
    std::ostringstream out;
    for (const Event& e : log.events)
        out << format_double(e.time) << ',' << event_kind_name(e.kind) << ',' << csv_field(e.copy)
            << ',' << csv_field(e.vm) << ',' << csv_field(e.detail) << '\n';
    return out.str();
}

}  // namespace crch
