#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crch/faults.hpp"
#include "crch/scheduler.hpp"

namespace crch {

struct CheckpointConfig {
    double lambda = 1.0;  // minutes of execution between checkpoints
    double gamma = 0.05;  // overhead per checkpoint
    enum class Mode { fixed, auto_interval } mode = Mode::fixed;
    // Vanilla HEFT and ReplicateAll(k) run without resubmission; the
    // CRCH pipeline keeps it on.
    bool resubmission = true;
};

void validate_checkpoint_config(const CheckpointConfig& cp);

// A configuration with no checkpoints and no resubmission, for the
// baseline algorithms.
CheckpointConfig plain_execution();

enum class CopyStatus { pending, running, failed, done, terminated };

struct CopyState {
    std::string copy_id;
    CopyStatus status = CopyStatus::pending;
    double ast = -1.0;  // first actual start, -1 when never started
    double aft = -1.0;  // set iff status == done
    int alpha = 0;      // completed checkpoints toward the current result
    int vm = -1;        // current VM (changes when a copy moves)

    // accounting across attempts
    double executed = 0.0;          // pure execution minutes
    double occupied = 0.0;          // wall minutes holding a VM
    double overhead_charged = 0.0;  // completed checkpoints x gamma
    double wasted_failure = 0.0;    // execution lost past the last checkpoint
    int attempts = 0;
};

enum class EventKind {
    start,
    checkpoint,
    vm_down,
    vm_up,
    copy_failed,
    resubmit,
    wait_busy,
    terminate_replica,
    complete,
};

const char* event_kind_name(EventKind kind);

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::start;
    std::string copy;  // empty for vm_down/vm_up
    std::string vm;
    std::string detail;
};

struct StoreEntry {
    std::string copy_id;  // first completed copy
    std::string vm;
    bool replicated_payload = false;  // storing VM is failure-prone
    double time = 0.0;
};

struct ExecutionLog {
    std::vector<Event> events;               // time ordered
    std::vector<CopyState> final_states;     // aligned to schedule copies
    std::map<std::string, int> failures;     // per task
    std::map<std::string, StoreEntry> store; // per completed task
    bool completed = false;
    double horizon = 0.0;
    int resubmissions = 0;
    std::vector<std::string> errors;
};

// Deterministic replay of the static schedule under the failure trace:
// busy-VM terminations/waits, mid-run failures, down-at-start failures,
// last-copy resubmission, and per-copy checkpoint overhead.
ExecutionLog simulate(const Schedule& schedule, const FailureTrace& trace,
                      const CheckpointConfig& cp, const WorkflowSpec& spec);

// Earliest-start estimates per VM at decision time; the engine fills
// this from live state, tests construct it directly.
struct VmAvailability {
    std::vector<double> est;        // per VM index
    std::vector<bool> nonfailing;   // per VM index
};

struct ResubmissionDecision {
    bool move = false;
    int vm = -1;          // target VM when moving, current VM otherwise
    double est = 0.0;     // move: estimated start; stay: resume time Y
    double saved = 0.0;   // alpha * lambda
    double remaining = 0.0;  // stay: runtime still to execute
};

// Algorithm-3 move/stay choice for the last failed copy of a task.
// Moving re-executes from zero on the min-EST nonfailing VM and is taken
// iff est + saved < window.end; staying resumes from the last checkpoint
// when the VM comes back. With no nonfailing VM the copy always stays.
ResubmissionDecision decide_resubmission(int alpha, double lambda, double runtime_on_current_vm,
                                         const VmAvailability& avail, int current_vm,
                                         const DowntimeInterval& window);

// Environment-adapted checkpoint interval: grows with sqrt(gamma * MTBF
// scale), clamped to [2*gamma, 10*MTTR median]. Stabler profiles get
// strictly larger intervals at a fixed gamma.
double auto_lambda(const EnvironmentProfile& profile, double gamma);

// Newline-delimited records: time,kind,copy,vm,detail
std::string emit_log(const ExecutionLog& log);

}  // namespace crch
