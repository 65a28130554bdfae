#pragma once

#include <string>
#include <vector>

#include "crch/clusterrep.hpp"
#include "crch/model.hpp"

namespace crch {

struct TaskCopy {
    std::string copy_id;  // "<origin>#<ordinal>"
    std::string origin;
    int ordinal = 0;      // 0 = original, 1.. = replicas
};

struct CopyAssignment {
    int vm = -1;
    double est = 0.0;
    double eft = 0.0;
};

struct Schedule {
    std::vector<TaskCopy> copies;             // placement order
    std::vector<CopyAssignment> assignments;  // aligned to copies
    std::vector<double> rank;                 // B-level per workflow task index

    int copy_count() const { return static_cast<int>(copies.size()); }
    int copy_index(const std::string& copy_id) const;
    std::vector<int> copies_of_task(const std::string& origin) const;
};

// b(t) = w_t + max over children of (mean transfer + b(child)); exit
// tasks have b = w_t. Indexed by workflow task order.
std::vector<double> b_levels(const WorkflowSpec& spec);

// List scheduling in descending B-level order (ties: smaller task id).
// Each task goes to the VM with minimum insertion-based EST; EST ties
// fall to minimum EFT, then the smaller VM index.
Schedule heft(const WorkflowSpec& spec);

// HEFT originals plus replica placement: once every original child of a
// task has been scheduled, the task's replicas go to min-EST VMs,
// avoiding VMs that already hold a sibling copy when possible. Replicas
// of childless tasks are placed after the main pass.
Schedule overprovision(const WorkflowSpec& spec, const ReplicationPlan& plan);

// Backtracks from the copy with maximum EFT through predecessors whose
// finish (plus transfer) meets the current copy's start. Returned in
// topological order.
std::vector<int> critical_path(const Schedule& schedule, const WorkflowSpec& spec);

// Makespan of the static schedule: max EFT over copies, 0 when empty.
double tet_perfect(const Schedule& schedule);

std::string schedule_to_csv(const Schedule& schedule, const WorkflowSpec& spec);

}  // namespace crch
