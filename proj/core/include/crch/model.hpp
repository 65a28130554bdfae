#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace crch {

// Durations are minutes, data volumes are abstract data units, rates are
// data units per minute. Task ids are opaque strings.

struct Task {
    std::string id;
    std::vector<double> runtimes;  // one entry per VM, aligned to ResourcePool::vms
    int priority = 0;              // higher = more critical
};

struct Dependency {
    std::string parent;
    std::string child;
    double data = 0.0;
};

// Immutable task DAG. Adjacency is built tolerantly on construction;
// semantic problems (cycles, dangling endpoints, bad runtimes) are
// reported by validate(), not thrown here.
class Workflow {
public:
    Workflow() = default;
    Workflow(std::vector<Task> tasks, std::vector<Dependency> deps);

    const std::vector<Task>& tasks() const { return tasks_; }
    const std::vector<Dependency>& deps() const { return deps_; }

    int task_count() const { return static_cast<int>(tasks_.size()); }
    // -1 when the id is unknown
    int index_of(const std::string& id) const;
    const Task& task(int idx) const { return tasks_[static_cast<size_t>(idx)]; }

    // dep indices whose child is `idx` / whose parent is `idx`
    const std::vector<int>& parent_deps(int idx) const { return parent_deps_[static_cast<size_t>(idx)]; }
    const std::vector<int>& child_deps(int idx) const { return child_deps_[static_cast<size_t>(idx)]; }

    std::vector<int> entry_tasks() const;
    std::vector<int> exit_tasks() const;

private:
    std::vector<Task> tasks_;
    std::vector<Dependency> deps_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<int>> parent_deps_;
    std::vector<std::vector<int>> child_deps_;
};

// Full-mesh VM set. Same-VM transfer cost is zero by convention; the
// diagonal of `rates` is ignored.
struct ResourcePool {
    std::vector<std::string> vms;
    std::vector<std::vector<double>> rates;  // row-major, rates[from][to]
    std::vector<bool> reliable;              // aligned to vms

    int vm_count() const { return static_cast<int>(vms.size()); }
    int index_of(const std::string& id) const;
    bool is_reliable(int idx) const { return reliable[static_cast<size_t>(idx)]; }
    int reliable_count() const;
    double rate(int from, int to) const { return rates[static_cast<size_t>(from)][static_cast<size_t>(to)]; }
};

enum class Severity { warning, error };

struct ValidationReport {
    bool ok = true;
    std::vector<std::pair<Severity, std::string>> issues;

    void add(Severity sev, std::string msg);
};

struct Metadata {
    std::string name = "workflow";
    std::string family = "unknown";
    int size = 0;
};

struct WorkflowSpec {
    Workflow workflow;
    ResourcePool pool;
    Metadata metadata;
};

// Reports every problem instead of throwing: cycles, dangling dep
// endpoints, runtime-vector/VM-count mismatches, nonpositive runtimes
// and rates, missing entry/exit tasks.
ValidationReport validate(const Workflow& workflow, const ResourcePool& pool);

// Arithmetic mean of the task's runtime over all VMs.
double mean_runtime(const Task& task);

// Mean of data/rate over all ordered distinct VM pairs. Zero when the
// volume is zero or fewer than two VMs exist.
double mean_transfer(const Dependency& dep, const ResourcePool& pool);

// Transfer minutes for `data` units between two concrete VMs (zero when equal).
double transfer_time(double data, int from_vm, int to_vm, const ResourcePool& pool);

}  // namespace crch
