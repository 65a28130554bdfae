#include "crch/model.hpp"

#include <algorithm>
#include <cmath>

namespace crch {

Workflow::Workflow(std::vector<Task> tasks, std::vector<Dependency> deps)
    : tasks_(std::move(tasks)), deps_(std::move(deps)) {
    index_.reserve(tasks_.size());
    for (int i = 0; i < task_count(); ++i) {
        // first occurrence wins; duplicates are flagged by validate()
        index_.emplace(tasks_[static_cast<size_t>(i)].id, i);
    }
    parent_deps_.resize(tasks_.size());
    child_deps_.resize(tasks_.size());
    for (int d = 0; d < static_cast<int>(deps_.size()); ++d) {
        const Dependency& dep = deps_[static_cast<size_t>(d)];
        const int p = index_of(dep.parent);
        const int c = index_of(dep.child);
        if (p < 0 || c < 0) continue;
        child_deps_[static_cast<size_t>(p)].push_back(d);
        parent_deps_[static_cast<size_t>(c)].push_back(d);
    }
}

int Workflow::index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

std::vector<int> Workflow::entry_tasks() const {
    std::vector<int> out;
    for (int i = 0; i < task_count(); ++i)
        if (parent_deps_[static_cast<size_t>(i)].empty()) out.push_back(i);
    return out;
}

std::vector<int> Workflow::exit_tasks() const {
    std::vector<int> out;
    for (int i = 0; i < task_count(); ++i)
        if (child_deps_[static_cast<size_t>(i)].empty()) out.push_back(i);
    return out;
}

int ResourcePool::index_of(const std::string& id) const {
    for (int i = 0; i < vm_count(); ++i)
        if (vms[static_cast<size_t>(i)] == id) return i;
    return -1;
}

int ResourcePool::reliable_count() const {
    return static_cast<int>(std::count(reliable.begin(), reliable.end(), true));
}

void ValidationReport::add(Severity sev, std::string msg) {
    if (sev == Severity::error) ok = false;
    issues.emplace_back(sev, std::move(msg));
}

namespace {

// Iterative three-color DFS over the dep adjacency.
bool has_cycle(const Workflow& w) {
    const int n = w.task_count();
    std::vector<int> color(static_cast<size_t>(n), 0);  // 0 white, 1 gray, 2 black
    std::vector<std::pair<int, size_t>> stack;
    for (int root = 0; root < n; ++root) {
        if (color[static_cast<size_t>(root)] != 0) continue;
        stack.emplace_back(root, 0);
        color[static_cast<size_t>(root)] = 1;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            const auto& out = w.child_deps(node);
            if (next < out.size()) {
                const int child = w.index_of(w.deps()[static_cast<size_t>(out[next])].child);
                ++next;
                if (child < 0) continue;
                if (color[static_cast<size_t>(child)] == 1) return true;
                if (color[static_cast<size_t>(child)] == 0) {
                    color[static_cast<size_t>(child)] = 1;
                    stack.emplace_back(child, 0);
                }
            } else {
                color[static_cast<size_t>(node)] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

}  // namespace

ValidationReport validate(const Workflow& workflow, const ResourcePool& pool) {
    ValidationReport report;
    const int n = workflow.task_count();
    const int v = pool.vm_count();

    if (n == 0) {
        report.add(Severity::error, "no entry task: workflow is empty");
        return report;
    }
    if (v == 0) report.add(Severity::error, "resource pool is empty");

    std::unordered_map<std::string, int> seen;
    for (const Task& t : workflow.tasks()) {
        if (++seen[t.id] == 2)
            report.add(Severity::error, "duplicate task id '" + t.id + "'");
        if (static_cast<int>(t.runtimes.size()) != v)
            report.add(Severity::error, "task '" + t.id + "' has " +
                                            std::to_string(t.runtimes.size()) +
                                            " runtimes but pool has " + std::to_string(v) + " VMs");
        for (double r : t.runtimes)
            if (!(r > 0.0) || !std::isfinite(r)) {
                report.add(Severity::error, "task '" + t.id + "' has a nonpositive runtime");
                break;
            }
    }

    for (const Dependency& d : workflow.deps()) {
        if (workflow.index_of(d.parent) < 0)
            report.add(Severity::error, "dependency references unknown parent '" + d.parent + "'");
        if (workflow.index_of(d.child) < 0)
            report.add(Severity::error, "dependency references unknown child '" + d.child + "'");
        if (d.parent == d.child)
            report.add(Severity::error, "self dependency on '" + d.parent + "'");
        if (d.data < 0.0 || !std::isfinite(d.data))
            report.add(Severity::error, "negative data volume on edge " + d.parent + "->" + d.child);
    }

    if (has_cycle(workflow)) report.add(Severity::error, "cycle in dependency graph");

    if (workflow.entry_tasks().empty()) report.add(Severity::error, "no entry task");
    if (workflow.exit_tasks().empty()) report.add(Severity::error, "no exit task");

    if (static_cast<int>(pool.rates.size()) != v) {
        report.add(Severity::error, "rates matrix row count != VM count");
    } else {
        for (int i = 0; i < v; ++i) {
            if (static_cast<int>(pool.rates[static_cast<size_t>(i)].size()) != v) {
                report.add(Severity::error, "rates matrix row " + std::to_string(i) + " has wrong length");
                continue;
            }
            for (int j = 0; j < v; ++j) {
                if (i == j) continue;
                const double r = pool.rates[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (!(r > 0.0) || !std::isfinite(r)) {
                    report.add(Severity::error, "nonpositive transfer rate between '" +
                                                    pool.vms[static_cast<size_t>(i)] + "' and '" +
                                                    pool.vms[static_cast<size_t>(j)] + "'");
                }
            }
        }
    }
    if (static_cast<int>(pool.reliable.size()) != v)
        report.add(Severity::error, "reliable flags not aligned to VM list");
    else if (pool.reliable_count() < 1)
        report.add(Severity::error, "at least one reliable VM is required");

    return report;
}

double mean_runtime(const Task& task) {
    double sum = 0.0;
    for (double r : task.runtimes) sum += r;
    return task.runtimes.empty() ? 0.0 : sum / static_cast<double>(task.runtimes.size());
}

double mean_transfer(const Dependency& dep, const ResourcePool& pool) {
    if (dep.data == 0.0) return 0.0;
    const int v = pool.vm_count();
    if (v < 2) return 0.0;
    double sum = 0.0;
    int pairs = 0;
    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j) {
            if (i == j) continue;
            sum += dep.data / pool.rate(i, j);
            ++pairs;
        }
    return sum / static_cast<double>(pairs);
}

double transfer_time(double data, int from_vm, int to_vm, const ResourcePool& pool) {
    if (from_vm == to_vm || data == 0.0) return 0.0;
    return data / pool.rate(from_vm, to_vm);
}

}  // namespace crch
