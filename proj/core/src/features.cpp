#include <cmath>
#include <sstream>

#include "crch/features.hpp"
#include "crch/textio.hpp"

namespace crch {

FeatureMatrix extract(const WorkflowSpec& spec) {
    const Workflow& w = spec.workflow;
    const int n = w.task_count();

    FeatureMatrix m;
    m.columns = {"mean_runtime", "max_parent_transfer", "priority", "parent_count", "child_count"};
    m.values.resize(n, 5);
    m.ids.reserve(static_cast<size_t>(n));

    for (int i = 0; i < n; ++i) {
        const Task& t = w.task(i);
        m.ids.push_back(t.id);
        double max_transfer = 0.0;
        for (int d : w.parent_deps(i))
            max_transfer = std::max(max_transfer, mean_transfer(w.deps()[static_cast<size_t>(d)], spec.pool));
        m.values(i, 0) = mean_runtime(t);
        m.values(i, 1) = max_transfer;
        m.values(i, 2) = static_cast<double>(t.priority);
        m.values(i, 3) = static_cast<double>(w.parent_deps(i).size());
        m.values(i, 4) = static_cast<double>(w.child_deps(i).size());
    }
    return m;
}

FeatureMatrix standardize(const FeatureMatrix& m) {
    FeatureMatrix out = m;
    const auto rows = m.values.rows();
    if (rows == 0) return out;
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
        const double mean = m.values.col(c).mean();
        const double var = (m.values.col(c).array() - mean).square().sum() / static_cast<double>(rows);
        const double sd = std::sqrt(var);
        if (sd < 1e-12) {
            out.values.col(c).setZero();
        } else {
            out.values.col(c) = (m.values.col(c).array() - mean) / sd;
        }
    }
    return out;
}

std::string features_to_csv(const FeatureMatrix& m) {
    std::ostringstream out;
    out << "task";
    for (const std::string& c : m.columns) out << ',' << c;
    out << '\n';
    for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
        out << csv_field(m.ids[static_cast<size_t>(r)]);
        for (Eigen::Index c = 0; c < m.values.cols(); ++c) out << ',' << format_double(m.values(r, c));
        out << '\n';
    }
    return out.str();
}

}  // namespace crch
