#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "crch/model.hpp"

namespace crch {

// One row per task, aligned to the workflow task order.
struct FeatureMatrix {
    std::vector<std::string> ids;       // row labels
    std::vector<std::string> columns;   // feature names
    Eigen::MatrixXd values;
};

// Columns: mean runtime, max mean transfer from parents, priority,
// parent count, child count. Entry tasks get zero parent transfer.
FeatureMatrix extract(const WorkflowSpec& spec);

// Column-wise z-scores with population standard deviation; constant
// columns map to all-zeros so PCA stays well defined.
FeatureMatrix standardize(const FeatureMatrix& m);

std::string features_to_csv(const FeatureMatrix& m);

}  // namespace crch
