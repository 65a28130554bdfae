#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "crch/features.hpp"

namespace crch {

struct PcaResult {
    Eigen::MatrixXd components;      // columns are orthonormal basis vectors
    std::vector<double> explained;   // variance fraction per retained component
    Eigen::MatrixXd projected;       // rows = points in the reduced space
};

// Keeps the smallest number of components whose cumulative explained
// variance reaches `cov_threshold`. Expects a standardized matrix.
PcaResult pca(const FeatureMatrix& m, double cov_threshold);

struct MergeEvent {
    std::string left;      // smallest member id of each side
    std::string right;
    double distance = 0.0;  // affinity between the merged clusters
    double score = 0.0;     // triplet score that selected the pair
};

struct Clustering {
    std::vector<std::vector<std::string>> clusters;  // disjoint cover, member ids sorted
    std::vector<MergeEvent> history;
};

// Mean Euclidean distance over all cross pairs of two point sets.
double affinity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Triplet merge criterion: D(i,j) plus margin-weighted separation from
// the remaining neighbors of i. `neighbor_distances` holds D(i,k) for
// every k in the neighbor set of i (j included).
double triplet_score(double d_ij, const std::vector<double>& neighbor_distances, double margin);

struct AgglomerateOptions {
    int target_k = 3;       // stop when this many clusters remain
    int neighbors = 3;      // R closest clusters considered by the triplet loss
    double margin = 0.5;
    // merge stops early once the minimum inter-cluster distance exceeds
    // this threshold; negative = derive the 75th percentile of pairwise
    // point distances
    double stop_distance = -1.0;
};

// Bottom-up merging from singletons; ids label the rows of `points`.
Clustering agglomerate(const Eigen::MatrixXd& points, const std::vector<std::string>& ids,
                       const AgglomerateOptions& options);

struct ReplicationPlan {
    std::map<std::string, int> counts;  // task id -> total scheduled copies (>= 1)

    int count_of(const std::string& id) const {
        auto it = counts.find(id);
        return it == counts.end() ? 1 : it->second;
    }
    int total_copies() const {
        int n = 0;
        for (const auto& [id, c] : counts) n += c;
        return n;
    }
};

struct CountPolicy {
    int max_count = 3;
    // mean runtime per task, used to break equal-size ties (heavier
    // clusters are ranked earlier and replicated less)
    std::map<std::string, double> task_weight;
};

// Clusters sorted by size descending get repCount = 1-based rank,
// clamped to the policy maximum. repCount includes the original copy.
ReplicationPlan assign_counts(const Clustering& clustering, const CountPolicy& policy);

// Convenience: full Algorithm-1 pipeline from a validated spec.
struct ClusterParams {
    double cov_threshold = 0.3;
    int target_k = 3;
    int neighbors = 3;
    double margin = 0.5;
};
ReplicationPlan learn_replication(const WorkflowSpec& spec, const ClusterParams& params,
                                  Clustering* clustering_out = nullptr);

std::string dendrogram_to_csv(const Clustering& clustering);

ReplicationPlan uniform_plan(const WorkflowSpec& spec, int copies);

}  // namespace crch
