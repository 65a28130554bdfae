#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "crch/clusterrep.hpp"
#include "crch/textio.hpp"

namespace crch {

PcaResult pca(const FeatureMatrix& m, double cov_threshold) {
    if (!(cov_threshold > 0.0) || cov_threshold > 1.0)
        throw std::runtime_error("cov threshold must be in (0, 1]");
    const Eigen::MatrixXd& x = m.values;
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    if (n == 0 || d == 0) throw std::runtime_error("pca: empty feature matrix");

    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw std::runtime_error("pca: eigendecomposition failed");

    // eigenvalues ascending from Eigen; walk them in descending order
    std::vector<std::pair<double, Eigen::Index>> order;
    for (Eigen::Index i = 0; i < d; ++i)
        order.emplace_back(std::max(0.0, solver.eigenvalues()(i)), i);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    double total = 0.0;
    for (const auto& [val, idx] : order) total += val;

    PcaResult out;
    if (total < 1e-12) {
        // all-constant features: any direction carries the (zero) variance
        out.components = Eigen::MatrixXd::Zero(d, 1);
        out.components(0, 0) = 1.0;
        out.explained = {1.0};
        out.projected = x * out.components;
        return out;
    }

    std::vector<Eigen::Index> kept;
    double covered = 0.0;
    for (const auto& [val, idx] : order) {
        kept.push_back(idx);
        covered += val / total;
        if (covered >= cov_threshold - 1e-12) break;
    }

    out.components.resize(d, static_cast<Eigen::Index>(kept.size()));
    for (size_t k = 0; k < kept.size(); ++k) {
        Eigen::VectorXd v = solver.eigenvectors().col(kept[k]);
        // deterministic sign: the largest-magnitude entry is positive
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0.0) v = -v;
        out.components.col(static_cast<Eigen::Index>(k)) = v;
        out.explained.push_back(order[k].first / total);
    }
    out.projected = x * out.components;
    return out;
}

double affinity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() == 0 || b.rows() == 0) throw std::runtime_error("affinity: empty point set");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.rows(); ++j) sum += (a.row(i) - b.row(j)).norm();
    return sum / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
}

double triplet_score(double d_ij, const std::vector<double>& neighbor_distances, double margin) {
    const size_t r = neighbor_distances.size();
    if (r < 2) throw std::runtime_error("triplet score needs at least 2 neighbors");
    double sum = 0.0;
    for (double d_ik : neighbor_distances) sum += d_ij - d_ik;
    return d_ij + margin / (static_cast<double>(r) - 1.0) * sum;
}

namespace {

struct ClusterState {
    std::vector<int> members;  // row indices, ascending
    std::string repr;          // smallest member id
    bool active = true;
};

double percentile75(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const size_t rank = static_cast<size_t>(std::ceil(0.75 * static_cast<double>(values.size())));
    return values[std::min(values.size() - 1, rank == 0 ? 0 : rank - 1)];
}

}  // namespace

Clustering agglomerate(const Eigen::MatrixXd& points, const std::vector<std::string>& ids,
                       const AgglomerateOptions& options) {
    const int n = static_cast<int>(points.rows());
    if (static_cast<int>(ids.size()) != n) throw std::runtime_error("agglomerate: ids not aligned to points");
    if (options.target_k < 1) throw std::runtime_error("agglomerate: target_k must be >= 1");
    if (n < options.target_k) throw std::runtime_error("agglomerate: fewer points than target_k");

    std::vector<ClusterState> clusters(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        clusters[static_cast<size_t>(i)].members = {i};
        clusters[static_cast<size_t>(i)].repr = ids[static_cast<size_t>(i)];
    }

    // pairwise affinity; kept exact under merging via the size-weighted
    // average update (mean of the union of cross pairs)
    std::vector<std::vector<double>> dist(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    std::vector<double> singleton_dists;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = (points.row(i) - points.row(j)).norm();
            dist[static_cast<size_t>(i)][static_cast<size_t>(j)] = d;
            dist[static_cast<size_t>(j)][static_cast<size_t>(i)] = d;
            singleton_dists.push_back(d);
        }

    const double stop_threshold =
        options.stop_distance >= 0.0 ? options.stop_distance : percentile75(std::move(singleton_dists));

    Clustering out;
    int active_count = n;

    while (active_count > options.target_k) {
        // canonical iteration order: active clusters by representative id
        std::vector<int> order;
        for (int i = 0; i < n; ++i)
            if (clusters[static_cast<size_t>(i)].active) order.push_back(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return clusters[static_cast<size_t>(a)].repr < clusters[static_cast<size_t>(b)].repr;
        });

        double min_dist = std::numeric_limits<double>::infinity();
        for (size_t a = 0; a < order.size(); ++a)
            for (size_t b = a + 1; b < order.size(); ++b)
                min_dist = std::min(min_dist, dist[static_cast<size_t>(order[a])][static_cast<size_t>(order[b])]);
        if (min_dist > stop_threshold) break;  // dendrogram cut

        // globally minimal triplet score over (cluster, neighbor) pairs
        double best_score = std::numeric_limits<double>::infinity();
        int best_i = -1, best_j = -1;
        std::pair<std::string, std::string> best_key;
        for (int ci : order) {
            std::vector<int> others;
            for (int cj : order)
                if (cj != ci) others.push_back(cj);
            std::sort(others.begin(), others.end(), [&](int a, int b) {
                const double da = dist[static_cast<size_t>(ci)][static_cast<size_t>(a)];
                const double db = dist[static_cast<size_t>(ci)][static_cast<size_t>(b)];
                if (da != db) return da < db;
                return clusters[static_cast<size_t>(a)].repr < clusters[static_cast<size_t>(b)].repr;
            });
            const size_t r = std::min<size_t>(static_cast<size_t>(options.neighbors), others.size());
            others.resize(r);
            std::vector<double> neighbor_d;
            for (int k : others) neighbor_d.push_back(dist[static_cast<size_t>(ci)][static_cast<size_t>(k)]);
            for (size_t jx = 0; jx < others.size(); ++jx) {
                const int cj = others[jx];
                const double d_ij = neighbor_d[jx];
                double score = d_ij;
                if (neighbor_d.size() >= 2) {
                    score = triplet_score(d_ij, neighbor_d, options.margin);
                }
                std::pair<std::string, std::string> key{clusters[static_cast<size_t>(ci)].repr,
                                                        clusters[static_cast<size_t>(cj)].repr};
                if (key.second < key.first) std::swap(key.first, key.second);
                if (score < best_score || (score == best_score && key < best_key)) {
                    best_score = score;
                    best_key = key;
                    best_i = ci;
                    best_j = cj;
                }
            }
        }
        if (best_i < 0) break;  // single cluster left

        ClusterState& keep = clusters[static_cast<size_t>(std::min(best_i, best_j))];
        ClusterState& gone = clusters[static_cast<size_t>(std::max(best_i, best_j))];
        out.history.push_back(MergeEvent{best_key.first, best_key.second,
                                         dist[static_cast<size_t>(best_i)][static_cast<size_t>(best_j)],
                                         best_score});

        const double wk = static_cast<double>(keep.members.size());
        const double wg = static_cast<double>(gone.members.size());
        const int ik = static_cast<int>(&keep - clusters.data());
        const int ig = static_cast<int>(&gone - clusters.data());
        for (int c = 0; c < n; ++c) {
            if (!clusters[static_cast<size_t>(c)].active || c == ik || c == ig) continue;
            const double merged = (wk * dist[static_cast<size_t>(ik)][static_cast<size_t>(c)] +
                                   wg * dist[static_cast<size_t>(ig)][static_cast<size_t>(c)]) /
                                  (wk + wg);
            dist[static_cast<size_t>(ik)][static_cast<size_t>(c)] = merged;
            dist[static_cast<size_t>(c)][static_cast<size_t>(ik)] = merged;
        }
        keep.members.insert(keep.members.end(), gone.members.begin(), gone.members.end());
        std::sort(keep.members.begin(), keep.members.end());
        keep.repr = std::min(keep.repr, gone.repr);
        gone.active = false;
        --active_count;
    }

    for (const ClusterState& c : clusters) {
        if (!c.active) continue;
        std::vector<std::string> members;
        for (int i : c.members) members.push_back(ids[static_cast<size_t>(i)]);
        std::sort(members.begin(), members.end());
        out.clusters.push_back(std::move(members));
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

ReplicationPlan assign_counts(const Clustering& clustering, const CountPolicy& policy) {
    struct Ranked {
        const std::vector<std::string>* members;
        double mean_weight;
    };
    std::vector<Ranked> ranked;
    for (const auto& cluster : clustering.clusters) {
        double sum = 0.0;
        for (const std::string& id : cluster) {
            auto it = policy.task_weight.find(id);
            if (it != policy.task_weight.end()) sum += it->second;
        }
        ranked.push_back({&cluster, cluster.empty() ? 0.0 : sum / static_cast<double>(cluster.size())});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.members->size() != b.members->size()) return a.members->size() > b.members->size();
        if (a.mean_weight != b.mean_weight) return a.mean_weight > b.mean_weight;
        return a.members->front() < b.members->front();
    });

    ReplicationPlan plan;
    for (size_t i = 0; i < ranked.size(); ++i) {
        const int count = std::min(static_cast<int>(i) + 1, std::max(1, policy.max_count));
        for (const std::string& id : *ranked[i].members) plan.counts[id] = count;
    }
    return plan;
}

ReplicationPlan learn_replication(const WorkflowSpec& spec, const ClusterParams& params,
                                  Clustering* clustering_out) {
    const FeatureMatrix features = standardize(extract(spec));
    const PcaResult reduced = pca(features, params.cov_threshold);

    AgglomerateOptions options;
    options.target_k = std::min(params.target_k, spec.workflow.task_count());
    options.neighbors = params.neighbors;
    options.margin = params.margin;
    const Clustering clustering = agglomerate(reduced.projected, features.ids, options);
    if (clustering_out) *clustering_out = clustering;

    CountPolicy policy;
    policy.max_count = params.target_k;
    for (const Task& t : spec.workflow.tasks()) policy.task_weight[t.id] = mean_runtime(t);
    return assign_counts(clustering, policy);
}

std::string dendrogram_to_csv(const Clustering& clustering) {
    std::ostringstream out;
    out << "step,left,right,distance,score\n";
    for (size_t i = 0; i < clustering.history.size(); ++i) {
        const MergeEvent& e = clustering.history[i];
        out << i << ',' << csv_field(e.left) << ',' << csv_field(e.right) << ','
            << format_double(e.distance) << ',' << format_double(e.score) << '\n';
    }
    return out.str();
}

ReplicationPlan uniform_plan(const WorkflowSpec& spec, int copies) {
    if (copies < 1) throw std::runtime_error("replication count must be >= 1");
    ReplicationPlan plan;
    for (const Task& t : spec.workflow.tasks()) plan.counts[t.id] = copies;
    return plan;
}

}  // namespace crch
