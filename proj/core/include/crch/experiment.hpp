#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crch/clusterrep.hpp"
#include "crch/ingest.hpp"
#include "crch/metrics.hpp"

namespace crch {

struct AlgorithmChoice {
    enum class Kind { heft, crch, replicate_all } kind = Kind::crch;
    int k = 3;  // extra replicas for replicate-all (k+1 total copies)

    std::string label() const;
};
AlgorithmChoice algorithm_from_name(const std::string& name);

struct ExperimentConfig {
    std::optional<std::string> workflow_path;   // native JSON or DAX (sniffed)
    std::optional<std::string> resources_path;  // DAX resource sidecar
    std::optional<GeneratorConfig> generator;

    int vm_count = 20;
    int reliable = 4;
    std::vector<std::string> environments{"stable"};
    std::vector<AlgorithmChoice> algorithms{AlgorithmChoice{AlgorithmChoice::Kind::crch, 3}};
    int reps = 10;
    std::uint64_t seed = 1;

    bool lambda_auto = true;
    double lambda = 1.0;   // used when lambda_auto is false
    double gamma = 0.05;
    ClusterParams clustering;

    std::string out_dir = "crch-out";
    enum class Format { csv, summary } format = Format::csv;
    bool dump_artifacts = false;
};

struct RunRecord {
    std::string algorithm;
    std::string environment;
    int rep = 0;
    std::uint64_t seed = 0;
    RunMetrics metrics;
};

struct CellSummary {
    std::string algorithm;
    std::string environment;
    Summary summary;
};

struct ExperimentResult {
    Metadata metadata;
    std::vector<RunRecord> runs;    // ordered by (algorithm, environment, rep)
    std::vector<CellSummary> cells;
};

WorkflowSpec load_spec(const ExperimentConfig& config);

// Per-rep seed = base xor rep index; one schedule per algorithm, one
// trace per (environment, rep). Plans: all-ones for HEFT, k+1 copies for
// ReplicateAll(k), clustering-learned counts for CRCH.
ExperimentResult run_experiment(const ExperimentConfig& config);

// One row per run plus two agg=1 rows (mean, stddev) per cell.
std::string experiment_to_csv(const ExperimentResult& result);
std::string experiment_to_json(const ExperimentResult& result);

struct ComparisonRow {
    std::string environment;
    std::string algorithm;
    double usage = 0.0, wastage = 0.0, tet = 0.0, slr = 0.0;
    double completion_rate = 0.0;
    double usage_vs_heft = 0.0, wastage_vs_heft = 0.0;
    double usage_vs_crch = 0.0, wastage_vs_crch = 0.0;
};

// Side-by-side summary per environment; needs >= 2 algorithms.
std::vector<ComparisonRow> compare_cells(const ExperimentResult& result);
std::string comparison_to_csv(const std::vector<ComparisonRow>& rows);
std::string comparison_to_text(const std::vector<ComparisonRow>& rows);

// Full CLI entry points: run the experiment, write report files into
// out_dir, print per the format. Return a process exit code.
int run_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int compare_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace crch
