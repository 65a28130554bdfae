// Experiment harness for the CRCH fault-tolerant workflow scheduling
// workbench: schedules workflows with HEFT / CRCH / ReplicateAll(k),
// replays them under sampled VM failure traces, and reports TET,
// Resource Usage, Resource Wastage, and SLR.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "crch/experiment.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct CliOptions {
    std::string workflow;
    std::string generate_arg;
    std::string resources;
    int vms = 20;
    int reliable = 4;
    std::string envs = "stable";
    std::string algs = "crch";
    int reps = 10;
    std::uint64_t seed = 1;
    std::string lambda_arg = "auto";
    double gamma = 0.05;
    double cov = 0.3;
    int max_rep = 3;
    int neighbors = 3;
    double margin = 0.5;
    std::string out_dir = "crch-out";
    std::string format = "csv";
    bool dump = false;
};

crch::ExperimentConfig to_config(const CliOptions& opt) {
    crch::ExperimentConfig config;
    if (!opt.workflow.empty()) config.workflow_path = opt.workflow;
    if (!opt.resources.empty()) config.resources_path = opt.resources;
    if (!opt.generate_arg.empty()) {
        const auto colon = opt.generate_arg.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--generate expects FAMILY:SIZE");
        crch::GeneratorConfig gen;
        gen.family = crch::family_from_name(opt.generate_arg.substr(0, colon));
        gen.size = std::stoi(opt.generate_arg.substr(colon + 1));
        config.generator = gen;
    }
    config.vm_count = opt.vms;
    config.reliable = opt.reliable;
    config.environments = split_list(opt.envs);
    config.algorithms.clear();
    for (const std::string& name : split_list(opt.algs))
        config.algorithms.push_back(crch::algorithm_from_name(name));
    config.reps = opt.reps;
    config.seed = opt.seed;
    if (const char* env_seed = std::getenv("CRCH_SEED"))
        config.seed = std::strtoull(env_seed, nullptr, 10);
    if (opt.lambda_arg == "auto") {
        config.lambda_auto = true;
    } else {
        config.lambda_auto = false;
        config.lambda = std::stod(opt.lambda_arg);
    }
    config.gamma = opt.gamma;
    config.clustering.cov_threshold = opt.cov;
    config.clustering.target_k = opt.max_rep;
    config.clustering.neighbors = opt.neighbors;
    config.clustering.margin = opt.margin;
    config.out_dir = opt.out_dir;
    config.format = opt.format == "summary" ? crch::ExperimentConfig::Format::summary
                                            : crch::ExperimentConfig::Format::csv;
    config.dump_artifacts = opt.dump;
    return config;
}

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--workflow", opt.workflow, "workflow file (native JSON or DAX XML)");
    cmd->add_option("--generate", opt.generate_arg,
                    "synthesize a workflow, FAMILY:SIZE (families: layered-random, montage-like, "
                    "cybershake-like, ligo-like, sipht-like)");
    cmd->add_option("--resources", opt.resources, "resource sidecar for DAX inputs");
    cmd->add_option("--vms", opt.vms, "VM count for generated/DAX pools");
    cmd->add_option("--reliable", opt.reliable, "number of reliable VMs");
    cmd->add_option("--env", opt.envs, "environments, comma separated (stable,normal,unstable,none)");
    cmd->add_option("--alg", opt.algs, "algorithms, comma separated (heft,crch,replicate-all[:k])");
    cmd->add_option("--reps", opt.reps, "replications per (algorithm, environment)");
    cmd->add_option("--seed", opt.seed, "base seed (env CRCH_SEED overrides)");
    cmd->add_option("--lambda", opt.lambda_arg, "checkpoint interval in minutes, or 'auto'");
    cmd->add_option("--gamma", opt.gamma, "checkpoint overhead in minutes");
    cmd->add_option("--cov", opt.cov, "PCA coverage-of-variance threshold");
    cmd->add_option("--max-rep", opt.max_rep, "maximum replication count (cluster count)");
    cmd->add_option("--neighbors", opt.neighbors, "triplet-loss neighbor count R");
    cmd->add_option("--margin", opt.margin, "triplet-loss margin");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--format", opt.format, "stdout format: csv or summary")
        ->check(CLI::IsMember({"csv", "summary"}));
    cmd->add_flag("--dump", opt.dump, "also dump features, dendrogram, schedules, traces, logs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CRCH workflow scheduling workbench"};
    app.require_subcommand(1);

    CliOptions run_opt;
    CLI::App* run_cmd = app.add_subcommand("run", "run experiments and emit CSV + summary reports");
    add_common_flags(run_cmd, run_opt);

    CliOptions cmp_opt;
    cmp_opt.algs = "heft,crch";
    CLI::App* cmp_cmd =
        app.add_subcommand("compare", "run >= 2 algorithms and print usage/wastage ratios");
    add_common_flags(cmp_cmd, cmp_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return crch::run_command(to_config(run_opt), std::cout, std::cerr);
        return crch::compare_command(to_config(cmp_opt), std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
