#include <algorithm>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "crch/experiment.hpp"
#include "crch/textio.hpp"

namespace crch {

std::string AlgorithmChoice::label() const {
    switch (kind) {
        case Kind::heft: return "heft";
        case Kind::crch: return "crch";
        case Kind::replicate_all: return "replicate-all:" + std::to_string(k);
    }
    return "?";
}

AlgorithmChoice algorithm_from_name(const std::string& name) {
    AlgorithmChoice a;
    if (name == "heft") {
        a.kind = AlgorithmChoice::Kind::heft;
        return a;
    }
    if (name == "crch") {
        a.kind = AlgorithmChoice::Kind::crch;
        return a;
    }
    if (name.rfind("replicate-all", 0) == 0) {
        a.kind = AlgorithmChoice::Kind::replicate_all;
        a.k = 3;
        const auto colon = name.find(':');
        if (colon != std::string::npos) a.k = std::stoi(name.substr(colon + 1));
        if (a.k < 1) throw std::runtime_error("replicate-all needs k >= 1");
        return a;
    }
    throw std::runtime_error("unknown algorithm '" + name + "' (expected heft|crch|replicate-all[:k])");
}

WorkflowSpec load_spec(const ExperimentConfig& config) {
    if (config.workflow_path) {
        const std::string bytes = slurp_file(*config.workflow_path);
        const auto first = bytes.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && bytes[first] == '<') {
            DaxPoolOptions options;
            options.vm_count = config.vm_count;
            options.reliable = config.reliable;
            options.seed = config.seed;
            if (config.resources_path) options.sidecar = slurp_file(*config.resources_path);
            return parse_dax(bytes, options);
        }
        return parse_native(bytes);
    }
    if (config.generator) {
        GeneratorConfig gen = *config.generator;
        gen.vm_count = config.vm_count;
        gen.reliable = config.reliable;
        gen.seed = config.seed;
        return generate(gen);
    }
    throw std::runtime_error("no workflow source: pass --workflow or --generate");
}

namespace {

ReplicationPlan plan_for(const AlgorithmChoice& algorithm, const WorkflowSpec& spec,
                         const ClusterParams& clustering, Clustering* clusters_out) {
    switch (algorithm.kind) {
        case AlgorithmChoice::Kind::heft: return uniform_plan(spec, 1);
        case AlgorithmChoice::Kind::replicate_all: return uniform_plan(spec, algorithm.k + 1);
        case AlgorithmChoice::Kind::crch: return learn_replication(spec, clustering, clusters_out);
    }
    throw std::runtime_error("unreachable");
}

CheckpointConfig checkpoint_for(const AlgorithmChoice& algorithm, const ExperimentConfig& config,
                                const EnvironmentProfile& profile) {
    if (algorithm.kind != AlgorithmChoice::Kind::crch) return plain_execution();
    CheckpointConfig cp;
    cp.gamma = config.gamma;
    if (config.lambda_auto && config.gamma > 0.0) {
        cp.mode = CheckpointConfig::Mode::auto_interval;
        cp.lambda = auto_lambda(profile, config.gamma);
    } else {
        cp.lambda = config.lambda;
    }
    cp.resubmission = true;
    validate_checkpoint_config(cp);
    return cp;
}

std::string bool_field(bool b) { return b ? "1" : "0"; }

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.reps < 1) throw std::runtime_error("reps must be >= 1");
    if (config.environments.empty()) throw std::runtime_error("at least one environment is required");
    if (config.algorithms.empty()) throw std::runtime_error("at least one algorithm is required");

    const WorkflowSpec spec = load_spec(config);

    ExperimentResult result;
    result.metadata = spec.metadata;

    for (const AlgorithmChoice& algorithm : config.algorithms) {
        const ReplicationPlan plan = plan_for(algorithm, spec, config.clustering, nullptr);
        const Schedule schedule = overprovision(spec, plan);

        for (const std::string& env_name : config.environments) {
            const EnvironmentProfile profile = environment_profile(env_name);
            const CheckpointConfig cp = checkpoint_for(algorithm, config, profile);
            const double horizon = horizon_for(schedule, cp);

            std::vector<RunMetrics> cell_runs;
            for (int rep = 0; rep < config.reps; ++rep) {
                const std::uint64_t rep_seed = config.seed ^ static_cast<std::uint64_t>(rep);
                const FailureTrace trace = build_trace(profile, spec.pool, horizon, rep_seed);
                const ExecutionLog log = simulate(schedule, trace, cp, spec);
                const RunMetrics metrics = compute(log, schedule, spec);
                cell_runs.push_back(metrics);
                result.runs.push_back(RunRecord{algorithm.label(), env_name, rep, rep_seed, metrics});
            }
            result.cells.push_back(
                CellSummary{algorithm.label(), env_name, aggregate(cell_runs, config.reps)});
        }
    }
    return result;
}

std::string experiment_to_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "workflow,family,size,algorithm,environment,seed,tet,usage,wastage,slr,completed,"
           "resubmissions,agg\n";
    const std::string prefix = csv_field(result.metadata.name) + ',' + csv_field(result.metadata.family) +
                               ',' + std::to_string(result.metadata.size) + ',';
    for (const RunRecord& r : result.runs) {
        out << prefix << r.algorithm << ',' << r.environment << ',' << r.seed << ','
            << format_double(r.metrics.tet) << ',' << format_double(r.metrics.usage) << ','
            << format_double(r.metrics.wastage) << ',' << format_double(r.metrics.slr) << ','
            << bool_field(r.metrics.completed) << ',' << r.metrics.resubmissions << ",0\n";
    }
    for (const CellSummary& c : result.cells) {
        const Summary& s = c.summary;
        out << prefix << c.algorithm << ',' << c.environment << ",mean," << format_double(s.tet.mean)
            << ',' << format_double(s.usage.mean) << ',' << format_double(s.wastage.mean) << ','
            << format_double(s.slr.mean) << ',' << format_double(s.completion_rate) << ','
            << format_double(s.resubmissions.mean) << ",1\n";
        out << prefix << c.algorithm << ',' << c.environment << ",stddev,"
            << format_double(s.tet.stddev) << ',' << format_double(s.usage.stddev) << ','
            << format_double(s.wastage.stddev) << ',' << format_double(s.slr.stddev) << ",,"
            << format_double(s.resubmissions.stddev) << ",1\n";
    }
    return out.str();
}

std::string experiment_to_json(const ExperimentResult& result) {
    std::ostringstream out;
    out << "{\n  \"workflow\": \"" << result.metadata.name << "\",\n  \"family\": \""
        << result.metadata.family << "\",\n  \"size\": " << result.metadata.size
        << ",\n  \"cells\": [\n";
    for (size_t i = 0; i < result.cells.size(); ++i) {
        const CellSummary& c = result.cells[i];
        const Summary& s = c.summary;
        auto field = [&](const char* name, const FieldStats& fs, bool last = false) {
            out << "      \"" << name << "\": {\"mean\": " << format_double(fs.mean)
                << ", \"stddev\": " << format_double(fs.stddev) << "}" << (last ? "\n" : ",\n");
        };
        out << "    {\n      \"algorithm\": \"" << c.algorithm << "\",\n      \"environment\": \""
            << c.environment << "\",\n      \"reps\": " << s.reps
            << ",\n      \"completion_rate\": " << format_double(s.completion_rate) << ",\n";
        field("tet", s.tet);
        field("usage", s.usage);
        field("wastage", s.wastage);
        field("slr", s.slr);
        field("resubmissions", s.resubmissions);
        field("replica_executions", s.replica_executions, true);
        out << "    }" << (i + 1 < result.cells.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

std::vector<ComparisonRow> compare_cells(const ExperimentResult& result) {
    std::vector<std::string> algorithms;
    for (const CellSummary& c : result.cells)
        if (std::find(algorithms.begin(), algorithms.end(), c.algorithm) == algorithms.end())
            algorithms.push_back(c.algorithm);
    if (algorithms.size() < 2) throw std::runtime_error("compare needs at least two algorithms");

    auto cell = [&](const std::string& alg, const std::string& env) -> const CellSummary* {
        for (const CellSummary& c : result.cells)
            if (c.algorithm == alg && c.environment == env) return &c;
        return nullptr;
    };

    std::vector<std::string> environments;
    for (const CellSummary& c : result.cells)
        if (std::find(environments.begin(), environments.end(), c.environment) == environments.end())
            environments.push_back(c.environment);

    std::vector<ComparisonRow> rows;
    for (const std::string& env : environments) {
        const CellSummary* heft_cell = cell("heft", env);
        const CellSummary* crch_cell = cell("crch", env);
        for (const std::string& alg : algorithms) {
            const CellSummary* c = cell(alg, env);
            if (!c) continue;
            ComparisonRow row;
            row.environment = env;
            row.algorithm = alg;
            row.usage = c->summary.usage.mean;
            row.wastage = c->summary.wastage.mean;
            row.tet = c->summary.tet.mean;
            row.slr = c->summary.slr.mean;
            row.completion_rate = c->summary.completion_rate;
            auto ratio = [](double a, double b) { return b > 0.0 ? a / b : 0.0; };
            if (heft_cell) {
                row.usage_vs_heft = ratio(row.usage, heft_cell->summary.usage.mean);
                row.wastage_vs_heft = ratio(row.wastage, heft_cell->summary.wastage.mean);
            }
            if (crch_cell) {
                row.usage_vs_crch = ratio(row.usage, crch_cell->summary.usage.mean);
                row.wastage_vs_crch = ratio(row.wastage, crch_cell->summary.wastage.mean);
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    out << "environment,algorithm,tet,usage,wastage,slr,completion_rate,usage_vs_heft,"
           "wastage_vs_heft,usage_vs_crch,wastage_vs_crch\n";
    for (const ComparisonRow& r : rows)
        out << r.environment << ',' << r.algorithm << ',' << format_double(r.tet) << ','
            << format_double(r.usage) << ',' << format_double(r.wastage) << ','
            << format_double(r.slr) << ',' << format_double(r.completion_rate) << ','
            << format_double(r.usage_vs_heft) << ',' << format_double(r.wastage_vs_heft) << ','
            << format_double(r.usage_vs_crch) << ',' << format_double(r.wastage_vs_crch) << '\n';
    return out.str();
}

std::string comparison_to_text(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    std::string env;
    for (const ComparisonRow& r : rows) {
        if (r.environment != env) {
            env = r.environment;
            out << "environment: " << env << '\n';
        }
        char line[256];
        std::snprintf(line, sizeof(line),
                      "  %-16s tet %10.2f  usage %10.2f  wastage %10.2f  slr %6.3f  done %4.0f%%"
                      "  usage/heft %5.2f  wastage/crch %5.2f\n",
                      r.algorithm.c_str(), r.tet, r.usage, r.wastage, r.slr,
                      r.completion_rate * 100.0, r.usage_vs_heft, r.wastage_vs_crch);
        out << line;
    }
    return out.str();
}

namespace {

void write_reports(const ExperimentConfig& config, const ExperimentResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    spit_file((fs::path(config.out_dir) / "runs.csv").string(), experiment_to_csv(result));
    spit_file((fs::path(config.out_dir) / "summary.json").string(), experiment_to_json(result));
}

void write_dumps(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    const WorkflowSpec spec = load_spec(config);
    fs::create_directories(config.out_dir);
    const FeatureMatrix features = extract(spec);
    spit_file((fs::path(config.out_dir) / "features.csv").string(), features_to_csv(features));
    spit_file((fs::path(config.out_dir) / "workflow.json").string(), emit_native(spec));

    for (const AlgorithmChoice& algorithm : config.algorithms) {
        Clustering clusters;
        const ReplicationPlan plan =
            plan_for(algorithm, spec, config.clustering,
                     algorithm.kind == AlgorithmChoice::Kind::crch ? &clusters : nullptr);
        const Schedule schedule = overprovision(spec, plan);
        spit_file((fs::path(config.out_dir) / ("schedule_" + algorithm.label() + ".csv")).string(),
                  schedule_to_csv(schedule, spec));
        if (algorithm.kind == AlgorithmChoice::Kind::crch)
            spit_file((fs::path(config.out_dir) / "dendrogram.csv").string(),
                      dendrogram_to_csv(clusters));

        for (const std::string& env_name : config.environments) {
            const EnvironmentProfile profile = environment_profile(env_name);
            const CheckpointConfig cp = checkpoint_for(algorithm, config, profile);
            const double horizon = horizon_for(schedule, cp);
            const FailureTrace trace = build_trace(profile, spec.pool, horizon, config.seed);
            spit_file((fs::path(config.out_dir) / ("trace_" + env_name + "_rep0.json")).string(),
                      emit_trace(trace));
            const ExecutionLog log = simulate(schedule, trace, cp, spec);
            spit_file((fs::path(config.out_dir) /
                       ("log_" + algorithm.label() + "_" + env_name + "_rep0.csv"))
                          .string(),
                      emit_log(log));
        }
    }
}

}  // namespace

int run_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const ExperimentResult result = run_experiment(config);
        write_reports(config, result);
        if (config.dump_artifacts) write_dumps(config);
        if (config.format == ExperimentConfig::Format::csv) {
            out << experiment_to_csv(result);
        } else {
            for (const CellSummary& c : result.cells) {
                char line[256];
                std::snprintf(line, sizeof(line),
                              "%-16s %-9s tet %10.2f±%-8.2f usage %10.2f wastage %10.2f slr %6.3f "
                              "done %4.0f%%\n",
                              c.algorithm.c_str(), c.environment.c_str(), c.summary.tet.mean,
                              c.summary.tet.stddev, c.summary.usage.mean, c.summary.wastage.mean,
                              c.summary.slr.mean, c.summary.completion_rate * 100.0);
                out << line;
            }
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

int compare_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.algorithms.size() < 2)
            throw std::runtime_error("compare needs at least two algorithms (--alg a,b)");
        const ExperimentResult result = run_experiment(config);
        write_reports(config, result);
        const std::vector<ComparisonRow> rows = compare_cells(result);
        namespace fs = std::filesystem;
        spit_file((fs::path(config.out_dir) / "compare.csv").string(), comparison_to_csv(rows));
        out << comparison_to_text(rows);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace crch
