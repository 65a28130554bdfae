#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "crch/ingest.hpp"
#include "crch/rng.hpp"

namespace crch {

Family family_from_name(const std::string& name) {
    if (name == "layered-random" || name == "layered_random") return Family::layered_random;
    if (name == "montage-like" || name == "montage") return Family::montage_like;
    if (name == "cybershake-like" || name == "cybershake") return Family::cybershake_like;
    if (name == "ligo-like" || name == "ligo" || name == "inspiral") return Family::ligo_like;
    if (name == "sipht-like" || name == "sipht") return Family::sipht_like;
    throw std::runtime_error("unknown workflow family '" + name + "'");
}

std::string family_name(Family family) {
    switch (family) {
        case Family::layered_random: return "layered-random";
        case Family::montage_like: return "montage-like";
        case Family::cybershake_like: return "cybershake-like";
        case Family::ligo_like: return "ligo-like";
        case Family::sipht_like: return "sipht-like";
    }
    return "unknown";
}

namespace {

std::string task_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%04d", i);
    return buf;
}

// Split `size` tasks into layers whose relative widths follow `profile`.
std::vector<int> spread_layers(int size, const std::vector<double>& profile) {
    const double total = [&] {
        double s = 0.0;
        for (double p : profile) s += p;
        return s;
    }();
    std::vector<int> widths(profile.size(), 0);
    int assigned = 0;
    for (size_t i = 0; i < profile.size(); ++i) {
        widths[i] = std::max(1, static_cast<int>(profile[i] / total * size));
        assigned += widths[i];
    }
    // trim or pad the widest layers to hit the exact task count
    while (assigned > size) {
        auto it = std::max_element(widths.begin(), widths.end());
        if (*it <= 1) break;
        --*it;
        --assigned;
    }
    while (assigned < size) {
        auto it = std::max_element(widths.begin(), widths.end());
        ++*it;
        ++assigned;
    }
    return widths;
}

}  // namespace

WorkflowSpec generate(const GeneratorConfig& config) {
    if (config.size < 1) throw std::runtime_error("generator size must be >= 1");
    if (config.vm_count < 1) throw std::runtime_error("generator vm count must be >= 1");

    Rng rng(splitmix64(config.seed ^ (0x67656eULL + static_cast<std::uint64_t>(config.family) * 131)));

    double runtime_scale = 1.0;
    double data_scale = 1.0;
    if (config.family == Family::ligo_like) runtime_scale = 4.0;        // CPU heavy
    if (config.family == Family::cybershake_like) data_scale = 4.0;     // data heavy

    // ---- layer structure ------------------------------------------------
    std::vector<std::vector<int>> layers;  // task indices per layer
    std::vector<Task> tasks;
    std::vector<Dependency> deps;

    auto add_task = [&](int layer) {
        const int idx = static_cast<int>(tasks.size());
        Task t;
        t.id = task_name(idx);
        t.priority = rng.uniform_int(0, 2);
        for (int v = 0; v < config.vm_count; ++v)
            t.runtimes.push_back(runtime_scale * rng.uniform(config.runtime_min, config.runtime_max));
        tasks.push_back(std::move(t));
        layers[static_cast<size_t>(layer)].push_back(idx);
        return idx;
    };
    auto add_dep = [&](int parent, int child) {
        deps.push_back(Dependency{tasks[static_cast<size_t>(parent)].id,
                                  tasks[static_cast<size_t>(child)].id,
                                  data_scale * rng.uniform(config.data_min, config.data_max)});
    };

    if (config.size == 1) {
        layers.resize(1);
        add_task(0);
    } else if (config.family == Family::sipht_like) {
        // many independent chains that merge late into a short tail
        const int chain_len = 4;
        const int tail = std::min(3, std::max(1, config.size / 20));
        const int chain_tasks = std::max(1, config.size - tail);
        const int chains = std::max(1, (chain_tasks + chain_len - 1) / chain_len);
        layers.resize(static_cast<size_t>(chain_len + tail));
        std::vector<int> last_of_chain;
        int made = 0;
        for (int c = 0; c < chains && made < chain_tasks; ++c) {
            int prev = -1;
            for (int j = 0; j < chain_len && made < chain_tasks; ++j, ++made) {
                const int idx = add_task(j);
                if (prev >= 0) add_dep(prev, idx);
                prev = idx;
            }
            last_of_chain.push_back(prev);
        }
        int prev_tail = -1;
        for (int j = 0; j < tail; ++j) {
            const int idx = add_task(chain_len + j);
            if (j == 0) {
                for (int leaf : last_of_chain) add_dep(leaf, idx);
            } else {
                add_dep(prev_tail, idx);
            }
            prev_tail = idx;
        }
    } else {
        std::vector<double> profile;
        switch (config.family) {
            case Family::montage_like:
                // wide fan-in/fan-out: broad layers funneling into narrow ones
                profile = {4.0, 4.0, 1.0, 4.0, 1.0};
                break;
            case Family::cybershake_like:
                profile = {1.0, 5.0, 5.0, 1.0};
                break;
            default: {  // layered_random, ligo_like
                const int n_layers = std::clamp(config.size / 10, 3, 10);
                profile.assign(static_cast<size_t>(n_layers), 1.0);
                for (double& p : profile) p = 0.5 + rng.uniform();
                break;
            }
        }
        const std::vector<int> widths = spread_layers(config.size, profile);
        layers.resize(widths.size());
        for (size_t l = 0; l < widths.size(); ++l)
            for (int k = 0; k < widths[l]; ++k) add_task(static_cast<int>(l));
        for (size_t l = 1; l < layers.size(); ++l) {
            const auto& prev = layers[l - 1];
            for (int idx : layers[l]) {
                const int max_parents = std::min<int>(3, static_cast<int>(prev.size()));
                const int n_parents = rng.uniform_int(1, max_parents);
                std::vector<int> picks(prev.begin(), prev.end());
                for (int p = 0; p < n_parents; ++p) {
                    const int j = rng.uniform_int(p, static_cast<int>(picks.size()) - 1);
                    std::swap(picks[static_cast<size_t>(p)], picks[static_cast<size_t>(j)]);
                    add_dep(picks[static_cast<size_t>(p)], idx);
                }
            }
        }
    }

    // ---- resource pool ---------------------------------------------------
    ResourcePool pool;
    for (int i = 0; i < config.vm_count; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "v%02d", i);
        pool.vms.emplace_back(buf);
        pool.reliable.push_back(i >= config.vm_count - config.reliable);
    }
    pool.rates.assign(static_cast<size_t>(config.vm_count),
                      std::vector<double>(static_cast<size_t>(config.vm_count), 0.0));
    for (int i = 0; i < config.vm_count; ++i)
        for (int j = 0; j < config.vm_count; ++j)
            if (i != j)
                pool.rates[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    rng.uniform(config.rate_min, config.rate_max);

    WorkflowSpec spec;
    spec.workflow = Workflow(std::move(tasks), std::move(deps));
    spec.pool = std::move(pool);
    spec.metadata.name = family_name(config.family) + "-" + std::to_string(config.size) + "-s" +
                         std::to_string(config.seed);
    spec.metadata.family = family_name(config.family);
    spec.metadata.size = config.size;
    require_valid(spec);
    return spec;
}

}  // namespace crch
