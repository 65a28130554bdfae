#include <nlohmann/json.hpp>

#include <sstream>
#include <stdexcept>

#include "crch/ingest.hpp"
#include "crch/textio.hpp"

namespace crch {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& key, const std::string& what) {
    throw std::runtime_error("native schema error at '" + key + "': " + what);
}

const json& need(const json& obj, const std::string& key, const std::string& scope) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(scope + key, "missing key");
    return *it;
}

double need_number(const json& obj, const std::string& key, const std::string& scope) {
    const json& v = need(obj, key, scope);
    if (!v.is_number()) schema_error(scope + key, "expected a number");
    return v.get<double>();
}

std::string need_string(const json& obj, const std::string& key, const std::string& scope) {
    const json& v = need(obj, key, scope);
    if (!v.is_string()) schema_error(scope + key, "expected a string");
    return v.get<std::string>();
}

void quote_into(std::ostringstream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
        switch (c) {
            case '"': out << "\\\""; break;
            case '\\': out << "\\\\"; break;
            case '\n': out << "\\n"; break;
            case '\t': out << "\\t"; break;
            case '\r': out << "\\r"; break;
            default: out << c;
        }
    }
    out << '"';
}

}  // namespace

WorkflowSpec parse_native(const std::string& bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("native parse error: ") + e.what());
    }
    if (!doc.is_object()) schema_error("$", "top level must be an object");

    WorkflowSpec spec;
    spec.metadata.name = doc.value("name", std::string("workflow"));
    spec.metadata.family = doc.value("family", std::string("unknown"));

    const json& jvms = need(doc, "vms", "");
    if (!jvms.is_array()) schema_error("vms", "expected a list");
    for (const json& jv : jvms) {
        spec.pool.vms.push_back(need_string(jv, "id", "vms."));
        const json& rel = need(jv, "reliable", "vms.");
        if (!rel.is_boolean()) schema_error("vms.reliable", "expected a boolean");
        spec.pool.reliable.push_back(rel.get<bool>());
    }
    const size_t v = spec.pool.vms.size();

    const json& jrates = need(doc, "rates", "");
    if (!jrates.is_array()) schema_error("rates", "expected a matrix");
    for (const json& row : jrates) {
        if (!row.is_array()) schema_error("rates", "expected a row-major matrix");
        std::vector<double> r;
        for (const json& x : row) {
            if (!x.is_number()) schema_error("rates", "expected numbers");
            r.push_back(x.get<double>());
        }
        spec.pool.rates.push_back(std::move(r));
    }

    std::vector<Task> tasks;
    const json& jtasks = need(doc, "tasks", "");
    if (!jtasks.is_array()) schema_error("tasks", "expected a list");
    for (const json& jt : jtasks) {
        Task t;
        t.id = need_string(jt, "id", "tasks.");
        t.priority = jt.contains("priority") ? jt.at("priority").get<int>() : 0;
        const json& jr = need(jt, "runtimes", "tasks.");
        if (!jr.is_array()) schema_error("tasks.runtimes", "expected a list");
        for (const json& x : jr) t.runtimes.push_back(x.get<double>());
        if (t.runtimes.size() != v)
            schema_error("tasks.runtimes",
                         "row length " + std::to_string(t.runtimes.size()) + " != vm count " + std::to_string(v));
        tasks.push_back(std::move(t));
    }

    std::vector<Dependency> deps;
    const json& jdeps = need(doc, "deps", "");
    if (!jdeps.is_array()) schema_error("deps", "expected a list");
    for (const json& jd : jdeps) {
        Dependency d;
        d.parent = need_string(jd, "parent", "deps.");
        d.child = need_string(jd, "child", "deps.");
        d.data = need_number(jd, "data", "deps.");
        deps.push_back(std::move(d));
    }

    spec.workflow = Workflow(std::move(tasks), std::move(deps));
    spec.metadata.size = doc.contains("size") ? doc.at("size").get<int>() : spec.workflow.task_count();
    require_valid(spec);
    return spec;
}

std::string emit_native(const WorkflowSpec& spec) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"name\": ";
    quote_into(out, spec.metadata.name);
    out << ",\n  \"family\": ";
    quote_into(out, spec.metadata.family);
    out << ",\n  \"size\": " << spec.metadata.size << ",\n";

    out << "  \"tasks\": [\n";
    const auto& tasks = spec.workflow.tasks();
    for (size_t i = 0; i < tasks.size(); ++i) {
        out << "    {\"id\": ";
        quote_into(out, tasks[i].id);
        out << ", \"priority\": " << tasks[i].priority << ", \"runtimes\": [";
        for (size_t j = 0; j < tasks[i].runtimes.size(); ++j) {
            if (j) out << ", ";
            out << format_double(tasks[i].runtimes[j]);
        }
        out << "]}" << (i + 1 < tasks.size() ? "," : "") << "\n";
    }
    out << "  ],\n";

    out << "  \"deps\": [\n";
    const auto& deps = spec.workflow.deps();
    for (size_t i = 0; i < deps.size(); ++i) {
        out << "    {\"parent\": ";
        quote_into(out, deps[i].parent);
        out << ", \"child\": ";
        quote_into(out, deps[i].child);
        out << ", \"data\": " << format_double(deps[i].data) << "}"
            << (i + 1 < deps.size() ? "," : "") << "\n";
    }
    out << "  ],\n";

    out << "  \"vms\": [\n";
    for (size_t i = 0; i < spec.pool.vms.size(); ++i) {
        out << "    {\"id\": ";
        quote_into(out, spec.pool.vms[i]);
        out << ", \"reliable\": " << (spec.pool.reliable[i] ? "true" : "false") << "}"
            << (i + 1 < spec.pool.vms.size() ? "," : "") << "\n";
    }
    out << "  ],\n";

    out << "  \"rates\": [\n";
    for (size_t i = 0; i < spec.pool.rates.size(); ++i) {
        out << "    [";
        for (size_t j = 0; j < spec.pool.rates[i].size(); ++j) {
            if (j) out << ", ";
            out << format_double(i == j ? 0.0 : spec.pool.rates[i][j]);
        }
        out << "]" << (i + 1 < spec.pool.rates.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

ResourceSidecar parse_resources(const std::string& bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("resource sidecar parse error: ") + e.what());
    }
    ResourceSidecar side;
    const json& jvms = need(doc, "vms", "");
    for (const json& jv : jvms) {
        side.pool.vms.push_back(need_string(jv, "id", "vms."));
        side.pool.reliable.push_back(need(jv, "reliable", "vms.").get<bool>());
    }
    for (const json& row : need(doc, "rates", "")) {
        std::vector<double> r;
        for (const json& x : row) r.push_back(x.get<double>());
        side.pool.rates.push_back(std::move(r));
    }
    for (const json& x : need(doc, "factors", "")) side.factors.push_back(x.get<double>());
    if (side.factors.size() != side.pool.vms.size())
        schema_error("factors", "length != vm count");
    return side;
}

std::string emit_resources(const ResourceSidecar& sidecar) {
    std::ostringstream out;
    out << "{\n  \"vms\": [\n";
    for (size_t i = 0; i < sidecar.pool.vms.size(); ++i) {
        out << "    {\"id\": ";
        quote_into(out, sidecar.pool.vms[i]);
        out << ", \"reliable\": " << (sidecar.pool.reliable[i] ? "true" : "false") << "}"
            << (i + 1 < sidecar.pool.vms.size() ? "," : "") << "\n";
    }
    out << "  ],\n  \"rates\": [\n";
    for (size_t i = 0; i < sidecar.pool.rates.size(); ++i) {
        out << "    [";
        for (size_t j = 0; j < sidecar.pool.rates[i].size(); ++j) {
            if (j) out << ", ";
            out << format_double(i == j ? 0.0 : sidecar.pool.rates[i][j]);
        }
        out << "]" << (i + 1 < sidecar.pool.rates.size() ? "," : "") << "\n";
    }
    out << "  ],\n  \"factors\": [";
    for (size_t i = 0; i < sidecar.factors.size(); ++i) {
        if (i) out << ", ";
        out << format_double(sidecar.factors[i]);
    }
    out << "]\n}\n";
    return out.str();
}

void require_valid(const WorkflowSpec& spec) {
    const ValidationReport report = validate(spec.workflow, spec.pool);
    if (report.ok) return;
    for (const auto& [sev, msg] : report.issues)
        if (sev == Severity::error) throw std::runtime_error(msg);
    throw std::runtime_error("workflow failed validation");
}

}  // namespace crch
