#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

#include "crch/ingest.hpp"
#include "crch/rng.hpp"
#include "crch/textio.hpp"

namespace crch {

namespace {

// Minimal XML tokenizer for the DAX subset. Tracks line numbers for
// error reporting; skips declarations, comments, and text content.
struct XmlTag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool open = false;     // <name ...>
    bool close = false;    // </name> (self-closing tags set both)
    int line = 0;
};

class XmlScanner {
public:
    explicit XmlScanner(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("DAX parse error at line " + std::to_string(line_) + ": " + what);
    }

    bool next(XmlTag& tag) {
        while (pos_ < text_.size()) {
            const char c = take();
            if (c != '<') continue;
            if (peek() == '?') {  // declaration
                skip_until("?>");
                continue;
            }
            if (text_.compare(pos_, 3, "!--") == 0) {
                skip_until("-->");
                continue;
            }
            if (peek() == '!') {  // DOCTYPE and friends
                skip_until(">");
                continue;
            }
            return read_tag(tag);
        }
        return false;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    char take() {
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    void skip_until(const std::string& delim) {
        const size_t at = text_.find(delim, pos_);
        if (at == std::string::npos) fail("unterminated '" + delim + "' construct");
        while (pos_ < at + delim.size()) take();
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(peek()))) take();
    }

    std::string read_name() {
        std::string name;
        while (pos_ < text_.size()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.') {
                name += take();
            } else {
                break;
            }
        }
        if (name.empty()) fail("expected a name");
        return name;
    }

    bool read_tag(XmlTag& tag) {
        tag = XmlTag{};
        tag.line = line_;
        if (peek() == '/') {
            take();
            tag.name = read_name();
            tag.close = true;
            skip_ws();
            if (take() != '>') fail("malformed closing tag </" + tag.name + ">");
            return true;
        }
        tag.name = read_name();
        tag.open = true;
        for (;;) {
            skip_ws();
            const char c = peek();
            if (c == '>') {
                take();
                return true;
            }
            if (c == '/') {
                take();
                if (take() != '>') fail("malformed self-closing tag <" + tag.name + ">");
                tag.close = true;
                return true;
            }
            const std::string key = read_name();
            skip_ws();
            if (take() != '=') fail("attribute '" + key + "' missing '='");
            skip_ws();
            const char quote = take();
            if (quote != '"' && quote != '\'') fail("attribute '" + key + "' missing quotes");
            std::string value;
            for (;;) {
                const char d = take();
                if (d == quote) break;
                value += d;
            }
            tag.attrs[key] = value;
        }
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
};

struct DaxJob {
    std::string id;
    double runtime = 0.0;
    std::map<std::string, double> reads;   // file -> size
    std::map<std::string, double> writes;  // file -> size
};

double attr_number(const XmlTag& tag, const std::string& key, double fallback, bool required) {
    auto it = tag.attrs.find(key);
    if (it == tag.attrs.end()) {
        if (required)
            throw std::runtime_error("DAX parse error at line " + std::to_string(tag.line) +
                                     ": <" + tag.name + "> missing attribute '" + key + "'");
        return fallback;
    }
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw std::runtime_error("DAX parse error at line " + std::to_string(tag.line) +
                                 ": attribute '" + key + "' is not a number");
    }
}

std::string attr_string(const XmlTag& tag, const std::string& key) {
    auto it = tag.attrs.find(key);
    if (it == tag.attrs.end())
        throw std::runtime_error("DAX parse error at line " + std::to_string(tag.line) +
                                 ": <" + tag.name + "> missing attribute '" + key + "'");
    return it->second;
}

ResourceSidecar synthesize_resources(const DaxPoolOptions& options) {
    ResourceSidecar side;
    if (options.vm_count < 1) throw std::runtime_error("vm count must be >= 1");
    Rng rng(splitmix64(options.seed ^ 0x6461782d706f6f6cULL));  // "dax-pool"
    for (int i = 0; i < options.vm_count; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "v%02d", i);
        side.pool.vms.emplace_back(buf);
        side.pool.reliable.push_back(i >= options.vm_count - options.reliable);
    }
    for (int i = 0; i < options.vm_count; ++i) side.factors.push_back(rng.uniform(0.5, 1.5));
    side.pool.rates.assign(static_cast<size_t>(options.vm_count),
                           std::vector<double>(static_cast<size_t>(options.vm_count), 0.0));
    for (int i = 0; i < options.vm_count; ++i)
        for (int j = 0; j < options.vm_count; ++j)
            if (i != j) side.pool.rates[static_cast<size_t>(i)][static_cast<size_t>(j)] = rng.uniform(0.5, 2.0);
    return side;
}

}  // namespace

WorkflowSpec parse_dax(const std::string& xml, const DaxPoolOptions& options,
                       std::vector<std::string>* warnings) {
    XmlScanner scanner(xml);
    std::vector<DaxJob> jobs;
    std::map<std::string, size_t> job_index;
    // child id -> parent ids, in document order
    std::vector<std::pair<std::string, std::vector<std::string>>> child_blocks;

    DaxJob* current_job = nullptr;
    std::string current_child;
    std::set<std::string> warned_elements;

    XmlTag tag;
    while (scanner.next(tag)) {
        if (tag.name == "adag" || tag.name == "dax") continue;
        if (tag.name == "job") {
            if (tag.close && !tag.open) {
                current_job = nullptr;
                continue;
            }
            DaxJob job;
            job.id = attr_string(tag, "id");
            job.runtime = attr_number(tag, "runtime", 0.0, true);
            if (job.runtime <= 0.0)
                throw std::runtime_error("DAX parse error at line " + std::to_string(tag.line) +
                                         ": job '" + job.id + "' has nonpositive runtime");
            if (job_index.count(job.id))
                throw std::runtime_error("DAX semantic error: duplicate job id '" + job.id + "'");
            job_index[job.id] = jobs.size();
            jobs.push_back(std::move(job));
            current_job = tag.close ? nullptr : &jobs.back();
        } else if (tag.name == "uses") {
            if (!tag.open) continue;
            if (!current_job) {
                if (warnings) warnings->push_back("line " + std::to_string(tag.line) + ": <uses> outside a <job>, ignored");
                continue;
            }
            std::string file;
            if (tag.attrs.count("file")) file = tag.attrs.at("file");
            else file = attr_string(tag, "name");
            const double size = attr_number(tag, "size", 0.0, false);
            const std::string link = tag.attrs.count("link") ? tag.attrs.at("link") : "";
            if (link == "input") {
                current_job->reads[file] += size;
            } else if (link == "output") {
                current_job->writes[file] += size;
            } else {  // unlabeled files count as shared on both sides
                current_job->reads[file] += size;
                current_job->writes[file] += size;
            }
        } else if (tag.name == "child") {
            if (tag.open) {
                current_child = attr_string(tag, "ref");
                child_blocks.emplace_back(current_child, std::vector<std::string>{});
            }
            if (tag.close) current_child.clear();
        } else if (tag.name == "parent") {
            if (!tag.open) continue;
            if (current_child.empty())
                throw std::runtime_error("DAX parse error at line " + std::to_string(tag.line) +
                                         ": <parent> outside a <child> block");
            child_blocks.back().second.push_back(attr_string(tag, "ref"));
        } else {
            if (warnings && warned_elements.insert(tag.name).second)
                warnings->push_back("line " + std::to_string(tag.line) + ": element <" + tag.name + "> ignored");
        }
    }

    ResourceSidecar side =
        options.sidecar ? parse_resources(*options.sidecar) : synthesize_resources(options);
    const int v = side.pool.vm_count();

    std::vector<Task> tasks;
    tasks.reserve(jobs.size());
    for (const DaxJob& job : jobs) {
        Task t;
        t.id = job.id;
        for (int i = 0; i < v; ++i) t.runtimes.push_back(job.runtime * side.factors[static_cast<size_t>(i)]);
        tasks.push_back(std::move(t));
    }

    std::vector<Dependency> deps;
    for (const auto& [child, parents] : child_blocks) {
        auto cit = job_index.find(child);
        if (cit == job_index.end())
            throw std::runtime_error("DAX semantic error: <child ref=\"" + child + "\"> references an undeclared job");
        for (const std::string& parent : parents) {
            auto pit = job_index.find(parent);
            if (pit == job_index.end())
                throw std::runtime_error("DAX semantic error: <parent ref=\"" + parent +
                                         "\"> references an undeclared job");
            // data = size of files the parent writes and the child reads
            double data = 0.0;
            for (const auto& [file, size] : jobs[pit->second].writes) {
                auto rit = jobs[cit->second].reads.find(file);
                if (rit != jobs[cit->second].reads.end()) data += std::min(size, rit->second);
            }
            deps.push_back(Dependency{parent, child, data});
        }
    }

    WorkflowSpec spec;
    spec.workflow = Workflow(std::move(tasks), std::move(deps));
    spec.pool = std::move(side.pool);
    spec.metadata.name = "dax";
    spec.metadata.family = "dax";
    spec.metadata.size = spec.workflow.task_count();
    require_valid(spec);
    return spec;
}

}  // namespace crch
