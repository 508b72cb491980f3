#include "ncx/knowledge_graph.hpp"

#include "ncx/checksum.hpp"
#include "ncx/error.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace ncx {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::limit: return "limit";
    case ErrorKind::io: return "io";
    case ErrorKind::format: return "format";
    case ErrorKind::checksum: return "checksum";
    case ErrorKind::version: return "version";
    case ErrorKind::invalid_argument: return "invalid_argument";
    }
    return "unknown";
}

namespace {

template <typename T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        fields.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return fields;
}

bool skippable(std::string_view line) {
    return line.empty() || line.front() == '#';
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    return line;
}

// Breadth-first closure over one of the concept hierarchy directions.
std::vector<ConceptId> concept_closure(const std::vector<std::vector<ConceptId>>& next,
                                       ConceptId start, std::size_t depth) {
    std::vector<ConceptId> out{start};
    std::vector<std::uint8_t> seen(next.size(), 0);
    seen[index_of(start)] = 1;
    std::vector<ConceptId> frontier{start};
    for (std::size_t level = 0; level < depth && !frontier.empty(); ++level) {
        std::vector<ConceptId> upcoming;
        for (ConceptId c : frontier) {
            for (ConceptId n : next[index_of(c)]) {
                if (seen[index_of(n)])
                    continue;
                seen[index_of(n)] = 1;
                upcoming.push_back(n);
                out.push_back(n);
            }
        }
        frontier = std::move(upcoming);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

class GraphBuilder {
public:
    explicit GraphBuilder(std::vector<GraphIssue>& issues) : issues_(issues) {}

    void read_nodes(std::istream& in) {
        std::string raw;
        std::size_t line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            auto line = strip_cr(raw);
            if (skippable(line))
                continue;
            auto fields = split_tabs(line);
            if (fields.size() != 2 || fields[0].empty()) {
                issue("nodes", line_no, "malformed record, expected id<TAB>space");
                continue;
            }
            NodeSpace space;
            if (fields[1] == "instance")
                space = NodeSpace::instance;
            else if (fields[1] == "concept")
                space = NodeSpace::ontology;
            else {
                issue("nodes", line_no, "unknown space '" + std::string(fields[1]) + "'");
                continue;
            }
            std::string id(fields[0]);
            auto [it, inserted] = declared_.emplace(id, space);
            if (!inserted) {
                if (it->second != space)
                    issue("nodes", line_no, "conflicting space for duplicate node '" + id + "'");
                continue;
            }
            if (space == NodeSpace::instance)
                g_.instances_.intern(id);
            else
                g_.concepts_.intern(id);
        }
        g_.adjacency_.resize(g_.instances_.size());
        g_.psi_inverse_.resize(g_.instances_.size());
        g_.broader_.resize(g_.concepts_.size());
        g_.narrower_.resize(g_.concepts_.size());
        g_.psi_.resize(g_.concepts_.size());
    }

    void read_edges(std::istream& in) {
        std::string raw;
        std::size_t line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            auto line = strip_cr(raw);
            if (skippable(line))
                continue;
            auto fields = split_tabs(line);
            if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
                issue("edges", line_no, "malformed record, expected src<TAB>dst<TAB>kind");
                continue;
            }
            auto src = lookup(fields[0], line_no);
            auto dst = lookup(fields[1], line_no);
            if (!src || !dst)
                continue;
            const auto kind = fields[2];
            if (kind == "instance") {
                if (*src != NodeSpace::instance || *dst != NodeSpace::instance) {
                    issue("edges", line_no, "space partition violation: instance edge must join two instances");
                    continue;
                }
                auto a = *g_.instances_.find(fields[0]);
                auto b = *g_.instances_.find(fields[1]);
                if (a == b) {
                    ++g_.dropped_self_loops_;
                    continue;
                }
                g_.adjacency_[index_of(a)].push_back(b);
                g_.adjacency_[index_of(b)].push_back(a);
            } else if (kind == "broader") {
                if (*src != NodeSpace::ontology || *dst != NodeSpace::ontology) {
                    issue("edges", line_no, "space partition violation: broader edge must join two concepts");
                    continue;
                }
                auto narrow = *g_.concepts_.find(fields[0]);
                auto broad = *g_.concepts_.find(fields[1]);
                if (narrow == broad)
                    continue;
                g_.broader_[index_of(narrow)].push_back(broad);
                g_.narrower_[index_of(broad)].push_back(narrow);
            } else if (kind == "ontology") {
                if (*src != NodeSpace::instance || *dst != NodeSpace::ontology) {
                    issue("edges", line_no, "space partition violation: ontology edge must map instance to concept");
                    continue;
                }
                auto v = *g_.instances_.find(fields[0]);
                auto c = *g_.concepts_.find(fields[1]);
                g_.psi_[index_of(c)].push_back(v);
                g_.psi_inverse_[index_of(v)].push_back(c);
            } else {
                issue("edges", line_no, "unknown edge kind '" + std::string(kind) + "'");
            }
        }
    }

    KnowledgeGraph finish() {
        for (auto& v : g_.adjacency_) sort_unique(v);
        for (auto& v : g_.broader_) sort_unique(v);
        for (auto& v : g_.narrower_) sort_unique(v);
        for (auto& v : g_.psi_) sort_unique(v);
        for (auto& v : g_.psi_inverse_) sort_unique(v);
        return std::move(g_);
    }

private:
    std::optional<NodeSpace> lookup(std::string_view id, std::size_t line_no) {
        auto it = declared_.find(std::string(id));
        if (it == declared_.end()) {
            issue("edges", line_no, "edge endpoint undeclared: '" + std::string(id) + "'");
            return std::nullopt;
        }
        return it->second;
    }

    void issue(std::string source, std::size_t line, std::string message) {
        issues_.push_back({std::move(source), line, std::move(message)});
    }

    KnowledgeGraph g_;
    std::unordered_map<std::string, NodeSpace> declared_;
    std::vector<GraphIssue>& issues_;
};

InstanceId KnowledgeGraph::instance(std::string_view name) const {
    auto id = instances_.find(name);
    if (!id)
        throw Error(ErrorKind::not_found, "unknown entity '" + std::string(name) + "'");
    return *id;
}

ConceptId KnowledgeGraph::concept_id(std::string_view name) const {
    auto id = concepts_.find(name);
    if (!id)
        throw Error(ErrorKind::not_found, "unknown concept '" + std::string(name) + "'");
    return *id;
}

bool KnowledgeGraph::adjacent(InstanceId a, InstanceId b) const {
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<ConceptId> KnowledgeGraph::broadened_concepts(ConceptId c, std::size_t depth) const {
    return concept_closure(broader_, c, depth);
}

std::vector<ConceptId> KnowledgeGraph::narrower_descendants(ConceptId c, std::size_t depth) const {
    return concept_closure(narrower_, c, depth);
}

std::vector<InstanceId> KnowledgeGraph::extended_instances(ConceptId c, std::size_t depth) const {
    std::vector<InstanceId> out;
    for (ConceptId d : narrower_descendants(c, depth)) {
        auto psi = instances_of(d);
        out.insert(out.end(), psi.begin(), psi.end());
    }
    sort_unique(out);
    return out;
}

GraphStats KnowledgeGraph::stats() const {
    GraphStats s;
    s.instance_count = instance_count();
    s.concept_count = concept_count();
    s.dropped_self_loops = dropped_self_loops_;
    std::size_t degree_sum = 0;
    for (const auto& nb : adjacency_) {
        degree_sum += nb.size();
        ++s.degree_histogram[nb.size()];
    }
    s.instance_edge_count = degree_sum / 2;
    for (const auto& up : broader_) s.broader_edge_count += up.size();
    for (const auto& psi : psi_) s.ontology_pair_count += psi.size();
    return s;
}

std::string KnowledgeGraph::fingerprint() const {
    std::ostringstream canon;
    canon << "I" << instances_.size() << '\n';
    for (const auto& n : instances_.names()) canon << n << '\n';
    canon << "C" << concepts_.size() << '\n';
    for (const auto& n : concepts_.names()) canon << n << '\n';
    auto dump = [&canon](const auto& lists) {
        for (const auto& list : lists) {
            for (auto x : list) canon << index_of(x) << ' ';
            canon << '\n';
        }
    };
    dump(adjacency_);
    dump(broader_);
    dump(psi_);
    return checksum_hex(canon.str());
}

GraphLoadResult parse_graph(std::istream& nodes, std::istream& edges) {
    GraphLoadResult result;
    GraphBuilder builder(result.issues);
    builder.read_nodes(nodes);
    builder.read_edges(edges);
    result.graph = builder.finish();
    return result;
}

std::string format_issue(const GraphIssue& issue) {
    return issue.source + ":" + std::to_string(issue.line) + ": " + issue.message;
}

KnowledgeGraph load_graph(std::istream& nodes, std::istream& edges) {
    auto result = parse_graph(nodes, edges);
    if (!result.issues.empty()) {
        const auto& first = result.issues.front();
        const auto kind = first.message.starts_with("malformed") ? ErrorKind::parse : ErrorKind::validation;
        throw Error(kind, format_issue(first));
    }
    return std::move(result.graph);
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io, "cannot open '" + path + "'");
    return in;
}

} // namespace

KnowledgeGraph load_graph_files(const std::string& nodes_path, const std::string& edges_path) {
    auto nodes = open_input(nodes_path);
    auto edges = open_input(edges_path);
    return load_graph(nodes, edges);
}

std::vector<GraphIssue> validate_graph_files(const std::string& nodes_path, const std::string& edges_path) {
    auto nodes = open_input(nodes_path);
    auto edges = open_input(edges_path);
    return parse_graph(nodes, edges).issues;
}

} // namespace ncx
