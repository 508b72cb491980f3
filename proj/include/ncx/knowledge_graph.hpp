#pragma once

#include "ncx/ids.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ncx {

enum class NodeSpace { instance, ontology };

/// One problem found while reading the node/edge files.
struct GraphIssue {
    std::string source; // "nodes" or "edges"
    std::size_t line = 0;
    std::string message;
};

struct GraphStats {
    std::size_t instance_count = 0;
    std::size_t concept_count = 0;
    std::size_t instance_edge_count = 0; // undirected, deduplicated
    std::size_t broader_edge_count = 0;
    std::size_t ontology_pair_count = 0;
    std::size_t dropped_self_loops = 0;
    /// instance degree -> number of instances with that degree
    std::map<std::size_t, std::size_t> degree_histogram;

    bool operator==(const GraphStats&) const = default;
};

/// Two-space knowledge graph: an undirected simple graph over instance
/// entities, a broader/narrower hierarchy over concepts, and the ontology
/// relation Psi between them. Immutable once loaded.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    std::size_t instance_count() const noexcept { return instances_.size(); }
    std::size_t concept_count() const noexcept { return concepts_.size(); }

    std::optional<InstanceId> find_instance(std::string_view name) const { return instances_.find(name); }
    std::optional<ConceptId> find_concept(std::string_view name) const { return concepts_.find(name); }

    /// Lookups that throw Error(not_found) for unknown identifiers.
    InstanceId instance(std::string_view name) const;
    ConceptId concept_id(std::string_view name) const;

    const std::string& name(InstanceId v) const { return instances_.name(v); }
    const std::string& name(ConceptId c) const { return concepts_.name(c); }

    /// Sorted distinct instance neighbours.
    std::span<const InstanceId> neighbors(InstanceId v) const { return adjacency_[index_of(v)]; }
    bool adjacent(InstanceId a, InstanceId b) const;

    std::span<const ConceptId> broader(ConceptId c) const { return broader_[index_of(c)]; }
    std::span<const ConceptId> narrower(ConceptId c) const { return narrower_[index_of(c)]; }

    /// Psi(c), sorted.
    std::span<const InstanceId> instances_of(ConceptId c) const { return psi_[index_of(c)]; }
    /// Psi^-1(v), sorted.
    std::span<const ConceptId> concepts_of(InstanceId v) const { return psi_inverse_[index_of(v)]; }

    /// c plus every ancestor reachable through at most `depth` broader edges.
    /// Sorted by handle.
    std::vector<ConceptId> broadened_concepts(ConceptId c, std::size_t depth) const;
    /// c plus every descendant reachable through at most `depth` narrower edges.
    std::vector<ConceptId> narrower_descendants(ConceptId c, std::size_t depth) const;
    /// Union of Psi over narrower_descendants(c, depth), sorted.
    std::vector<InstanceId> extended_instances(ConceptId c, std::size_t depth) const;

    GraphStats stats() const;

    /// Content hash over the canonical form (names, adjacency, hierarchy,
    /// Psi). Equal graphs loaded from equal files share a fingerprint.
    std::string fingerprint() const;

private:
    friend class GraphBuilder;

    Interner<InstanceId> instances_;
    Interner<ConceptId> concepts_;
    std::vector<std::vector<InstanceId>> adjacency_;
    std::vector<std::vector<ConceptId>> broader_;
    std::vector<std::vector<ConceptId>> narrower_;
    std::vector<std::vector<InstanceId>> psi_;
    std::vector<std::vector<ConceptId>> psi_inverse_;
    std::size_t dropped_self_loops_ = 0;
};

/// Parses node and edge records, collecting every issue instead of stopping
/// at the first one.
struct GraphLoadResult {
    KnowledgeGraph graph;
    std::vector<GraphIssue> issues;
};

GraphLoadResult parse_graph(std::istream& nodes, std::istream& edges);

/// Loads and validates; throws Error (parse or validation) naming the first
/// issue and its line.
KnowledgeGraph load_graph(std::istream& nodes, std::istream& edges);
KnowledgeGraph load_graph_files(const std::string& nodes_path, const std::string& edges_path);

/// Issues only; an empty result means the files load cleanly.
std::vector<GraphIssue> validate_graph_files(const std::string& nodes_path, const std::string& edges_path);

std::string format_issue(const GraphIssue& issue);

} // namespace ncx
