#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ncx {

/// Synthetic knowledge graph and pre-linked corpus with planted structure.
///
/// Instances are split into contiguous clusters, one per leaf concept. Each
/// leaf concept's Psi is drawn from its own cluster, and a configurable share
/// of instance edges stays inside clusters. Documents are planted on one leaf
/// concept: a few mentions come from its Psi, the rest are context entities
/// drawn from the same cluster with probability `cluster_affinity` and
/// uniformly otherwise. Planted concepts are therefore better connected to
/// their documents' context than unrelated concepts.
///
/// Leaves roll up through `broader` edges into group concepts and one root;
/// group and root concepts carry no direct Psi. A few "type" concepts map to
/// a large random share of all instances to give low-specificity candidates.
struct SynthParams {
    std::size_t instance_count = 300;
    std::size_t leaf_concepts = 20;
    std::size_t fanout_min = 4;
    std::size_t fanout_max = 6;
    std::size_t type_concepts = 2;
    double type_coverage = 0.4;
    std::size_t group_branching = 4;
    double mean_degree = 8.0;
    double intra_cluster_fraction = 0.75;

    std::size_t document_count = 60;
    std::size_t entities_min = 4;
    std::size_t entities_max = 7;
    std::size_t matched_min = 1;
    std::size_t matched_max = 2;
    double cluster_affinity = 0.85;

    std::uint64_t seed = 1;

    /// Throws Error(invalid_argument) for non-positive counts, probabilities
    /// outside [0, 1] and infeasible combinations such as a fanout larger
    /// than a cluster.
    void validate() const;
};

/// What the generator planted, for use as a test oracle.
struct GeneratorLedger {
    std::map<std::string, std::vector<std::string>> psi;      // concept -> instances
    std::map<std::string, std::vector<std::string>> clusters; // leaf concept -> cluster instances
    std::map<std::string, std::string> broader;               // concept -> parent
    std::map<std::string, std::string> document_concept;      // document -> planted concept
    std::size_t instance_count = 0;
    std::size_t concept_count = 0;
    std::size_t instance_edge_count = 0;
    std::size_t document_count = 0;
    std::map<std::string, std::size_t> doc_frequency;         // entity -> documents mentioning it

    nlohmann::json to_json() const;
};

struct SynthOutput {
    std::string nodes_tsv;
    std::string edges_tsv;
    std::string documents_jsonl;
    GeneratorLedger ledger;
};

/// Deterministic in `params.seed`.
SynthOutput gen_synthetic(const SynthParams& params);

/// Writes nodes.tsv, edges.tsv, documents.jsonl and ledger.json into `dir`.
void write_synthetic(const SynthOutput& out, const std::string& dir);

} // namespace ncx
