#pragma once

#include "ncx/conn_estimator.hpp"
#include "ncx/corpus.hpp"
#include "ncx/hop_oracle.hpp"
#include "ncx/path_oracle.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ncx {

struct ScoringParams {
    ConnParams conn;
    std::uint32_t theta = kDefaultTheta;
    /// Roll-up depth for candidate concepts and for Psi* (matching through
    /// narrower descendants).
    std::uint32_t broaden_depth = 2;
    bool use_exact_conn = false;
    /// cdr_c assigned when every entity of the document matches the concept.
    double empty_context_cdr_c = 1.0;
    /// Exact connectivity falls back to sampling past this many extensions.
    std::uint64_t exact_extension_cap = 1'000'000;
    /// Hop maps kept by the per-target cache during a build. Not persisted.
    std::size_t hop_cache_capacity = 4096;

    void validate() const;
};

/// Raw mention count times ln(N / df).
double term_weight(const CorpusStats& stats, InstanceId v, const Document& d);

/// ln(instance_count / extent); 0 when the concept covers every instance.
double specificity(std::size_t instance_count, std::size_t extent);

struct MatchSplit {
    std::vector<InstanceId> matched; // ME(c, d)
    std::vector<InstanceId> context; // CE(c, d)
};

/// Splits the document's entities by membership in Psi*(c), the union of Psi
/// over narrower_descendants(c, depth). Depth 0 is the literal Psi(c) split.
MatchSplit matched_context_split(const KnowledgeGraph& g, ConceptId c, const Document& d, std::uint32_t depth);

struct OntologyScore {
    double value = 0.0;
    InstanceId pivot{};
    /// c itself, or the matched descendant standing in for a broad concept.
    ConceptId pivot_concept{};
    double specificity = 0.0;
    double pivot_weight = 0.0;
};

/// specificity(c) times the highest term weight among directly matched
/// entities. A concept with no direct match takes the best score among its
/// directly matched descendants within the roll-up depth.
OntologyScore ontology_relevance(const KnowledgeGraph& g, const CorpusStats& stats, ConceptId c, const Document& d,
                                 const ScoringParams& params);

/// conn / (1 + conn), mapping [0, inf) onto [0, 1).
double context_relevance(double conn);

struct EstimateMeta {
    std::uint32_t theta = 0;
    std::uint64_t seed = 0;

    bool operator==(const EstimateMeta&) const = default;
};

struct ConceptDocumentScore {
    ConceptId concept_id{};
    double cdr = 0.0;
    double cdr_o = 0.0;
    double cdr_c = 0.0;
    /// Connectivity behind cdr_c; empty when the context set was empty.
    std::optional<double> conn;
    OntologyScore ontology;
    std::vector<InstanceId> matched;
    /// Set when cdr_c came from the sampling estimator.
    std::optional<EstimateMeta> estimate;
};

/// cdr = cdr_o * cdr_c for one (concept, document) pair. Connectivity runs
/// from Psi*(c) to CE(c, d); it is exact when requested and within the
/// extension cap, otherwise estimated with `theta` walks from `seed`.
ConceptDocumentScore concept_document_rank(const KnowledgeGraph& g, const CorpusStats& stats,
                                           const HopOracle& hops, ConceptId c, const Document& d,
                                           const ScoringParams& params, std::uint64_t seed);

} // namespace ncx
