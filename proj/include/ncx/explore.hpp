#pragma once

#include "ncx/inverted_index.hpp"
#include "ncx/knowledge_graph.hpp"

#include <map>
#include <string>
#include <vector>

namespace ncx {

inline constexpr std::size_t kDefaultTopK = 10;

/// Concept pattern query: distinct concepts, at least one, and a result budget.
struct ConceptQuery {
    std::vector<std::string> concepts;
    std::size_t k = kDefaultTopK;

    /// Throws Error(invalid_argument) on an empty or repeated concept list or k = 0.
    void validate() const;
};

/// Why a document matched one concept of the query.
struct ConceptExplanation {
    double cdr = 0.0;
    double cdr_o = 0.0;
    double cdr_c = 0.0;
    std::string pivot_entity;
    std::string pivot_concept;
    std::vector<std::string> matched_entities;

    bool operator==(const ConceptExplanation&) const = default;
};

struct RankedDocument {
    std::string document;
    /// Sum of the per-concept cdr values.
    double rel = 0.0;
    std::map<std::string, ConceptExplanation> per_concept;

    bool operator==(const RankedDocument&) const = default;
};

struct DocumentMatch {
    std::string document;
    /// Entry per query concept, in query order.
    std::vector<const IndexEntry*> entries;
};

struct MatchResult {
    std::vector<DocumentMatch> matches; // document id ascending
    std::vector<std::string> warnings;
};

struct RollupResult {
    std::vector<RankedDocument> results;
    std::size_t total_matches = 0;
    std::vector<std::string> warnings;
};

struct SubtopicSuggestion {
    std::string concept_name;
    double sbr = 0.0;
    double coverage = 0.0;
    double specificity = 0.0;
    double diversity = 0.0;
    std::size_t support_docs = 0;

    bool operator==(const SubtopicSuggestion&) const = default;
};

struct SubtopicComponents {
    double coverage = 0.0;
    double specificity = 0.0;
    double diversity = 0.0;
    std::size_t support_docs = 0;
};

struct SubtopicResult {
    std::vector<SubtopicSuggestion> suggestions;
    std::vector<std::string> warnings;
};

/// Documents holding an index entry for every concept of `concepts`. Unknown
/// concepts produce an empty match and a warning.
MatchResult match_documents(const InvertedIndex& ix, const std::vector<std::string>& concepts);

/// Matched documents ranked by rel descending, then document id ascending.
RollupResult rollup_query(const InvertedIndex& ix, const ConceptQuery& q);

/// Roll-up menu for one entity: its concepts broadened to `depth`, most
/// specific first, ties by name.
std::vector<std::string> rollup_candidates(const KnowledgeGraph& g, std::string_view entity, std::uint32_t depth);

/// Concepts indexed for some matched document of Q, excluding Q's own concepts.
std::vector<std::string> candidate_subtopics(const InvertedIndex& ix, const std::vector<std::string>& concepts);

/// coverage = sum of cdr(c, d) over D(Q); specificity = ln(|V_I| / extent(c));
/// diversity = |union of ME(c, d) over D(Q)| / |D(Q + c)|.
SubtopicComponents subtopic_components(const InvertedIndex& ix, std::string_view concept_name,
                                       const std::vector<std::string>& concepts);

/// Candidates ranked by sbr = coverage * specificity * diversity descending,
/// then concept name ascending. An empty query is allowed and has no candidates.
SubtopicResult subtopic_rank(const InvertedIndex& ix, const std::vector<std::string>& concepts,
                             std::size_t k = kDefaultTopK);

/// Roll-up of the query augmented with `subtopic`.
RollupResult drilldown(const InvertedIndex& ix, const ConceptQuery& q, const std::string& subtopic);

} // namespace ncx
