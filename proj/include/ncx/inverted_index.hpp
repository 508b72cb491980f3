#pragma once

#include "ncx/corpus.hpp"
#include "ncx/scoring.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ncx {

/// One persisted <concept, document, cdr> record with its explanation.
struct IndexEntry {
    std::string concept_name;
    std::string document;
    double cdr = 0.0;
    double cdr_o = 0.0;
    double cdr_c = 0.0;
    std::string pivot_entity;
    std::string pivot_concept;
    std::vector<std::string> matched_entities;
    std::optional<EstimateMeta> estimate;

    bool operator==(const IndexEntry&) const = default;
};

/// Per-concept sizes needed at query time without the graph.
struct ConceptInfo {
    std::string name;
    std::size_t psi_size = 0;
    /// |Psi*(c)| at the index roll-up depth.
    std::size_t extent = 0;

    bool operator==(const ConceptInfo&) const = default;
};

struct IndexHeader {
    ScoringParams params;
    std::uint64_t seed = 0;
    std::string graph_fingerprint;
    std::size_t instance_count = 0;
};

inline constexpr std::string_view kIndexMagic = "NCEX";
inline constexpr int kIndexFormatVersion = 1;

/// Immutable concept-keyed index. Entries for one concept are ordered by cdr
/// descending, then document id ascending.
class InvertedIndex {
public:
    InvertedIndex() = default;
    InvertedIndex(IndexHeader header, std::vector<ConceptInfo> concepts, std::vector<IndexEntry> entries);

    const IndexHeader& header() const noexcept { return header_; }
    std::span<const ConceptInfo> concepts() const noexcept { return concepts_; }
    /// All entries, grouped by concept name ascending.
    std::span<const IndexEntry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    const ConceptInfo* concept_info(std::string_view name) const;
    bool knows_concept(std::string_view name) const { return concept_info(name) != nullptr; }

    std::span<const IndexEntry> entries_for_concept(std::string_view concept_name) const;
    /// Entries of one document, by concept name ascending.
    std::vector<const IndexEntry*> entries_for_document(std::string_view document) const;
    const IndexEntry* find(std::string_view concept_name, std::string_view document) const;

    /// ln(|V_I| / extent) for a known concept.
    double concept_specificity(std::string_view concept_name) const;

    bool operator==(const InvertedIndex& other) const;

private:
    IndexHeader header_;
    std::vector<ConceptInfo> concepts_;
    std::vector<IndexEntry> entries_;
    std::unordered_map<std::string, std::size_t> concept_lookup_;
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> concept_ranges_;
    std::unordered_map<std::string, std::vector<std::size_t>> document_entries_;
};

/// Scores every (candidate concept, document) pair. Candidates of a document
/// are the concepts of its entities rolled up through `broader` to the
/// configured depth. Pair k of document i is estimated with its own
/// substream of `seed`, so the index is a pure function of its inputs.
/// Pairs whose scoring throws are skipped and described in `failures`.
InvertedIndex build_index(const KnowledgeGraph& g, const Corpus& corpus, const ScoringParams& params,
                          std::uint64_t seed, std::vector<std::string>* failures = nullptr,
                          std::size_t threads = 0);

/// Candidate concepts of one document, sorted by handle.
std::vector<ConceptId> candidate_concepts(const KnowledgeGraph& g, const Document& d, std::uint32_t depth);

void save_index(const InvertedIndex& ix, std::ostream& out);
/// Throws Error(format) on a bad magic or truncated file, Error(version) on a
/// format version mismatch and Error(checksum) on corruption. An empty
/// stream loads as an empty index.
InvertedIndex load_index(std::istream& in);

void save_index_file(const InvertedIndex& ix, const std::string& path);
InvertedIndex load_index_file(const std::string& path);

} // namespace ncx
