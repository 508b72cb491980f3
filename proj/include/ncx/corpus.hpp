#pragma once

#include "ncx/knowledge_graph.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ncx {

struct Mention {
    InstanceId entity;
    std::uint32_t count = 0;
};

/// A pre-linked document: its entity mentions with positive counts, sorted
/// by entity handle.
struct Document {
    std::string id;
    std::string title;
    std::optional<std::string> body;
    std::vector<Mention> mentions;

    /// Mention count of v, or 0.
    std::uint32_t count_of(InstanceId v) const;
    bool mentions_entity(InstanceId v) const { return count_of(v) > 0; }
    std::vector<InstanceId> entities() const;
};

struct CorpusStats {
    std::size_t doc_count = 0;
    std::unordered_map<std::uint32_t, std::uint32_t> doc_frequency;

    std::uint32_t df(InstanceId v) const;
};

struct IngestWarning {
    std::string document;
    std::size_t unknown_entities = 0;
};

struct Corpus {
    std::vector<Document> documents;
    CorpusStats stats;
    std::vector<IngestWarning> warnings;
    /// Ids of documents dropped because no mention survived.
    std::vector<std::string> excluded;

    const Document* find(std::string_view id) const;
};

/// Reads line-delimited JSON document records. Unknown entity ids are
/// dropped with a per-document warning; repeated entity ids within one
/// record add their counts. Throws Error(parse) with the line number on a
/// malformed record and Error(validation) on a duplicate document id.
Corpus ingest_documents(std::istream& in, const KnowledgeGraph& g);
Corpus load_corpus_file(const std::string& path, const KnowledgeGraph& g);

} // namespace ncx
