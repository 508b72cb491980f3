#pragma once

#include "ncx/corpus.hpp"
#include "ncx/explore.hpp"
#include "ncx/inverted_index.hpp"
#include "ncx/knowledge_graph.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace ncx {

struct ServiceLimits {
    std::size_t max_k = 100;
    std::size_t max_query_concepts = 16;
};

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string nodes_path;
    std::string edges_path;
    std::string documents_path;
    std::string index_path;
    /// When set, must match the parameters recorded in the index header.
    std::optional<ScoringParams> expected_params;
    ServiceLimits limits;

    /// Applies NCX_LISTEN=host:port if present.
    void apply_environment();
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

/// JSON views of engine results. Field names are part of the HTTP contract.
nlohmann::json to_json(const RollupResult& r, const ConceptQuery& q, const Corpus* corpus = nullptr);
nlohmann::json to_json(const SubtopicResult& r, const std::vector<std::string>& concepts, std::size_t k);

/// Read-only query service over one graph, corpus and index. Handlers are
/// const and hold no per-request state, so any number may run concurrently.
class ExplorerService {
public:
    /// Throws Error(validation) naming both fingerprints when the index was
    /// built from a different graph.
    ExplorerService(KnowledgeGraph graph, Corpus corpus, InvertedIndex index, ServiceLimits limits = {});

    static std::unique_ptr<ExplorerService> load(const ServiceConfig& config);

    Response health() const;
    Response document(std::string_view id) const;
    Response rollups(std::string_view entity, std::optional<std::string_view> depth) const;
    Response query(std::string_view request_body) const;
    Response subtopics(std::string_view request_body) const;

    const KnowledgeGraph& graph() const noexcept { return graph_; }
    const Corpus& corpus() const noexcept { return corpus_; }
    const InvertedIndex& index() const noexcept { return index_; }

private:
    KnowledgeGraph graph_;
    Corpus corpus_;
    InvertedIndex index_;
    ServiceLimits limits_;
};

/// HTTP front end for an ExplorerService.
class HttpFrontend {
public:
    explicit HttpFrontend(const ExplorerService& service);
    ~HttpFrontend();
    HttpFrontend(const HttpFrontend&) = delete;
    HttpFrontend& operator=(const HttpFrontend&) = delete;

    /// Binds `port` (0 picks a free port) and returns the bound port. Throws
    /// Error(io) on bind failure.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace ncx
