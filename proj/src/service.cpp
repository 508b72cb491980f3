#include "ncx/service.hpp"

#include "ncx/error.hpp"

#include <httplib.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <variant>

namespace ncx {

using nlohmann::json;

namespace {

std::shared_ptr<spdlog::logger> service_log() {
    static auto log = [] {
        auto l = spdlog::stderr_logger_mt("ncx.service");
        l->set_pattern("ts=%Y-%m-%dT%H:%M:%S.%e level=%l %v");
        return l;
    }();
    return log;
}

Response error_response(int status, const std::string& message) {
    return {status, json{{"error", message}}};
}

struct ParsedRequest {
    std::vector<std::string> concepts;
    std::size_t k = kDefaultTopK;
};

// Validates a {"concepts": [...], "k": n} body; returns an error response on failure.
std::variant<ParsedRequest, Response> parse_concept_request(std::string_view body, const ServiceLimits& limits) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error&) {
        return error_response(400, "request body is not valid JSON");
    }
    if (!j.is_object() || !j.contains("concepts") || !j["concepts"].is_array())
        return error_response(400, "request needs a \"concepts\" array");
    ParsedRequest req;
    for (const auto& c : j["concepts"]) {
        if (!c.is_string() || c.get<std::string>().empty())
            return error_response(400, "concepts must be non-empty strings");
        req.concepts.push_back(c.get<std::string>());
    }
    if (req.concepts.empty())
        return error_response(400, "query needs at least one concept");
    if (req.concepts.size() > limits.max_query_concepts)
        return error_response(400, "query has more than " + std::to_string(limits.max_query_concepts) + " concepts");
    if (j.contains("k")) {
        if (!j["k"].is_number_integer() || j["k"].get<std::int64_t>() < 1)
            return error_response(400, "k must be a positive integer");
        const auto k = j["k"].get<std::int64_t>();
        if (static_cast<std::size_t>(k) > limits.max_k)
            return error_response(400, "k exceeds the limit of " + std::to_string(limits.max_k));
        req.k = static_cast<std::size_t>(k);
    }
    ConceptQuery q{req.concepts, req.k};
    try {
        q.validate();
    } catch (const Error& e) {
        return error_response(400, e.what());
    }
    return req;
}

} // namespace

void ServiceConfig::apply_environment() {
    const char* listen = std::getenv("NCX_LISTEN");
    if (!listen || !*listen)
        return;
    std::string_view spec(listen);
    const auto colon = spec.rfind(':');
    if (colon == std::string_view::npos)
        throw Error(ErrorKind::invalid_argument, "NCX_LISTEN must be host:port");
    int parsed = 0;
    const auto port_part = spec.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(port_part.data(), port_part.data() + port_part.size(), parsed);
    if (ec != std::errc{} || ptr != port_part.data() + port_part.size() || parsed < 0 || parsed > 65535)
        throw Error(ErrorKind::invalid_argument, "NCX_LISTEN has an invalid port");
    host = std::string(spec.substr(0, colon));
    port = parsed;
}

json to_json(const RollupResult& r, const ConceptQuery& q, const Corpus* corpus) {
    json results = json::array();
    for (const auto& doc : r.results) {
        json explanations = json::array();
        for (const auto& c : q.concepts) {
            const auto& e = doc.per_concept.at(c);
            explanations.push_back({{"concept", c},
                                    {"cdr", e.cdr},
                                    {"cdr_o", e.cdr_o},
                                    {"cdr_c", e.cdr_c},
                                    {"pivot_entity", e.pivot_entity},
                                    {"pivot_concept", e.pivot_concept},
                                    {"matched_entities", e.matched_entities}});
        }
        json item{{"document", doc.document}, {"rel", doc.rel}, {"explanations", std::move(explanations)}};
        if (corpus)
            if (const auto* d = corpus->find(doc.document))
                item["title"] = d->title;
        results.push_back(std::move(item));
    }
    return {{"concepts", q.concepts},
            {"k", q.k},
            {"total_matches", r.total_matches},
            {"results", std::move(results)},
            {"warnings", r.warnings}};
}

json to_json(const SubtopicResult& r, const std::vector<std::string>& concepts, std::size_t k) {
    json suggestions = json::array();
    for (const auto& s : r.suggestions) {
        suggestions.push_back({{"concept", s.concept_name},
                               {"sbr", s.sbr},
                               {"coverage", s.coverage},
                               {"specificity", s.specificity},
                               {"diversity", s.diversity},
                               {"support_docs", s.support_docs}});
    }
    return {{"concepts", concepts}, {"k", k}, {"suggestions", std::move(suggestions)}, {"warnings", r.warnings}};
}

ExplorerService::ExplorerService(KnowledgeGraph graph, Corpus corpus, InvertedIndex index, ServiceLimits limits)
    : graph_(std::move(graph)), corpus_(std::move(corpus)), index_(std::move(index)), limits_(limits) {
    const auto graph_fp = graph_.fingerprint();
    const auto& index_fp = index_.header().graph_fingerprint;
    if (graph_fp != index_fp)
        throw Error(ErrorKind::validation, "graph fingerprint mismatch: index was built for '" + index_fp +
                                               "', loaded graph is '" + graph_fp + "'");
}

std::unique_ptr<ExplorerService> ExplorerService::load(const ServiceConfig& config) {
    auto graph = load_graph_files(config.nodes_path, config.edges_path);
    auto corpus = load_corpus_file(config.documents_path, graph);
    auto index = load_index_file(config.index_path);
    if (config.expected_params) {
        const auto& want = *config.expected_params;
        const auto& have = index.header().params;
        if (want.conn.tau != have.conn.tau || want.conn.beta != have.conn.beta || want.theta != have.theta ||
            want.broaden_depth != have.broaden_depth || want.use_exact_conn != have.use_exact_conn ||
            want.empty_context_cdr_c != have.empty_context_cdr_c)
            throw Error(ErrorKind::validation, "scoring parameters differ from those recorded in the index");
    }
    return std::make_unique<ExplorerService>(std::move(graph), std::move(corpus), std::move(index), config.limits);
}

Response ExplorerService::health() const {
    return {200, json{{"status", "ok"}, {"entries", index_.size()}, {"documents", corpus_.documents.size()}}};
}

Response ExplorerService::document(std::string_view id) const {
    const auto* d = corpus_.find(id);
    if (!d)
        return error_response(404, "unknown document '" + std::string(id) + "'");
    const auto depth = index_.header().params.broaden_depth;
    json mentions = json::array();
    for (const auto& m : d->mentions) {
        const auto& name = graph_.name(m.entity);
        mentions.push_back({{"entity", name}, {"count", m.count}, {"concepts", rollup_candidates(graph_, name, depth)}});
    }
    json indexed = json::array();
    for (const auto* e : index_.entries_for_document(d->id)) indexed.push_back({{"concept", e->concept_name}, {"cdr", e->cdr}});
    json body{{"id", d->id}, {"title", d->title}, {"mentions", std::move(mentions)}, {"indexed_concepts", std::move(indexed)}};
    body["body"] = d->body ? json(*d->body) : json(nullptr);
    return {200, std::move(body)};
}

Response ExplorerService::rollups(std::string_view entity, std::optional<std::string_view> depth_param) const {
    if (!graph_.find_instance(entity))
        return error_response(404, "unknown entity '" + std::string(entity) + "'");
    std::uint32_t depth = index_.header().params.broaden_depth;
    if (depth_param) {
        auto [ptr, ec] = std::from_chars(depth_param->data(), depth_param->data() + depth_param->size(), depth);
        if (ec != std::errc{} || ptr != depth_param->data() + depth_param->size() || depth > 16)
            return error_response(400, "depth must be an integer in [0, 16]");
    }
    json concepts = json::array();
    for (const auto& c : rollup_candidates(graph_, entity, depth)) {
        const ConceptId id = graph_.concept_id(c);
        const auto extent = graph_.extended_instances(id, depth).size();
        concepts.push_back({{"concept", c},
                            {"instance_count", extent},
                            {"specificity", specificity(graph_.instance_count(), extent)}});
    }
    return {200, json{{"entity", entity}, {"depth", depth}, {"concepts", std::move(concepts)}}};
}

Response ExplorerService::query(std::string_view request_body) const {
    auto parsed = parse_concept_request(request_body, limits_);
    if (auto* err = std::get_if<Response>(&parsed))
        return std::move(*err);
    const auto& req = std::get<ParsedRequest>(parsed);
    ConceptQuery q{req.concepts, req.k};
    return {200, to_json(rollup_query(index_, q), q, &corpus_)};
}

Response ExplorerService::subtopics(std::string_view request_body) const {
    auto parsed = parse_concept_request(request_body, limits_);
    if (auto* err = std::get_if<Response>(&parsed))
        return std::move(*err);
    const auto& req = std::get<ParsedRequest>(parsed);
    return {200, to_json(subtopic_rank(index_, req.concepts, req.k), req.concepts, req.k)};
}

struct HttpFrontend::Impl {
    const ExplorerService& service;
    httplib::Server server;

    explicit Impl(const ExplorerService& s) : service(s) {
        auto reply = [](httplib::Response& res, const Response& r) {
            res.status = r.status;
            res.set_content(r.body.dump(), "application/json");
        };
        server.Get("/api/health", [this, reply](const httplib::Request&, httplib::Response& res) {
            reply(res, service.health());
        });
        server.Get(R"(/api/documents/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.document(req.matches[1].str()));
        });
        server.Get(R"(/api/entities/([^/]+)/rollups)",
                   [this, reply](const httplib::Request& req, httplib::Response& res) {
                       std::optional<std::string> depth;
                       if (req.has_param("depth"))
                           depth = req.get_param_value("depth");
                       reply(res, service.rollups(req.matches[1].str(),
                                                  depth ? std::optional<std::string_view>(*depth) : std::nullopt));
                   });
        server.Post("/api/query", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.query(req.body));
        });
        server.Post("/api/subtopics", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.subtopics(req.body));
        });
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string what = "internal error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                what = e.what();
            } catch (...) {
            }
            res.status = 500;
            res.set_content(json{{"error", what}}.dump(), "application/json");
        });
        server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
            service_log()->info("method={} path={} status={}", req.method, req.path, res.status);
        });
    }
};

HttpFrontend::HttpFrontend(const ExplorerService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpFrontend::~HttpFrontend() = default;

int HttpFrontend::bind(const std::string& host, int port) {
    int bound = port;
    if (port == 0)
        bound = impl_->server.bind_to_any_port(host);
    else if (!impl_->server.bind_to_port(host, port))
        bound = -1;
    if (bound < 0)
        throw Error(ErrorKind::io, "cannot bind " + host + ":" + std::to_string(port));
    service_log()->info("event=listening host={} port={}", host, bound);
    return bound;
}

void HttpFrontend::listen() {
    impl_->server.listen_after_bind();
}

void HttpFrontend::stop() {
    impl_->server.stop();
}

} // namespace ncx
