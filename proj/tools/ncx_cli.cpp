// ncx: operator CLI for the concept exploration engine.

#include "ncx/conn_estimator.hpp"
#include "ncx/error.hpp"
#include "ncx/explore.hpp"
#include "ncx/inverted_index.hpp"
#include "ncx/service.hpp"
#include "ncx/studies.hpp"
#include "ncx/synth.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace ncx;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::vector<std::uint32_t> split_uints(const std::string& s) {
    std::vector<std::uint32_t> out;
    for (const auto& item : split_list(s)) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || v == 0)
            throw Error(ErrorKind::invalid_argument, "expected a list of positive integers, got '" + s + "'");
        out.push_back(static_cast<std::uint32_t>(v));
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content))
        throw Error(ErrorKind::io, "cannot write '" + path + "'");
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

struct GraphFiles {
    std::string graph_dir;
    std::string nodes;
    std::string edges;
    std::string docs;
    bool required = false;

    void add(CLI::App* cmd, bool docs_required, bool files_required) {
        required = files_required;
        cmd->add_option("--graph", graph_dir, "directory holding nodes.tsv and edges.tsv");
        cmd->add_option("--nodes", nodes, "node records (id<TAB>space)");
        cmd->add_option("--edges", edges, "edge records (src<TAB>dst<TAB>kind)");
        auto* d = cmd->add_option("--docs", docs, "line-delimited JSON documents");
        if (files_required && docs_required)
            d->required();
    }

    // Fills nodes/edges from --graph and checks that both are known.
    void resolve() {
        if (!graph_dir.empty()) {
            if (nodes.empty())
                nodes = graph_dir + "/nodes.tsv";
            if (edges.empty())
                edges = graph_dir + "/edges.tsv";
        }
        if (required && (nodes.empty() || edges.empty()))
            throw Error(ErrorKind::invalid_argument, "graph files needed: pass --graph DIR or --nodes and --edges");
    }
    bool given() {
        resolve();
        return !nodes.empty() && !edges.empty() && !docs.empty();
    }
};

struct ScoringFlags {
    ScoringParams params;

    void add(CLI::App* cmd) {
        cmd->add_option("--tau", params.conn.tau, "hop constraint")->capture_default_str();
        cmd->add_option("--beta", params.conn.beta, "damping factor")->capture_default_str();
        cmd->add_option("--theta", params.theta, "random walks per (concept, document)")->capture_default_str();
        cmd->add_option("--broaden-depth", params.broaden_depth, "roll-up depth")->capture_default_str();
        cmd->add_flag("--exact", params.use_exact_conn, "exact connectivity when within the extension cap");
        cmd->add_option("--empty-context-cdr-c", params.empty_context_cdr_c, "cdr_c when the context is empty")
            ->capture_default_str();
        cmd->add_option("--hop-cache-capacity", params.hop_cache_capacity, "hop maps kept in the per-target cache")
            ->capture_default_str();
    }
};

// Default synthetic suite, materialized in memory.
struct SyntheticWorld {
    SynthOutput out;
    KnowledgeGraph graph;
    Corpus corpus;
};

SyntheticWorld synthetic_world(const SynthParams& p) {
    SyntheticWorld w;
    w.out = gen_synthetic(p);
    std::istringstream nodes(w.out.nodes_tsv), edges(w.out.edges_tsv), docs(w.out.documents_jsonl);
    w.graph = load_graph(nodes, edges);
    w.corpus = ingest_documents(docs, w.graph);
    return w;
}

int run(int argc, char** argv) {
    CLI::App app{"Concept roll-up / drill-down exploration over a knowledge graph"};
    app.require_subcommand(1);

    // build-index
    GraphFiles bi_files;
    ScoringFlags bi_flags;
    std::string bi_out;
    std::uint64_t bi_seed = 7;
    std::size_t bi_threads = 0;
    auto* build = app.add_subcommand("build-index", "score documents and write the inverted index");
    bi_files.add(build, true, true);
    bi_flags.add(build);
    build->add_option("--out", bi_out, "index file")->required();
    build->add_option("--seed", bi_seed, "estimator seed")->capture_default_str();
    build->add_option("--threads", bi_threads, "worker threads (0 = all cores)");

    // query
    std::string q_index, q_concepts;
    std::size_t q_k = kDefaultTopK;
    auto* query = app.add_subcommand("query", "roll-up query over an index");
    query->add_option("--index", q_index)->required();
    query->add_option("--concepts", q_concepts, "comma-separated concept ids")->required();
    query->add_option("--k", q_k)->capture_default_str();

    // subtopics
    std::string s_index, s_concepts;
    std::size_t s_k = kDefaultTopK;
    auto* subtopics = app.add_subcommand("subtopics", "rank drill-down subtopics for a query");
    subtopics->add_option("--index", s_index)->required();
    subtopics->add_option("--concepts", s_concepts, "comma-separated concept ids")->required();
    subtopics->add_option("--k", s_k)->capture_default_str();

    // gen-synth
    SynthParams synth;
    std::string synth_dir;
    auto* gen = app.add_subcommand("gen-synth", "generate a synthetic graph, corpus and ledger");
    gen->add_option("--out-dir", synth_dir)->required();
    gen->add_option("--seed", synth.seed)->capture_default_str();
    gen->add_option("--instances", synth.instance_count)->capture_default_str();
    gen->add_option("--leaf-concepts", synth.leaf_concepts)->capture_default_str();
    gen->add_option("--documents", synth.document_count)->capture_default_str();
    gen->add_option("--mean-degree", synth.mean_degree)->capture_default_str();
    gen->add_option("--intra-cluster-fraction", synth.intra_cluster_fraction)->capture_default_str();
    gen->add_option("--cluster-affinity", synth.cluster_affinity)->capture_default_str();

    // eval-sampling
    GraphFiles es_files;
    ConnParams es_conn;
    std::string es_grid = "1,5,10,20,50,100";
    std::uint32_t es_seeds = 20;
    std::string es_mode = "both";
    std::string es_out;
    std::size_t es_pairs = 30;
    std::uint64_t es_seed = 11;
    auto* eval_sampling = app.add_subcommand("eval-sampling", "estimator error against exact connectivity");
    es_files.add(eval_sampling, true, false);
    eval_sampling->add_option("--tau", es_conn.tau)->capture_default_str();
    eval_sampling->add_option("--beta", es_conn.beta)->capture_default_str();
    eval_sampling->add_option("--theta-grid", es_grid)->capture_default_str();
    eval_sampling->add_option("--seeds", es_seeds, "repeats per pair and theta")->capture_default_str();
    eval_sampling->add_option("--mode", es_mode)->check(CLI::IsMember({"both", "pruned", "unpruned"}))->capture_default_str();
    eval_sampling->add_option("--pairs", es_pairs, "maximum (concept, context) pairs")->capture_default_str();
    eval_sampling->add_option("--seed", es_seed)->capture_default_str();
    eval_sampling->add_option("--out", es_out, "results table (default stdout)");

    // eval-negative
    GraphFiles en_files;
    std::string en_index;
    std::size_t en_trials = 100;
    std::string en_taus = "1,2,3";
    std::uint64_t en_seed = 13;
    double en_beta = 0.5;
    std::string en_out;
    auto* eval_negative = app.add_subcommand("eval-negative", "positive vs negative concept context relevance");
    en_files.add(eval_negative, true, false);
    eval_negative->add_option("--index", en_index, "index built from the given files");
    eval_negative->add_option("--trials", en_trials)->capture_default_str();
    eval_negative->add_option("--taus", en_taus)->capture_default_str();
    eval_negative->add_option("--beta", en_beta)->capture_default_str();
    eval_negative->add_option("--seed", en_seed)->capture_default_str();
    eval_negative->add_option("--out", en_out, "results table (default stdout)");

    // serve
    ServiceConfig cfg;
    GraphFiles sv_files;
    auto* serve = app.add_subcommand("serve", "read-only JSON-over-HTTP query service");
    sv_files.add(serve, true, true);
    serve->add_option("--index", cfg.index_path)->required();
    serve->add_option("--host", cfg.host)->capture_default_str();
    serve->add_option("--port", cfg.port)->capture_default_str();
    serve->add_option("--max-k", cfg.limits.max_k)->capture_default_str();
    serve->add_option("--max-query-concepts", cfg.limits.max_query_concepts)->capture_default_str();

    // validate-graph
    std::string vg_nodes, vg_edges;
    auto* validate = app.add_subcommand("validate-graph", "check node/edge files and print graph statistics");
    validate->add_option("--nodes", vg_nodes)->required();
    validate->add_option("--edges", vg_edges)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    }

    if (*build) {
        bi_files.resolve();
        auto g = load_graph_files(bi_files.nodes, bi_files.edges);
        auto corpus = load_corpus_file(bi_files.docs, g);
        std::vector<std::string> failures;
        auto ix = build_index(g, corpus, bi_flags.params, bi_seed, &failures, bi_threads);
        save_index_file(ix, bi_out);
        for (const auto& w : corpus.warnings)
            std::cerr << "warning: document " << w.document << ": " << w.unknown_entities << " unknown entities dropped\n";
        for (const auto& f : failures) std::cerr << "warning: skipped entry " << f << "\n";
        std::cout << "entries\t" << ix.size() << "\ndocuments\t" << corpus.documents.size() << "\n";
        return 0;
    }

    if (*query) {
        const auto ix = load_index_file(q_index);
        ConceptQuery q{split_list(q_concepts), q_k};
        const auto result = rollup_query(ix, q);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        std::string out = "rank\tdocument\trel";
        for (const auto& c : q.concepts) out += "\tcdr[" + c + "]\tpivot[" + c + "]";
        out += "\n";
        std::size_t rank = 0;
        for (const auto& r : result.results) {
            out += std::to_string(++rank) + "\t" + r.document + "\t" + fmt(r.rel);
            for (const auto& c : q.concepts) {
                const auto& e = r.per_concept.at(c);
                out += "\t" + fmt(e.cdr) + "\t" + e.pivot_entity;
            }
            out += "\n";
        }
        std::cout << out;
        return 0;
    }

    if (*subtopics) {
        const auto ix = load_index_file(s_index);
        const auto result = subtopic_rank(ix, split_list(s_concepts), s_k);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        std::string out = "rank\tconcept\tsbr\tcoverage\tspecificity\tdiversity\tsupport_docs\n";
        std::size_t rank = 0;
        for (const auto& s : result.suggestions)
            out += std::to_string(++rank) + "\t" + s.concept_name + "\t" + fmt(s.sbr) + "\t" + fmt(s.coverage) + "\t" +
                   fmt(s.specificity) + "\t" + fmt(s.diversity) + "\t" + std::to_string(s.support_docs) + "\n";
        std::cout << out;
        return 0;
    }

    if (*gen) {
        write_synthetic(gen_synthetic(synth), synth_dir);
        std::cout << "wrote\t" << synth_dir << "\n";
        return 0;
    }

    if (*eval_sampling) {
        std::vector<WalkMode> modes;
        if (es_mode != "unpruned")
            modes.push_back(WalkMode::pruned);
        if (es_mode != "pruned")
            modes.push_back(WalkMode::unpruned);
        const auto grid = split_uints(es_grid);
        ErrorProfile profile;
        if (es_files.given()) {
            auto g = load_graph_files(es_files.nodes, es_files.edges);
            auto corpus = load_corpus_file(es_files.docs, g);
            const auto pairs = document_pairs(g, corpus, es_pairs);
            profile = convergence_study(g, pairs, es_conn, grid, es_seeds, es_seed, modes);
        } else {
            auto world = synthetic_world(default_convergence_suite());
            const auto pairs = planted_pairs(world.graph, world.corpus, world.out.ledger, es_pairs);
            profile = convergence_study(world.graph, pairs, es_conn, grid, es_seeds, es_seed, modes);
        }
        write_output(es_out, format_error_profile(profile));
        return 0;
    }

    if (*eval_negative) {
        const auto taus = split_uints(en_taus);
        NegativeStudy study;
        if (en_files.given()) {
            auto g = load_graph_files(en_files.nodes, en_files.edges);
            auto corpus = load_corpus_file(en_files.docs, g);
            auto ix = en_index.empty() ? build_index(g, corpus, ScoringParams{}, en_seed) : load_index_file(en_index);
            study = negative_concept_study(g, ix, corpus, en_trials, taus, en_seed, en_beta);
        } else {
            auto world = synthetic_world(default_convergence_suite());
            auto ix = build_index(world.graph, world.corpus, ScoringParams{}, en_seed);
            study = negative_concept_study(world.graph, ix, world.corpus, en_trials, taus, en_seed, en_beta);
        }
        write_output(en_out, format_negative_study(study));
        return 0;
    }

    if (*serve) {
        sv_files.resolve();
        cfg.nodes_path = sv_files.nodes;
        cfg.edges_path = sv_files.edges;
        cfg.documents_path = sv_files.docs;
        cfg.apply_environment();
        auto service = ExplorerService::load(cfg);
        HttpFrontend http(*service);
        http.bind(cfg.host, cfg.port);
        http.listen();
        return 0;
    }

    if (*validate) {
        const auto issues = validate_graph_files(vg_nodes, vg_edges);
        if (!issues.empty()) {
            for (const auto& i : issues) std::cout << "violation\t" << format_issue(i) << "\n";
            std::cerr << "error: validation: " << issues.size() << " issue(s) in graph files\n";
            return 1;
        }
        const auto g = load_graph_files(vg_nodes, vg_edges);
        const auto s = g.stats();
        std::cout << "instances\t" << s.instance_count << "\nconcepts\t" << s.concept_count << "\ninstance_edges\t"
                  << s.instance_edge_count << "\nbroader_edges\t" << s.broader_edge_count << "\nontology_pairs\t"
                  << s.ontology_pair_count << "\ndropped_self_loops\t" << s.dropped_self_loops << "\nfingerprint\t"
                  << g.fingerprint() << "\n";
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ncx::Error& e) {
        std::cerr << "error: " << ncx::to_string(e.kind()) << ": " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
    }
    return 1;
}
