#pragma once

#include "ncx/corpus.hpp"
#include "ncx/knowledge_graph.hpp"
#include "ncx/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ncx::testing {

inline KnowledgeGraph graph_from(const std::string& nodes, const std::string& edges) {
    std::istringstream n(nodes), e(edges);
    return load_graph(n, e);
}

inline Corpus corpus_from(const std::string& jsonl, const KnowledgeGraph& g) {
    std::istringstream in(jsonl);
    return ingest_documents(in, g);
}

struct World {
    SynthOutput out;
    KnowledgeGraph graph;
    Corpus corpus;
};

inline World synthetic(const SynthParams& p) {
    World w;
    w.out = gen_synthetic(p);
    w.graph = graph_from(w.out.nodes_tsv, w.out.edges_tsv);
    w.corpus = corpus_from(w.out.documents_jsonl, w.graph);
    return w;
}

/// a-b-c with C1 -> {a}.
inline KnowledgeGraph chain_graph() {
    return graph_from("a\tinstance\nb\tinstance\nc\tinstance\nC1\tconcept\n",
                      "a\tb\tinstance\nb\tc\tinstance\na\tC1\tontology\n");
}

/// Erdős–Rényi instance graph written as TSV, nodes named v0..v{n-1}.
struct RandomGraph {
    std::size_t n = 0;
    std::vector<std::vector<bool>> adj;
    KnowledgeGraph graph;
};

inline RandomGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    RandomGraph rg;
    rg.n = n;
    rg.adj.assign(n, std::vector<bool>(n, false));
    std::string nodes, edges;
    for (std::size_t i = 0; i < n; ++i) nodes += "v" + std::to_string(i) + "\tinstance\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng)) {
                rg.adj[i][j] = rg.adj[j][i] = true;
                edges += "v" + std::to_string(i) + "\tv" + std::to_string(j) + "\tinstance\n";
            }
    rg.graph = graph_from(nodes, edges);
    return rg;
}

inline InstanceId vid(const KnowledgeGraph& g, std::size_t i) {
    return g.instance("v" + std::to_string(i));
}

/// Floyd–Warshall all-pairs hop distances on an adjacency matrix.
inline std::vector<std::vector<std::uint32_t>> floyd_warshall(const std::vector<std::vector<bool>>& adj) {
    const std::size_t n = adj.size();
    constexpr std::uint32_t inf = std::numeric_limits<std::uint32_t>::max() / 4;
    std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, inf));
    for (std::size_t i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (adj[i][j])
                d[i][j] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

/// Simple u->v paths with exactly `hops` edges, counted by trying every
/// ordered choice of distinct intermediate nodes and keeping those whose
/// consecutive pairs are all adjacent.
inline std::uint64_t permutation_filter_count(const std::vector<std::vector<bool>>& adj, std::size_t u, std::size_t v,
                                              std::uint32_t hops) {
    if (u == v || hops == 0)
        return 0;
    const std::size_t n = adj.size();
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < n; ++i)
        if (i != u && i != v)
            others.push_back(i);
    const std::size_t inner = hops - 1;
    if (inner > others.size())
        return 0;
    std::uint64_t count = 0;
    std::vector<std::size_t> seq;
    std::vector<bool> used(others.size(), false);
    auto rec = [&](auto&& self) -> void {
        if (seq.size() == inner) {
            std::size_t prev = u;
            for (std::size_t x : seq) {
                if (!adj[prev][x])
                    return;
                prev = x;
            }
            if (adj[prev][v])
                ++count;
            return;
        }
        for (std::size_t i = 0; i < others.size(); ++i) {
            if (used[i])
                continue;
            used[i] = true;
            seq.push_back(others[i]);
            self(self);
            seq.pop_back();
            used[i] = false;
        }
    };
    rec(rec);
    return count;
}

/// Connectivity from the permutation-filter counts.
inline double oracle_conn(const std::vector<std::vector<bool>>& adj, const std::vector<std::size_t>& sources,
                          const std::vector<std::size_t>& context, std::uint32_t tau, double beta) {
    double total = 0.0;
    for (std::size_t v : context)
        for (std::size_t u : sources)
            for (std::uint32_t l = 1; l <= tau; ++l)
                total += std::pow(beta, l) * static_cast<double>(permutation_filter_count(adj, u, v, l));
    return total / static_cast<double>(context.size());
}

} // namespace ncx::testing
