#pragma once

#include "ncx/knowledge_graph.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ncx {

/// Hop constraint and damping of the connectivity score.
struct ConnParams {
    std::uint32_t tau = 2;
    double beta = 0.5;

    /// Throws Error(invalid_argument) unless tau >= 1 and 0 < beta <= 1.
    void validate() const;
};

/// Upper bound on partial path extensions explored by one oracle call.
inline constexpr std::uint64_t kDefaultExtensionCap = 10'000'000;

using Path = std::vector<InstanceId>;

/// Number of node-simple paths from u to v with exactly `hops` edges.
std::uint64_t count_simple_paths(const KnowledgeGraph& g, InstanceId u, InstanceId v, std::uint32_t hops,
                                 std::uint64_t extension_cap = kDefaultExtensionCap);

/// All node-simple u->v paths with 1..max_hops edges, lexicographic by handle.
/// Throws Error(limit) reporting the partial count when the cap is hit.
std::vector<Path> enumerate_paths(const KnowledgeGraph& g, InstanceId u, InstanceId v, std::uint32_t max_hops,
                                  std::uint64_t extension_cap = kDefaultExtensionCap);

/// Exact connectivity score
///   sum_{v in context} sum_{u in sources} sum_{l=1..tau} beta^l |paths_l(u,v)| / |context|.
/// `context` is treated as a list, so duplicated entries weigh twice in both
/// numerator and denominator. Requires a non-empty context disjoint from sources.
double exact_conn(const KnowledgeGraph& g, std::span<const InstanceId> sources, std::span<const InstanceId> context,
                  const ConnParams& p, std::uint64_t extension_cap = kDefaultExtensionCap);

/// exact_conn with sources = Psi(c).
double exact_conn(const KnowledgeGraph& g, ConceptId c, std::span<const InstanceId> context, const ConnParams& p,
                  std::uint64_t extension_cap = kDefaultExtensionCap);

} // namespace ncx
