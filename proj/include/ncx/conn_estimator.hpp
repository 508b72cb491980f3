#pragma once

#include "ncx/hop_oracle.hpp"
#include "ncx/path_oracle.hpp"
#include "ncx/rng.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ncx {

/// Pruned walks only step to neighbours that can still reach the target in
/// the remaining hop budget; unpruned walks skip that check. Both exclude
/// nodes already on the walk.
enum class WalkMode { pruned, unpruned };

std::string_view to_string(WalkMode mode) noexcept;

/// Result of one non-repeating random walk.
struct WalkOutcome {
    bool success = false;
    /// Nodes sampled including the source.
    std::uint32_t nodes_sampled = 1;
    /// Product of eligible-neighbour counts over the steps taken.
    double inverse_probability = 1.0;
    /// beta^(nodes-1) * inverse_probability on success, otherwise 0.
    double contribution = 0.0;
};

struct ConnEstimate {
    double mean = 0.0;
    std::uint32_t theta = 0;
    std::uint32_t success_count = 0;
    /// Unbiased sample variance of the per-walk estimates (contribution * |sources|).
    double sample_variance = 0.0;
    std::uint64_t seed = 0;

    double standard_error() const;
};

inline constexpr std::uint32_t kDefaultTheta = 50;

/// One walk of the Horvitz-Thompson estimator. The source is drawn uniformly
/// from `sources`; at each step the neighbours of the current node are
/// scanned once, eligible ones counted, and one retained by reservoir
/// selection. A step with no eligible neighbour ends the walk as a failure.
WalkOutcome single_walk(const KnowledgeGraph& g, const HopOracle& hops, std::span<const InstanceId> sources,
                        InstanceId target, const ConnParams& p, Rng& rng, WalkMode mode);

/// Mean of `theta` walk contributions scaled by |sources|; the target is
/// redrawn uniformly from `context` for each walk. Walk j uses substream j of
/// `seed`, so the result depends only on the inputs and the seed.
ConnEstimate estimate_conn(const KnowledgeGraph& g, const HopOracle& hops, std::span<const InstanceId> sources,
                           std::span<const InstanceId> context, const ConnParams& p, std::uint32_t theta,
                           std::uint64_t seed, WalkMode mode = WalkMode::pruned);

/// estimate_conn with sources = Psi(c).
ConnEstimate estimate_conn(const KnowledgeGraph& g, const HopOracle& hops, ConceptId c,
                           std::span<const InstanceId> context, const ConnParams& p, std::uint32_t theta,
                           std::uint64_t seed, WalkMode mode = WalkMode::pruned);

/// A (sources, context) workload for error profiling.
struct ConnPair {
    std::string label;
    std::vector<InstanceId> sources;
    std::vector<InstanceId> context;
};

struct ErrorProfileRow {
    std::uint32_t theta = 0;
    WalkMode mode = WalkMode::pruned;
    /// Mean of |est - exact| / exact over pairs and repeats.
    double mean_relative_error = 0.0;
    /// Half-width of a normal 95% interval around the mean.
    double ci95 = 0.0;
    /// Same statistic on the normalized context relevance conn/(1+conn).
    double mean_relative_error_cdr_c = 0.0;
    std::size_t samples = 0;
};

struct ErrorProfile {
    std::vector<ErrorProfileRow> rows;
    std::vector<std::string> excluded; // labels of pairs with exact conn = 0
};

/// Relative error of the estimator against exact_conn for each theta and
/// mode. Repeat r of pair i at a given theta uses the same seed in both
/// modes, derived from `seed`.
ErrorProfile estimator_error_profile(const KnowledgeGraph& g, std::span<const ConnPair> pairs, const ConnParams& p,
                                     std::span<const std::uint32_t> theta_grid, std::uint32_t repeats,
                                     std::uint64_t seed, std::span<const WalkMode> modes);

} // namespace ncx
