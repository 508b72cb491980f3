#pragma once

#include "ncx/conn_estimator.hpp"
#include "ncx/corpus.hpp"
#include "ncx/inverted_index.hpp"
#include "ncx/synth.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ncx {

/// Connectivity workloads from a planted corpus: for each document, its
/// planted concept's Psi as sources and the remaining document entities as
/// context. Pairs with an empty context are skipped.
std::vector<ConnPair> planted_pairs(const KnowledgeGraph& g, const Corpus& corpus, const GeneratorLedger& ledger,
                                    std::size_t max_pairs);

/// Connectivity workloads straight from the document set: the first
/// candidate concept with a direct match and a non-empty context per document.
std::vector<ConnPair> document_pairs(const KnowledgeGraph& g, const Corpus& corpus, std::size_t max_pairs);

/// The default synthetic suite used by the convergence study.
SynthParams default_convergence_suite();

inline constexpr std::uint32_t kDefaultThetaGrid[] = {1, 5, 10, 20, 50, 100};

/// Estimator error per (theta, mode), averaged over pairs and `seeds` runs each.
ErrorProfile convergence_study(const KnowledgeGraph& g, std::span<const ConnPair> pairs, const ConnParams& p,
                               std::span<const std::uint32_t> theta_grid, std::uint32_t seeds, std::uint64_t seed,
                               std::span<const WalkMode> modes);

/// Line-delimited table with a header row.
std::string format_error_profile(const ErrorProfile& profile);

struct NegativeStudyRow {
    std::uint32_t tau = 0;
    std::size_t trials = 0;
    std::size_t wins = 0;
    std::size_t ties = 0;
    std::size_t losses = 0;
    /// wins / trials
    double win_fraction = 0.0;
    /// Mean of cdr_c(c, d) - cdr_c(c', d).
    double mean_gap = 0.0;
    double positive_zero_fraction = 0.0;
    double negative_zero_fraction = 0.0;
    /// One-sided sign test of wins against losses, ties dropped.
    double sign_test_p = 1.0;
};

struct NegativeStudy {
    std::vector<NegativeStudyRow> rows;
};

/// Samples `trials` index entries (c, d) whose document has context for c,
/// draws for each a uniform negative concept c' with non-empty Psi and no
/// match in d, and compares exact context relevance of c and c' for every
/// tau in `taus`. Throws Error(invalid_argument) when no negative exists.
NegativeStudy negative_concept_study(const KnowledgeGraph& g, const InvertedIndex& ix, const Corpus& corpus,
                                     std::size_t trials, std::span<const std::uint32_t> taus, std::uint64_t seed,
                                     double beta = 0.5);

std::string format_negative_study(const NegativeStudy& study);

/// P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
double sign_test_p_value(std::size_t wins, std::size_t losses);

} // namespace ncx
