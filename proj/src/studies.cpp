#include "ncx/studies.hpp"

#include "ncx/error.hpp"
#include "ncx/rng.hpp"
#include "ncx/scoring.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace ncx {

std::vector<ConnPair> planted_pairs(const KnowledgeGraph& g, const Corpus& corpus, const GeneratorLedger& ledger,
                                    std::size_t max_pairs) {
    std::vector<ConnPair> pairs;
    for (const auto& d : corpus.documents) {
        if (pairs.size() >= max_pairs)
            break;
        auto it = ledger.document_concept.find(d.id);
        if (it == ledger.document_concept.end())
            continue;
        const ConceptId c = g.concept_id(it->second);
        auto split = matched_context_split(g, c, d, 0);
        if (split.matched.empty() || split.context.empty())
            continue;
        auto psi = g.instances_of(c);
        pairs.push_back({it->second + "/" + d.id, {psi.begin(), psi.end()}, std::move(split.context)});
    }
    return pairs;
}

std::vector<ConnPair> document_pairs(const KnowledgeGraph& g, const Corpus& corpus, std::size_t max_pairs) {
    std::vector<ConnPair> pairs;
    for (const auto& d : corpus.documents) {
        if (pairs.size() >= max_pairs)
            break;
        for (ConceptId c : candidate_concepts(g, d, 0)) {
            auto split = matched_context_split(g, c, d, 0);
            if (split.matched.empty() || split.context.empty())
                continue;
            auto psi = g.instances_of(c);
            pairs.push_back({g.name(c) + "/" + d.id, {psi.begin(), psi.end()}, std::move(split.context)});
            break;
        }
    }
    return pairs;
}

SynthParams default_convergence_suite() {
    SynthParams p;
    p.seed = 20240501;
    return p;
}

ErrorProfile convergence_study(const KnowledgeGraph& g, std::span<const ConnPair> pairs, const ConnParams& p,
                               std::span<const std::uint32_t> theta_grid, std::uint32_t seeds, std::uint64_t seed,
                               std::span<const WalkMode> modes) {
    if (seeds == 0)
        throw Error(ErrorKind::invalid_argument, "at least one seed is required");
    return estimator_error_profile(g, pairs, p, theta_grid, seeds, seed, modes);
}

namespace {

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

} // namespace

std::string format_error_profile(const ErrorProfile& profile) {
    std::string out = "theta\tmode\tmean_rel_err\tci95\tmean_rel_err_cdr_c\tsamples\n";
    for (const auto& r : profile.rows) {
        out += std::to_string(r.theta) + "\t" + std::string(to_string(r.mode)) + "\t" +
               fmt_double(r.mean_relative_error) + "\t" + fmt_double(r.ci95) + "\t" +
               fmt_double(r.mean_relative_error_cdr_c) + "\t" + std::to_string(r.samples) + "\n";
    }
    for (const auto& label : profile.excluded) out += "# excluded (exact conn = 0): " + label + "\n";
    return out;
}

double sign_test_p_value(std::size_t wins, std::size_t losses) {
    const std::size_t n = wins + losses;
    if (n == 0 || wins == 0)
        return 1.0;
    boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
    return boost::math::cdf(boost::math::complement(dist, static_cast<double>(wins - 1)));
}

NegativeStudy negative_concept_study(const KnowledgeGraph& g, const InvertedIndex& ix, const Corpus& corpus,
                                     std::size_t trials, std::span<const std::uint32_t> taus, std::uint64_t seed,
                                     double beta) {
    if (trials == 0)
        throw Error(ErrorKind::invalid_argument, "at least one trial is required");
    const auto depth = ix.header().params.broaden_depth;

    // Entries with a non-empty context; cdr_c is a connectivity score only there.
    std::vector<std::size_t> eligible;
    const auto entries = ix.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto* d = corpus.find(entries[i].document);
        auto c = g.find_concept(entries[i].concept_name);
        if (!d || !c)
            continue;
        if (!matched_context_split(g, *c, *d, depth).context.empty())
            eligible.push_back(i);
    }
    if (eligible.empty())
        throw Error(ErrorKind::invalid_argument, "corpus too small: no index entry has context entities");

    Rng rng(mix64(seed));
    std::vector<std::size_t> picks;
    if (trials <= eligible.size()) {
        picks = eligible;
        std::shuffle(picks.begin(), picks.end(), rng);
        picks.resize(trials);
    } else {
        for (std::size_t t = 0; t < trials; ++t) picks.push_back(eligible[uniform_index(rng, eligible.size())]);
    }

    struct Trial {
        ConceptId positive;
        ConceptId negative;
        const Document* doc;
    };
    std::vector<Trial> sampled;
    for (auto i : picks) {
        const auto& e = entries[i];
        const auto* d = corpus.find(e.document);
        std::vector<ConceptId> negatives;
        for (std::uint32_t k = 0; k < g.concept_count(); ++k) {
            ConceptId cand{k};
            if (g.instances_of(cand).empty())
                continue;
            const auto extent = g.extended_instances(cand, depth);
            const bool touches = std::any_of(d->mentions.begin(), d->mentions.end(), [&](const Mention& m) {
                return std::binary_search(extent.begin(), extent.end(), m.entity);
            });
            if (!touches)
                negatives.push_back(cand);
        }
        if (negatives.empty())
            throw Error(ErrorKind::invalid_argument,
                        "corpus too small: no negative concept is disjoint from document '" + d->id + "'");
        sampled.push_back({g.concept_id(e.concept_name), negatives[uniform_index(rng, negatives.size())], d});
    }

    NegativeStudy study;
    for (std::uint32_t tau : taus) {
        const ConnParams p{tau, beta};
        NegativeStudyRow row;
        row.tau = tau;
        row.trials = sampled.size();
        double gap_sum = 0.0;
        std::size_t pos_zero = 0;
        std::size_t neg_zero = 0;
        for (const auto& t : sampled) {
            const auto pos_split = matched_context_split(g, t.positive, *t.doc, depth);
            const auto pos = context_relevance(
                exact_conn(g, g.extended_instances(t.positive, depth), pos_split.context, p));
            const auto neg_context = t.doc->entities();
            const auto neg =
                context_relevance(exact_conn(g, g.extended_instances(t.negative, depth), neg_context, p));
            if (pos > neg)
                ++row.wins;
            else if (pos < neg)
                ++row.losses;
            else
                ++row.ties;
            pos_zero += pos == 0.0;
            neg_zero += neg == 0.0;
            gap_sum += pos - neg;
        }
        row.win_fraction = static_cast<double>(row.wins) / row.trials;
        row.mean_gap = gap_sum / row.trials;
        row.positive_zero_fraction = static_cast<double>(pos_zero) / row.trials;
        row.negative_zero_fraction = static_cast<double>(neg_zero) / row.trials;
        row.sign_test_p = sign_test_p_value(row.wins, row.losses);
        study.rows.push_back(row);
    }
    return study;
}

std::string format_negative_study(const NegativeStudy& study) {
    std::string out =
        "tau\ttrials\twins\tties\tlosses\twin_fraction\tmean_gap\tpositive_zero_fraction\tnegative_zero_fraction\t"
        "sign_test_p\n";
    for (const auto& r : study.rows) {
        out += std::to_string(r.tau) + "\t" + std::to_string(r.trials) + "\t" + std::to_string(r.wins) + "\t" +
               std::to_string(r.ties) + "\t" + std::to_string(r.losses) + "\t" + fmt_double(r.win_fraction) + "\t" +
               fmt_double(r.mean_gap) + "\t" + fmt_double(r.positive_zero_fraction) + "\t" +
               fmt_double(r.negative_zero_fraction) + "\t" + fmt_double(r.sign_test_p) + "\n";
    }
    return out;
}

} // namespace ncx
