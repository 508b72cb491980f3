#include "ncx/scoring.hpp"

#include "ncx/error.hpp"

#include <algorithm>
#include <cmath>

namespace ncx {

void ScoringParams::validate() const {
    conn.validate();
    if (theta < 1)
        throw Error(ErrorKind::invalid_argument, "theta must be >= 1");
    if (!(empty_context_cdr_c >= 0.0 && empty_context_cdr_c <= 1.0))
        throw Error(ErrorKind::invalid_argument, "empty_context_cdr_c must lie in [0, 1]");
}

double term_weight(const CorpusStats& stats, InstanceId v, const Document& d) {
    const auto count = d.count_of(v);
    if (count == 0)
        throw Error(ErrorKind::invalid_argument, "entity is not mentioned in document '" + d.id + "'");
    const auto df = stats.df(v);
    if (df == 0 || df > stats.doc_count)
        throw Error(ErrorKind::invalid_argument, "corpus statistics do not cover document '" + d.id + "'");
    return count * std::log(static_cast<double>(stats.doc_count) / df);
}

double specificity(std::size_t instance_count, std::size_t extent) {
    if (extent == 0)
        throw Error(ErrorKind::invalid_argument, "specificity of a concept without instances");
    return std::log(static_cast<double>(instance_count) / static_cast<double>(extent));
}

MatchSplit matched_context_split(const KnowledgeGraph& g, ConceptId c, const Document& d, std::uint32_t depth) {
    const auto extent = g.extended_instances(c, depth);
    MatchSplit split;
    for (const auto& m : d.mentions) {
        if (std::binary_search(extent.begin(), extent.end(), m.entity))
            split.matched.push_back(m.entity);
        else
            split.context.push_back(m.entity);
    }
    return split;
}

namespace {

// Direct score of c against d, or nullopt when Psi(c) misses d entirely.
std::optional<OntologyScore> direct_relevance(const KnowledgeGraph& g, const CorpusStats& stats, ConceptId c,
                                              const Document& d) {
    auto psi = g.instances_of(c);
    std::optional<OntologyScore> best;
    for (const auto& m : d.mentions) {
        if (!std::binary_search(psi.begin(), psi.end(), m.entity))
            continue;
        const double tw = term_weight(stats, m.entity, d);
        if (!best || tw > best->pivot_weight) {
            best = OntologyScore{};
            best->pivot = m.entity;
            best->pivot_weight = tw;
        }
    }
    if (best) {
        best->pivot_concept = c;
        best->specificity = specificity(g.instance_count(), psi.size());
        best->value = best->specificity * best->pivot_weight;
    }
    return best;
}

} // namespace

OntologyScore ontology_relevance(const KnowledgeGraph& g, const CorpusStats& stats, ConceptId c, const Document& d,
                                 const ScoringParams& params) {
    if (auto direct = direct_relevance(g, stats, c, d))
        return *direct;
    std::optional<OntologyScore> best;
    for (ConceptId child : g.narrower_descendants(c, params.broaden_depth)) {
        if (child == c)
            continue;
        auto score = direct_relevance(g, stats, child, d);
        if (score && (!best || score->value > best->value))
            best = score;
    }
    if (!best)
        throw Error(ErrorKind::invalid_argument,
                    "unmatchable concept '" + g.name(c) + "' for document '" + d.id + "'");
    return *best;
}

double context_relevance(double conn) {
    if (!(conn >= 0.0))
        throw Error(ErrorKind::invalid_argument, "connectivity must be non-negative");
    return conn / (1.0 + conn);
}

ConceptDocumentScore concept_document_rank(const KnowledgeGraph& g, const CorpusStats& stats,
                                           const HopOracle& hops, ConceptId c, const Document& d,
                                           const ScoringParams& params, std::uint64_t seed) {
    params.validate();
    auto split = matched_context_split(g, c, d, params.broaden_depth);
    if (split.matched.empty())
        throw Error(ErrorKind::invalid_argument,
                    "concept '" + g.name(c) + "' does not match document '" + d.id + "'");

    ConceptDocumentScore out;
    out.concept_id = c;
    out.ontology = ontology_relevance(g, stats, c, d, params);
    out.cdr_o = out.ontology.value;
    out.matched = std::move(split.matched);

    if (split.context.empty()) {
        out.cdr_c = params.empty_context_cdr_c;
    } else {
        const auto sources = g.extended_instances(c, params.broaden_depth);
        if (params.use_exact_conn) {
            try {
                out.conn = exact_conn(g, sources, split.context, params.conn, params.exact_extension_cap);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::limit)
                    throw;
            }
        }
        if (!out.conn) {
            auto est = estimate_conn(g, hops, sources, split.context, params.conn, params.theta, seed);
            out.conn = est.mean;
            out.estimate = EstimateMeta{params.theta, seed};
        }
        out.cdr_c = context_relevance(*out.conn);
    }
    out.cdr = out.cdr_o * out.cdr_c;
    return out;
}

} // namespace ncx
