#include "ncx/explore.hpp"

#include "ncx/error.hpp"
#include "ncx/scoring.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace ncx {

void ConceptQuery::validate() const {
    if (concepts.empty())
        throw Error(ErrorKind::invalid_argument, "query needs at least one concept");
    if (k == 0)
        throw Error(ErrorKind::invalid_argument, "k must be >= 1");
    std::unordered_set<std::string> seen;
    for (const auto& c : concepts) {
        if (c.empty())
            throw Error(ErrorKind::invalid_argument, "empty concept id in query");
        if (!seen.insert(c).second)
            throw Error(ErrorKind::invalid_argument, "concept '" + c + "' repeated in query");
    }
}

MatchResult match_documents(const InvertedIndex& ix, const std::vector<std::string>& concepts) {
    MatchResult out;
    if (concepts.empty())
        return out;
    for (const auto& c : concepts) {
        if (!ix.knows_concept(c))
            out.warnings.push_back("unknown concept '" + c + "'");
    }
    if (!out.warnings.empty())
        return out;

    // Drive the intersection from the concept with the fewest entries.
    const auto driver = std::min_element(concepts.begin(), concepts.end(), [&](const auto& a, const auto& b) {
        return ix.entries_for_concept(a).size() < ix.entries_for_concept(b).size();
    });
    std::vector<std::string> docs;
    for (const auto& e : ix.entries_for_concept(*driver)) docs.push_back(e.document);
    std::sort(docs.begin(), docs.end());

    for (const auto& d : docs) {
        DocumentMatch m{d, {}};
        for (const auto& c : concepts) {
            const auto* e = ix.find(c, d);
            if (!e)
                break;
            m.entries.push_back(e);
        }
        if (m.entries.size() == concepts.size())
            out.matches.push_back(std::move(m));
    }
    return out;
}

RollupResult rollup_query(const InvertedIndex& ix, const ConceptQuery& q) {
    q.validate();
    auto matched = match_documents(ix, q.concepts);
    RollupResult out;
    out.warnings = std::move(matched.warnings);
    out.total_matches = matched.matches.size();
    for (const auto& m : matched.matches) {
        RankedDocument r;
        r.document = m.document;
        for (const auto* e : m.entries) {
            r.rel += e->cdr;
            r.per_concept.emplace(e->concept_name, ConceptExplanation{e->cdr, e->cdr_o, e->cdr_c, e->pivot_entity,
                                                                 e->pivot_concept, e->matched_entities});
        }
        out.results.push_back(std::move(r));
    }
    std::sort(out.results.begin(), out.results.end(), [](const RankedDocument& a, const RankedDocument& b) {
        if (a.rel != b.rel)
            return a.rel > b.rel;
        return a.document < b.document;
    });
    if (out.results.size() > q.k)
        out.results.resize(q.k);
    return out;
}

std::vector<std::string> rollup_candidates(const KnowledgeGraph& g, std::string_view entity, std::uint32_t depth) {
    const InstanceId v = g.instance(entity);
    std::set<ConceptId> menu;
    for (ConceptId c : g.concepts_of(v))
        for (ConceptId up : g.broadened_concepts(c, depth)) menu.insert(up);

    struct Item {
        double specificity;
        const std::string* name;
    };
    std::vector<Item> items;
    for (ConceptId c : menu)
        items.push_back({specificity(g.instance_count(), g.extended_instances(c, depth).size()), &g.name(c)});
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.specificity != b.specificity)
            return a.specificity > b.specificity;
        return *a.name < *b.name;
    });
    std::vector<std::string> out;
    for (const auto& it : items) out.push_back(*it.name);
    return out;
}

std::vector<std::string> candidate_subtopics(const InvertedIndex& ix, const std::vector<std::string>& concepts) {
    const auto matched = match_documents(ix, concepts);
    const std::set<std::string> exclude(concepts.begin(), concepts.end());
    std::set<std::string> out;
    for (const auto& m : matched.matches)
        for (const auto* e : ix.entries_for_document(m.document))
            if (!exclude.contains(e->concept_name))
                out.insert(e->concept_name);
    return {out.begin(), out.end()};
}

namespace {

SubtopicComponents components_over(const InvertedIndex& ix, std::string_view concept_name, const MatchResult& matched) {
    SubtopicComponents out;
    std::set<std::string> distinct;
    for (const auto& m : matched.matches) {
        const auto* e = ix.find(concept_name, m.document);
        if (!e)
            continue;
        out.coverage += e->cdr;
        ++out.support_docs;
        distinct.insert(e->matched_entities.begin(), e->matched_entities.end());
    }
    if (out.support_docs == 0)
        throw Error(ErrorKind::invalid_argument, "concept '" + std::string(concept_name) + "' is not a candidate subtopic");
    out.specificity = ix.concept_specificity(concept_name);
    out.diversity = static_cast<double>(distinct.size()) / static_cast<double>(out.support_docs);
    return out;
}

} // namespace

SubtopicComponents subtopic_components(const InvertedIndex& ix, std::string_view concept_name,
                                       const std::vector<std::string>& concepts) {
    if (std::find(concepts.begin(), concepts.end(), concept_name) != concepts.end())
        throw Error(ErrorKind::invalid_argument, "concept '" + std::string(concept_name) + "' is already in the query");
    return components_over(ix, concept_name, match_documents(ix, concepts));
}

SubtopicResult subtopic_rank(const InvertedIndex& ix, const std::vector<std::string>& concepts, std::size_t k) {
    if (k == 0)
        throw Error(ErrorKind::invalid_argument, "k must be >= 1");
    SubtopicResult out;
    const auto matched = match_documents(ix, concepts);
    out.warnings = matched.warnings;
    for (const auto& c : candidate_subtopics(ix, concepts)) {
        const auto parts = components_over(ix, c, matched);
        out.suggestions.push_back({c, parts.coverage * parts.specificity * parts.diversity, parts.coverage,
                                   parts.specificity, parts.diversity, parts.support_docs});
    }
    std::sort(out.suggestions.begin(), out.suggestions.end(),
              [](const SubtopicSuggestion& a, const SubtopicSuggestion& b) {
                  if (a.sbr != b.sbr)
                      return a.sbr > b.sbr;
                  return a.concept_name < b.concept_name;
              });
    if (out.suggestions.size() > k)
        out.suggestions.resize(k);
    return out;
}

RollupResult drilldown(const InvertedIndex& ix, const ConceptQuery& q, const std::string& subtopic) {
    ConceptQuery augmented = q;
    augmented.concepts.push_back(subtopic);
    return rollup_query(ix, augmented);
}

} // namespace ncx
