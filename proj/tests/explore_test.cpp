#include "fixtures.hpp"
#include "test_support.hpp"

#include "ncx/error.hpp"
#include "ncx/explore.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ncx;
using namespace ncx::testing;

namespace {

// C1 -> {a}, C2 -> {b}; d1 = {a}, d2 = {b}, d3 = {a, b}.
struct Tiny {
    KnowledgeGraph g = graph_from("a\tinstance\nb\tinstance\nz\tinstance\nC1\tconcept\nC2\tconcept\n",
                                  "a\tC1\tontology\nb\tC2\tontology\na\tz\tinstance\n");
    Corpus c = corpus_from(R"({"id":"d1","entities":[{"id":"a","count":1}]})"
                           "\n"
                           R"({"id":"d2","entities":[{"id":"b","count":1}]})"
                           "\n"
                           R"({"id":"d3","entities":[{"id":"a","count":1},{"id":"b","count":1}]})"
                           "\n",
                           g);
    InvertedIndex ix = build_index(g, c, ScoringParams{}, 1);
};

std::vector<std::string> docs_of(const MatchResult& m) {
    std::vector<std::string> out;
    for (const auto& x : m.matches) out.push_back(x.document);
    return out;
}

} // namespace

TEST(Match, SingleConcept) {
    Tiny t;
    EXPECT_EQ(docs_of(match_documents(t.ix, {"C2"})), (std::vector<std::string>{"d2", "d3"}));
    EXPECT_EQ(docs_of(match_documents(t.ix, {"C1", "C2"})), (std::vector<std::string>{"d3"}));
}

TEST(Match, DisjointSupportIsEmpty) {
    auto ix = hand_index();
    EXPECT_TRUE(match_documents(ix, {"tennis", "chess"}).matches.empty());
}

TEST(Match, UnknownConceptWarnsInsteadOfFailing) {
    Tiny t;
    auto m = match_documents(t.ix, {"C1", "Nope"});
    EXPECT_TRUE(m.matches.empty());
    ASSERT_EQ(m.warnings.size(), 1u);
    EXPECT_NE(m.warnings[0].find("Nope"), std::string::npos);
    EXPECT_TRUE(match_documents(t.ix, {}).matches.empty());
}

TEST(Rollup, SingleMatchRelIsCdr) {
    auto ix = hand_index();
    auto r = rollup_query(ix, {{"sport", "tennis", "football"}, 10});
    ASSERT_TRUE(r.results.empty());
    auto one = rollup_query(ix, {{"chess"}, 1});
    ASSERT_EQ(one.results.size(), 1u);
    EXPECT_EQ(one.total_matches, 8u);
    EXPECT_EQ(one.results[0].document, "d13");
    EXPECT_EQ(one.results[0].rel, 0.4);
}

TEST(Rollup, OrderAndTruncation) {
    auto ix = hand_index();
    auto r = rollup_query(ix, {{"sport", "ball"}, 100});
    ASSERT_EQ(r.results.size(), 12u);
    for (std::size_t i = 1; i < r.results.size(); ++i) {
        const auto& a = r.results[i - 1];
        const auto& b = r.results[i];
        EXPECT_TRUE(a.rel > b.rel || (a.rel == b.rel && a.document < b.document));
    }
    for (const auto& d : r.results)
        EXPECT_NEAR(d.rel, d.per_concept.at("sport").cdr + d.per_concept.at("ball").cdr, 1e-12);
    auto top3 = rollup_query(ix, {{"sport", "ball"}, 3});
    ASSERT_EQ(top3.results.size(), 3u);
    EXPECT_EQ(top3.total_matches, 12u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(top3.results[i], r.results[i]);
}

TEST(Rollup, QueryValidation) {
    auto ix = hand_index();
    EXPECT_THROW(rollup_query(ix, {{}, 10}), Error);
    EXPECT_THROW(rollup_query(ix, {{"sport"}, 0}), Error);
    EXPECT_THROW(rollup_query(ix, {{"sport", "sport"}, 5}), Error);
}

TEST(RollupCandidates, EntityMenu) {
    auto g = graph_from("a\tinstance\nb\tinstance\nC1\tconcept\n", "a\tC1\tontology\n");
    EXPECT_EQ(rollup_candidates(g, "a", 2), std::vector<std::string>{"C1"});
    EXPECT_TRUE(rollup_candidates(g, "b", 2).empty());
    EXPECT_THROW(rollup_candidates(g, "zz", 2), Error);
}

TEST(RollupCandidates, MostSpecificFirst) {
    auto g = graph_from("a\tinstance\nb\tinstance\nc\tinstance\nd\tinstance\nLeaf\tconcept\nMid\tconcept\n",
                        "Leaf\tMid\tbroader\na\tLeaf\tontology\nb\tMid\tontology\nc\tMid\tontology\n");
    EXPECT_EQ(rollup_candidates(g, "a", 1), (std::vector<std::string>{"Leaf", "Mid"}));
    EXPECT_EQ(rollup_candidates(g, "a", 0), (std::vector<std::string>{"Leaf"}));
}

TEST(Subtopics, CandidatesExcludeQueryAndUnsharedConcepts) {
    auto ix = hand_index();
    EXPECT_EQ(candidate_subtopics(ix, {"sport"}), (std::vector<std::string>{"ball", "football", "tennis", "thing"}));
    EXPECT_TRUE(candidate_subtopics(ix, {"tennis", "chess"}).empty());
}

TEST(Subtopics, ComponentsMatchSpreadsheet) {
    auto ix = hand_index();
    const auto sheet = hand_sheet();
    for (const auto& [c, row] : sheet) {
        auto parts = subtopic_components(ix, c, {"sport"});
        EXPECT_NEAR(parts.coverage, row.coverage, 1e-9) << c;
        EXPECT_NEAR(parts.specificity, row.specificity, 1e-9) << c;
        EXPECT_NEAR(parts.diversity, row.diversity, 1e-9) << c;
    }
    // Literal values from an offline recomputation of the same table.
    EXPECT_NEAR(sheet.at("tennis").sbr, 13.181222003637561, 1e-9);
    EXPECT_NEAR(sheet.at("football").sbr, 9.026133564536657, 1e-9);
    EXPECT_NEAR(sheet.at("ball").sbr, 0.2050560409156505, 1e-9);
    EXPECT_EQ(sheet.at("thing").sbr, 0.0);
}

TEST(Subtopics, RankingAndPenalizedDiversity) {
    auto ix = hand_index();
    auto r = subtopic_rank(ix, {"sport"}, 10);
    ASSERT_EQ(r.suggestions.size(), 4u);
    EXPECT_EQ(r.suggestions[0].concept_name, "tennis");
    EXPECT_EQ(r.suggestions[1].concept_name, "football");
    EXPECT_EQ(r.suggestions[2].concept_name, "ball");
    EXPECT_EQ(r.suggestions[3].concept_name, "thing");
    EXPECT_EQ(r.suggestions[3].sbr, 0.0);
    EXPECT_DOUBLE_EQ(r.suggestions[2].diversity, 1.0 / 12.0);
    for (const auto& s : r.suggestions) EXPECT_NEAR(s.sbr, s.coverage * s.specificity * s.diversity, 1e-12);
    EXPECT_EQ(subtopic_rank(ix, {"sport"}, 1).suggestions.size(), 1u);
}

TEST(Subtopics, OneDocumentFormula) {
    IndexHeader h;
    h.instance_count = 40;
    std::vector<ConceptInfo> cs{{"q", 4, 4}, {"c", 2, 2}};
    std::vector<IndexEntry> es(2);
    es[0].concept_name = "q";
    es[0].document = "only";
    es[0].cdr = 1.0;
    es[0].matched_entities = {"e1"};
    es[1].concept_name = "c";
    es[1].document = "only";
    es[1].cdr = 0.5;
    es[1].matched_entities = {"e2"};
    InvertedIndex ix(h, cs, es);
    auto r = subtopic_rank(ix, {"q"});
    ASSERT_EQ(r.suggestions.size(), 1u);
    EXPECT_EQ(r.suggestions[0].coverage, 0.5);
    EXPECT_DOUBLE_EQ(r.suggestions[0].specificity, std::log(40.0 / 2.0));
    EXPECT_EQ(r.suggestions[0].diversity, 1.0);
}

TEST(Subtopics, EmptyAndInvalid) {
    auto ix = hand_index();
    EXPECT_TRUE(subtopic_rank(ix, {"tennis", "chess"}).suggestions.empty());
    EXPECT_TRUE(subtopic_rank(ix, {}).suggestions.empty());
    EXPECT_THROW(subtopic_components(ix, "sport", {"sport"}), Error);
    EXPECT_THROW(subtopic_components(ix, "chess", {"sport"}), Error);
    EXPECT_THROW(subtopic_rank(ix, {"sport"}, 0), Error);
}

TEST(Drilldown, NarrowsToSubtopicSupport) {
    auto ix = hand_index();
    auto base = rollup_query(ix, {{"sport"}, 100});
    auto narrowed = drilldown(ix, {{"sport"}, 100}, "tennis");
    EXPECT_EQ(narrowed.total_matches, 4u);
    std::set<std::string> before;
    for (const auto& d : base.results) before.insert(d.document);
    for (const auto& d : narrowed.results) EXPECT_TRUE(before.count(d.document));
}

// Brute-force per-document matching against the index on a synthetic corpus.
TEST(MatchProperty, EqualsBruteForce) {
    SynthParams p;
    p.seed = 21;
    p.document_count = 50;
    auto w = synthetic(p);
    ScoringParams sp;
    auto ix = build_index(w.graph, w.corpus, sp, 3);
    std::vector<std::string> concepts;
    for (const auto& info : ix.concepts())
        if (!ix.entries_for_concept(info.name).empty())
            concepts.push_back(info.name);
    std::mt19937_64 rng(5);
    for (int q = 0; q < 60; ++q) {
        std::vector<std::string> query;
        const std::size_t n = 1 + q % 2;
        while (query.size() < n) {
            const auto& c = concepts[rng() % concepts.size()];
            if (std::find(query.begin(), query.end(), c) == query.end())
                query.push_back(c);
        }
        std::vector<std::string> want;
        for (const auto& d : w.corpus.documents) {
            bool all = true;
            for (const auto& c : query)
                all = all && !matched_context_split(w.graph, w.graph.concept_id(c), d, sp.broaden_depth).matched.empty();
            if (all)
                want.push_back(d.id);
        }
        std::sort(want.begin(), want.end());
        EXPECT_EQ(docs_of(match_documents(ix, query)), want);
    }
}
