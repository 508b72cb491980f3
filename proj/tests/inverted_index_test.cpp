#include "test_support.hpp"

#include "ncx/error.hpp"
#include "ncx/inverted_index.hpp"

#include <gtest/gtest.h>

using namespace ncx;
using namespace ncx::testing;

namespace {

std::string saved(const InvertedIndex& ix) {
    std::ostringstream out;
    save_index(ix, out);
    return out.str();
}

InvertedIndex loaded(const std::string& bytes) {
    std::istringstream in(bytes);
    return load_index(in);
}

ErrorKind load_kind(const std::string& bytes) {
    try {
        loaded(bytes);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::io;
}

World small_world(std::uint64_t seed = 3) {
    SynthParams p;
    p.seed = seed;
    p.instance_count = 120;
    p.leaf_concepts = 10;
    p.document_count = 25;
    return synthetic(p);
}

} // namespace

TEST(BuildIndex, SingleDocumentSingleEntry) {
    auto g = graph_from("a\tinstance\nC1\tconcept\n", "a\tC1\tontology\n");
    auto c = corpus_from(R"({"id":"d","entities":[{"id":"a","count":1}]})"
                         "\n",
                         g);
    ScoringParams p;
    p.broaden_depth = 0;
    auto ix = build_index(g, c, p, 1);
    ASSERT_EQ(ix.size(), 1u);
    EXPECT_EQ(ix.entries()[0].concept_name, "C1");
    EXPECT_EQ(ix.entries()[0].document, "d");
    EXPECT_NE(ix.find("C1", "d"), nullptr);
}

TEST(BuildIndex, CandidatesRollUpThroughBroader) {
    auto g = graph_from("a\tinstance\nb\tinstance\nLeaf\tconcept\nMid\tconcept\nTop\tconcept\n",
                        "Leaf\tMid\tbroader\nMid\tTop\tbroader\na\tLeaf\tontology\n");
    auto c = corpus_from(R"({"id":"d","entities":[{"id":"a","count":1},{"id":"b","count":1}]})"
                         "\n",
                         g);
    EXPECT_EQ(candidate_concepts(g, c.documents[0], 0).size(), 1u);
    EXPECT_EQ(candidate_concepts(g, c.documents[0], 1).size(), 2u);
    EXPECT_EQ(candidate_concepts(g, c.documents[0], 2).size(), 3u);
    ScoringParams p;
    auto ix = build_index(g, c, p, 1);
    EXPECT_EQ(ix.size(), 3u);
    const auto* top = ix.find("Top", "d");
    ASSERT_NE(top, nullptr);
    EXPECT_EQ(top->pivot_concept, "Leaf");
    EXPECT_EQ(top->pivot_entity, "a");
    EXPECT_EQ(ix.concept_info("Top")->extent, 1u);
    EXPECT_EQ(ix.concept_info("Top")->psi_size, 0u);
}

TEST(BuildIndex, EntriesOrderedWithinConcept) {
    auto w = small_world();
    auto ix = build_index(w.graph, w.corpus, ScoringParams{}, 7);
    ASSERT_FALSE(ix.empty());
    for (const auto& info : ix.concepts()) {
        auto span = ix.entries_for_concept(info.name);
        for (std::size_t i = 1; i < span.size(); ++i) {
            ASSERT_TRUE(span[i - 1].cdr > span[i].cdr ||
                        (span[i - 1].cdr == span[i].cdr && span[i - 1].document < span[i].document));
        }
    }
    for (const auto& e : ix.entries()) {
        EXPECT_GE(e.cdr, 0.0);
        EXPECT_DOUBLE_EQ(e.cdr, e.cdr_o * e.cdr_c);
        EXPECT_FALSE(e.matched_entities.empty());
    }
}

TEST(BuildIndex, ByteIdenticalAcrossRunsAndThreads) {
    auto w = small_world();
    const auto one = saved(build_index(w.graph, w.corpus, ScoringParams{}, 7, nullptr, 1));
    const auto again = saved(build_index(w.graph, w.corpus, ScoringParams{}, 7, nullptr, 1));
    const auto many = saved(build_index(w.graph, w.corpus, ScoringParams{}, 7, nullptr, 4));
    const auto other = saved(build_index(w.graph, w.corpus, ScoringParams{}, 8, nullptr, 1));
    EXPECT_EQ(one, again);
    EXPECT_EQ(one, many);
    EXPECT_NE(one, other);
}

TEST(Persistence, RoundTrip) {
    auto w = small_world();
    ScoringParams p;
    p.conn.tau = 3;
    p.conn.beta = 0.25;
    p.theta = 17;
    auto ix = build_index(w.graph, w.corpus, p, 123);
    const auto bytes = saved(ix);
    auto back = loaded(bytes);
    EXPECT_TRUE(back == ix);
    EXPECT_EQ(back.header().params.conn.tau, 3u);
    EXPECT_EQ(back.header().params.conn.beta, 0.25);
    EXPECT_EQ(back.header().params.theta, 17u);
    EXPECT_EQ(back.header().seed, 123u);
    EXPECT_EQ(back.header().graph_fingerprint, w.graph.fingerprint());
    EXPECT_EQ(saved(back), bytes);
}

TEST(Persistence, EmptyFileIsEmptyIndex) {
    auto ix = loaded("");
    EXPECT_TRUE(ix.empty());
    EXPECT_TRUE(ix.concepts().empty());
}

TEST(Persistence, CorruptedByteIsChecksumError) {
    auto w = small_world();
    auto bytes = saved(build_index(w.graph, w.corpus, ScoringParams{}, 1));
    const auto pos = bytes.find("\"cdr\":");
    ASSERT_NE(pos, std::string::npos);
    auto corrupt = bytes;
    corrupt[pos + 7] = corrupt[pos + 7] == '1' ? '2' : '1';
    EXPECT_EQ(load_kind(corrupt), ErrorKind::checksum);
}

TEST(Persistence, MagicVersionTruncation) {
    auto w = small_world();
    auto bytes = saved(build_index(w.graph, w.corpus, ScoringParams{}, 1));
    EXPECT_EQ(load_kind("JUNK 1\n{}\n"), ErrorKind::format);
    auto v2 = bytes;
    v2.replace(0, 6, "NCEX 2");
    EXPECT_EQ(load_kind(v2), ErrorKind::version);
    const auto last = bytes.rfind("checksum ");
    EXPECT_EQ(load_kind(bytes.substr(0, last)), ErrorKind::format);
    EXPECT_EQ(load_kind(bytes.substr(0, bytes.size() / 2)), ErrorKind::format);
}

TEST(Persistence, FileHelpers) {
    auto w = small_world();
    auto ix = build_index(w.graph, w.corpus, ScoringParams{}, 1);
    const std::string path = ::testing::TempDir() + "/ncx_index_test.ncex";
    save_index_file(ix, path);
    EXPECT_TRUE(load_index_file(path) == ix);
    EXPECT_THROW(load_index_file(path + ".missing"), Error);
}

TEST(IndexQueries, DocumentAndSpecificity) {
    auto w = small_world();
    auto ix = build_index(w.graph, w.corpus, ScoringParams{}, 1);
    const auto& d = w.corpus.documents[0];
    auto entries = ix.entries_for_document(d.id);
    ASSERT_FALSE(entries.empty());
    for (std::size_t i = 1; i < entries.size(); ++i)
        EXPECT_LT(entries[i - 1]->concept_name, entries[i]->concept_name);
    const auto& info = ix.concepts()[0];
    EXPECT_DOUBLE_EQ(ix.concept_specificity(info.name),
                     std::log(static_cast<double>(w.graph.instance_count()) / static_cast<double>(info.extent)));
    EXPECT_THROW(ix.concept_specificity("no_such_concept"), Error);
    EXPECT_TRUE(ix.entries_for_concept("no_such_concept").empty());
}
