#include "ncx/corpus.hpp"

#include "ncx/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_set>

namespace ncx {

std::uint32_t Document::count_of(InstanceId v) const {
    auto it = std::lower_bound(mentions.begin(), mentions.end(), v,
                               [](const Mention& m, InstanceId x) { return m.entity < x; });
    return it != mentions.end() && it->entity == v ? it->count : 0;
}

std::vector<InstanceId> Document::entities() const {
    std::vector<InstanceId> out;
    out.reserve(mentions.size());
    for (const auto& m : mentions) out.push_back(m.entity);
    return out;
}

std::uint32_t CorpusStats::df(InstanceId v) const {
    auto it = doc_frequency.find(index_of(v));
    return it == doc_frequency.end() ? 0 : it->second;
}

const Document* Corpus::find(std::string_view id) const {
    for (const auto& d : documents)
        if (d.id == id)
            return &d;
    return nullptr;
}

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
    throw Error(ErrorKind::parse, "documents:" + std::to_string(line) + ": malformed record: " + why);
}

} // namespace

Corpus ingest_documents(std::istream& in, const KnowledgeGraph& g) {
    Corpus corpus;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            malformed(line_no, e.what());
        }
        if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string() || !rec.contains("entities") ||
            !rec["entities"].is_array())
            malformed(line_no, "expected {\"id\": str, \"title\": str, \"entities\": [...]}");

        Document doc;
        doc.id = rec["id"].get<std::string>();
        if (doc.id.empty())
            malformed(line_no, "empty document id");
        if (auto it = rec.find("title"); it != rec.end()) {
            if (!it->is_string())
                malformed(line_no, "title must be a string");
            doc.title = it->get<std::string>();
        }
        if (auto it = rec.find("body"); it != rec.end() && !it->is_null()) {
            if (!it->is_string())
                malformed(line_no, "body must be a string");
            doc.body = it->get<std::string>();
        }
        if (!seen_ids.insert(doc.id).second)
            throw Error(ErrorKind::validation,
                        "documents:" + std::to_string(line_no) + ": duplicate document id '" + doc.id + "'");

        std::map<InstanceId, std::uint32_t> counts;
        std::size_t unknown = 0;
        for (const auto& ent : rec["entities"]) {
            if (!ent.is_object() || !ent.contains("id") || !ent["id"].is_string() || !ent.contains("count") ||
                !ent["count"].is_number_integer())
                malformed(line_no, "entity entries need string id and integer count");
            const auto count = ent["count"].get<std::int64_t>();
            if (count <= 0)
                malformed(line_no, "entity count must be positive");
            auto v = g.find_instance(ent["id"].get<std::string>());
            if (!v) {
                ++unknown;
                continue;
            }
            counts[*v] += static_cast<std::uint32_t>(count);
        }
        if (unknown > 0)
            corpus.warnings.push_back({doc.id, unknown});
        if (counts.empty()) {
            corpus.excluded.push_back(doc.id);
            continue;
        }
        for (const auto& [v, n] : counts) doc.mentions.push_back({v, n});
        corpus.documents.push_back(std::move(doc));
    }

    corpus.stats.doc_count = corpus.documents.size();
    for (const auto& d : corpus.documents)
        for (const auto& m : d.mentions) ++corpus.stats.doc_frequency[index_of(m.entity)];
    return corpus;
}

Corpus load_corpus_file(const std::string& path, const KnowledgeGraph& g) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io, "cannot open '" + path + "'");
    return ingest_documents(in, g);
}

} // namespace ncx
