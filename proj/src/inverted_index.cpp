#include "ncx/inverted_index.hpp"

#include "ncx/checksum.hpp"
#include "ncx/error.hpp"
#include "ncx/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

namespace ncx {

using nlohmann::json;

InvertedIndex::InvertedIndex(IndexHeader header, std::vector<ConceptInfo> concepts, std::vector<IndexEntry> entries)
    : header_(std::move(header)), concepts_(std::move(concepts)), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const IndexEntry& a, const IndexEntry& b) {
        if (a.concept_name != b.concept_name)
            return a.concept_name < b.concept_name;
        if (a.cdr != b.cdr)
            return a.cdr > b.cdr;
        return a.document < b.document;
    });
    for (std::size_t i = 0; i < concepts_.size(); ++i) concept_lookup_.emplace(concepts_[i].name, i);
    for (std::size_t i = 0; i < entries_.size();) {
        std::size_t j = i;
        while (j < entries_.size() && entries_[j].concept_name == entries_[i].concept_name) ++j;
        concept_ranges_.emplace(entries_[i].concept_name, std::make_pair(i, j));
        i = j;
    }
    // Concept order within a document falls out of the concept-major layout.
    for (std::size_t i = 0; i < entries_.size(); ++i) document_entries_[entries_[i].document].push_back(i);
}

const ConceptInfo* InvertedIndex::concept_info(std::string_view name) const {
    auto it = concept_lookup_.find(std::string(name));
    return it == concept_lookup_.end() ? nullptr : &concepts_[it->second];
}

std::span<const IndexEntry> InvertedIndex::entries_for_concept(std::string_view concept_name) const {
    auto it = concept_ranges_.find(std::string(concept_name));
    if (it == concept_ranges_.end())
        return {};
    return std::span<const IndexEntry>(entries_).subspan(it->second.first, it->second.second - it->second.first);
}

std::vector<const IndexEntry*> InvertedIndex::entries_for_document(std::string_view document) const {
    std::vector<const IndexEntry*> out;
    auto it = document_entries_.find(std::string(document));
    if (it == document_entries_.end())
        return out;
    for (auto i : it->second) out.push_back(&entries_[i]);
    return out;
}

const IndexEntry* InvertedIndex::find(std::string_view concept_name, std::string_view document) const {
    auto it = document_entries_.find(std::string(document));
    if (it == document_entries_.end())
        return nullptr;
    auto pos = std::lower_bound(it->second.begin(), it->second.end(), concept_name,
                                [this](std::size_t i, std::string_view c) { return entries_[i].concept_name < c; });
    if (pos == it->second.end() || entries_[*pos].concept_name != concept_name)
        return nullptr;
    return &entries_[*pos];
}

double InvertedIndex::concept_specificity(std::string_view concept_name) const {
    const auto* info = concept_info(concept_name);
    if (!info)
        throw Error(ErrorKind::not_found, "unknown concept '" + std::string(concept_name) + "'");
    return specificity(header_.instance_count, info->extent);
}

bool InvertedIndex::operator==(const InvertedIndex& other) const {
    const auto& a = header_;
    const auto& b = other.header_;
    return a.seed == b.seed && a.graph_fingerprint == b.graph_fingerprint && a.instance_count == b.instance_count &&
           a.params.conn.tau == b.params.conn.tau && a.params.conn.beta == b.params.conn.beta &&
           a.params.theta == b.params.theta && a.params.broaden_depth == b.params.broaden_depth &&
           a.params.use_exact_conn == b.params.use_exact_conn &&
           a.params.empty_context_cdr_c == b.params.empty_context_cdr_c && concepts_ == other.concepts_ &&
           entries_ == other.entries_;
}

std::vector<ConceptId> candidate_concepts(const KnowledgeGraph& g, const Document& d, std::uint32_t depth) {
    std::vector<ConceptId> out;
    for (const auto& m : d.mentions) {
        for (ConceptId c : g.concepts_of(m.entity)) {
            auto up = g.broadened_concepts(c, depth);
            out.insert(out.end(), up.begin(), up.end());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

InvertedIndex build_index(const KnowledgeGraph& g, const Corpus& corpus, const ScoringParams& params,
                          std::uint64_t seed, std::vector<std::string>* failures, std::size_t threads) {
    params.validate();
    HopCache hops(g, params.conn.tau, params.hop_cache_capacity);

    struct DocResult {
        std::vector<IndexEntry> entries;
        std::vector<std::string> failures;
    };
    std::vector<DocResult> per_doc(corpus.documents.size());

    parallel_for(
        corpus.documents.size(),
        [&](std::size_t i) {
            const auto& d = corpus.documents[i];
            for (ConceptId c : candidate_concepts(g, d, params.broaden_depth)) {
                const auto entry_seed = substream_seed(seed, (static_cast<std::uint64_t>(i) << 32) | index_of(c));
                try {
                    auto s = concept_document_rank(g, corpus.stats, hops, c, d, params, entry_seed);
                    IndexEntry e;
                    e.concept_name = g.name(c);
                    e.document = d.id;
                    e.cdr = s.cdr;
                    e.cdr_o = s.cdr_o;
                    e.cdr_c = s.cdr_c;
                    e.pivot_entity = g.name(s.ontology.pivot);
                    e.pivot_concept = g.name(s.ontology.pivot_concept);
                    for (InstanceId v : s.matched) e.matched_entities.push_back(g.name(v));
                    e.estimate = s.estimate;
                    per_doc[i].entries.push_back(std::move(e));
                } catch (const Error& err) {
                    per_doc[i].failures.push_back(g.name(c) + "/" + d.id + ": " + err.what());
                }
            }
        },
        threads, 1);

    std::vector<IndexEntry> entries;
    for (auto& r : per_doc) {
        std::move(r.entries.begin(), r.entries.end(), std::back_inserter(entries));
        if (failures)
            failures->insert(failures->end(), r.failures.begin(), r.failures.end());
    }

    std::vector<ConceptInfo> concepts;
    concepts.reserve(g.concept_count());
    for (std::uint32_t i = 0; i < g.concept_count(); ++i) {
        ConceptId c{i};
        concepts.push_back(
            {g.name(c), g.instances_of(c).size(), g.extended_instances(c, params.broaden_depth).size()});
    }
    std::sort(concepts.begin(), concepts.end(),
              [](const ConceptInfo& a, const ConceptInfo& b) { return a.name < b.name; });

    IndexHeader header;
    header.params = params;
    header.seed = seed;
    header.graph_fingerprint = g.fingerprint();
    header.instance_count = g.instance_count();
    return InvertedIndex(std::move(header), std::move(concepts), std::move(entries));
}

// ---------------------------------------------------------------------------
// Persistence: "NCEX <version>" line, JSON header line, one JSON line per
// entry, then "checksum <crc32>" over every preceding byte.

namespace {

json header_json(const InvertedIndex& ix) {
    const auto& h = ix.header();
    json concepts = json::array();
    for (const auto& c : ix.concepts()) concepts.push_back(json::array({c.name, c.psi_size, c.extent}));
    return json{
        {"params",
         {{"tau", h.params.conn.tau},
          {"beta", h.params.conn.beta},
          {"theta", h.params.theta},
          {"broaden_depth", h.params.broaden_depth},
          {"use_exact_conn", h.params.use_exact_conn},
          {"empty_context_cdr_c", h.params.empty_context_cdr_c},
          {"exact_extension_cap", h.params.exact_extension_cap}}},
        {"seed", h.seed},
        {"graph_fingerprint", h.graph_fingerprint},
        {"instance_count", h.instance_count},
        {"entry_count", ix.size()},
        {"concepts", std::move(concepts)},
    };
}

json entry_json(const IndexEntry& e) {
    json j{
        {"concept", e.concept_name},   {"document", e.document},       {"cdr", e.cdr},
        {"cdr_o", e.cdr_o},       {"cdr_c", e.cdr_c},             {"pivot_entity", e.pivot_entity},
        {"pivot_concept", e.pivot_concept}, {"matched_entities", e.matched_entities},
    };
    if (e.estimate) {
        j["theta"] = e.estimate->theta;
        j["seed"] = e.estimate->seed;
    }
    return j;
}

IndexEntry entry_from_json(const json& j) {
    IndexEntry e;
    e.concept_name = j.at("concept").get<std::string>();
    e.document = j.at("document").get<std::string>();
    e.cdr = j.at("cdr").get<double>();
    e.cdr_o = j.at("cdr_o").get<double>();
    e.cdr_c = j.at("cdr_c").get<double>();
    e.pivot_entity = j.at("pivot_entity").get<std::string>();
    e.pivot_concept = j.at("pivot_concept").get<std::string>();
    e.matched_entities = j.at("matched_entities").get<std::vector<std::string>>();
    if (j.contains("theta"))
        e.estimate = EstimateMeta{j.at("theta").get<std::uint32_t>(), j.at("seed").get<std::uint64_t>()};
    return e;
}

} // namespace

void save_index(const InvertedIndex& ix, std::ostream& out) {
    std::string body;
    body += std::string(kIndexMagic) + " " + std::to_string(kIndexFormatVersion) + "\n";
    body += header_json(ix).dump() + "\n";
    for (const auto& e : ix.entries()) body += entry_json(e).dump() + "\n";
    out << body << "checksum " << checksum_hex(body) << "\n";
    if (!out)
        throw Error(ErrorKind::io, "failed to write index");
}

InvertedIndex load_index(std::istream& in) {
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.empty())
        return {};

    const auto first_nl = data.find('\n');
    const std::string magic_line = data.substr(0, first_nl);
    const auto prefix = std::string(kIndexMagic) + " ";
    if (!magic_line.starts_with(prefix))
        throw Error(ErrorKind::format, "not an index file (bad magic)");
    if (magic_line.substr(prefix.size()) != std::to_string(kIndexFormatVersion))
        throw Error(ErrorKind::version, "index format version '" + magic_line.substr(prefix.size()) +
                                            "' is not supported (expected " +
                                            std::to_string(kIndexFormatVersion) + ")");

    // Trailing "checksum xxxxxxxx\n".
    if (data.back() != '\n')
        throw Error(ErrorKind::format, "truncated index file");
    const auto last_start = data.rfind('\n', data.size() - 2);
    if (last_start == std::string::npos || last_start < first_nl)
        throw Error(ErrorKind::format, "truncated index file");
    const std::string_view body(data.data(), last_start + 1);
    const std::string last_line = data.substr(last_start + 1, data.size() - last_start - 2);
    if (!last_line.starts_with("checksum "))
        throw Error(ErrorKind::format, "truncated index file (missing checksum)");
    const auto stored = last_line.substr(9);
    const auto actual = checksum_hex(body);
    if (stored != actual)
        throw Error(ErrorKind::checksum, "index checksum mismatch: stored " + stored + ", computed " + actual);

    std::istringstream lines{std::string(body.substr(first_nl + 1))};
    std::string line;
    if (!std::getline(lines, line))
        throw Error(ErrorKind::format, "truncated index file (missing header)");
    try {
        const auto h = json::parse(line);
        IndexHeader header;
        const auto& p = h.at("params");
        header.params.conn.tau = p.at("tau").get<std::uint32_t>();
        header.params.conn.beta = p.at("beta").get<double>();
        header.params.theta = p.at("theta").get<std::uint32_t>();
        header.params.broaden_depth = p.at("broaden_depth").get<std::uint32_t>();
        header.params.use_exact_conn = p.at("use_exact_conn").get<bool>();
        header.params.empty_context_cdr_c = p.at("empty_context_cdr_c").get<double>();
        header.params.exact_extension_cap = p.at("exact_extension_cap").get<std::uint64_t>();
        header.seed = h.at("seed").get<std::uint64_t>();
        header.graph_fingerprint = h.at("graph_fingerprint").get<std::string>();
        header.instance_count = h.at("instance_count").get<std::size_t>();
        const auto expected_entries = h.at("entry_count").get<std::size_t>();

        std::vector<ConceptInfo> concepts;
        for (const auto& c : h.at("concepts"))
            concepts.push_back({c.at(0).get<std::string>(), c.at(1).get<std::size_t>(), c.at(2).get<std::size_t>()});

        std::vector<IndexEntry> entries;
        entries.reserve(expected_entries);
        while (std::getline(lines, line)) entries.push_back(entry_from_json(json::parse(line)));
        if (entries.size() != expected_entries)
            throw Error(ErrorKind::format, "index declares " + std::to_string(expected_entries) + " entries, found " +
                                               std::to_string(entries.size()));
        return InvertedIndex(std::move(header), std::move(concepts), std::move(entries));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::format, std::string("malformed index record: ") + e.what());
    }
}

void save_index_file(const InvertedIndex& ix, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::io, "cannot write '" + path + "'");
    save_index(ix, out);
}

InvertedIndex load_index_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::io, "cannot open '" + path + "'");
    return load_index(in);
}

} // namespace ncx
