#include "ncx/synth.hpp"

#include "ncx/error.hpp"
#include "ncx/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace ncx {

namespace {

std::string numbered(const char* prefix, std::size_t i, int width) {
    std::string n = std::to_string(i);
    if (static_cast<int>(n.size()) < width)
        n.insert(0, static_cast<std::size_t>(width) - n.size(), '0');
    return prefix + n;
}

int digits(std::size_t n) {
    int d = 1;
    while (n >= 10) {
        n /= 10;
        ++d;
    }
    return d;
}

std::size_t uniform_between(Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + uniform_index(rng, hi - lo + 1);
}

bool coin(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

} // namespace

void SynthParams::validate() const {
    auto fail = [](const std::string& why) { throw Error(ErrorKind::invalid_argument, "infeasible synthetic params: " + why); };
    if (instance_count == 0 || leaf_concepts == 0 || document_count == 0 || group_branching == 0)
        fail("counts must be positive");
    if (fanout_min == 0 || fanout_min > fanout_max)
        fail("fanout range must satisfy 1 <= min <= max");
    if (leaf_concepts > instance_count)
        fail("more leaf concepts than instances");
    const std::size_t cluster = instance_count / leaf_concepts;
    if (fanout_max >= cluster)
        fail("fanout " + std::to_string(fanout_max) + " does not fit a cluster of " + std::to_string(cluster));
    if (matched_min == 0 || matched_min > matched_max || matched_max > fanout_min)
        fail("matched range must satisfy 1 <= min <= max <= fanout_min");
    if (entities_min <= matched_max || entities_min > entities_max)
        fail("entities range must leave room for at least one context entity");
    if (entities_max + fanout_max > instance_count)
        fail("documents larger than the instance space");
    for (double p : {type_coverage, intra_cluster_fraction, cluster_affinity})
        if (!(p >= 0.0 && p <= 1.0))
            fail("probabilities must lie in [0, 1]");
    if (!(mean_degree >= 0.0) || mean_degree > static_cast<double>(instance_count - 1))
        fail("mean degree out of range");
    const double edges = mean_degree * instance_count / 2.0;
    const double intra_capacity = leaf_concepts * (cluster * (cluster - 1) / 2.0);
    if (edges * intra_cluster_fraction > intra_capacity)
        fail("intra-cluster edge share exceeds cluster capacity");
}

nlohmann::json GeneratorLedger::to_json() const {
    return {
        {"psi", psi},
        {"clusters", clusters},
        {"broader", broader},
        {"document_concept", document_concept},
        {"instance_count", instance_count},
        {"concept_count", concept_count},
        {"instance_edge_count", instance_edge_count},
        {"document_count", document_count},
        {"doc_frequency", doc_frequency},
    };
}

SynthOutput gen_synthetic(const SynthParams& params) {
    params.validate();
    Rng rng(mix64(params.seed));
    const std::size_t n = params.instance_count;
    const std::size_t leaves = params.leaf_concepts;
    const std::size_t cluster_size = n / leaves;
    auto cluster_of = [&](std::size_t i) { return std::min(i / cluster_size, leaves - 1); };
    auto cluster_begin = [&](std::size_t k) { return k * cluster_size; };
    auto cluster_end = [&](std::size_t k) { return k + 1 == leaves ? n : (k + 1) * cluster_size; };

    SynthOutput out;
    auto& ledger = out.ledger;
    std::vector<std::string> inst(n);
    for (std::size_t i = 0; i < n; ++i) inst[i] = numbered("e", i, digits(n - 1));

    std::vector<std::string> leaf_names(leaves);
    for (std::size_t k = 0; k < leaves; ++k) leaf_names[k] = numbered("leaf_", k, digits(leaves - 1));
    const std::size_t groups = (leaves + params.group_branching - 1) / params.group_branching;
    std::vector<std::string> group_names(groups);
    for (std::size_t j = 0; j < groups; ++j) group_names[j] = numbered("group_", j, digits(groups - 1));
    std::vector<std::string> type_names(params.type_concepts);
    for (std::size_t t = 0; t < params.type_concepts; ++t) type_names[t] = numbered("type_", t, 1);

    // Nodes.
    std::string& nodes = out.nodes_tsv;
    nodes += "# synthetic knowledge graph, seed " + std::to_string(params.seed) + "\n";
    for (const auto& v : inst) nodes += v + "\tinstance\n";
    for (const auto& c : leaf_names) nodes += c + "\tconcept\n";
    for (const auto& c : group_names) nodes += c + "\tconcept\n";
    nodes += "root\tconcept\n";
    for (const auto& c : type_names) nodes += c + "\tconcept\n";
    ledger.instance_count = n;
    ledger.concept_count = leaves + groups + 1 + params.type_concepts;

    // Psi.
    std::vector<std::vector<std::size_t>> leaf_psi(leaves);
    for (std::size_t k = 0; k < leaves; ++k) {
        std::vector<std::size_t> members;
        for (std::size_t i = cluster_begin(k); i < cluster_end(k); ++i) members.push_back(i);
        std::shuffle(members.begin(), members.end(), rng);
        members.resize(uniform_between(rng, params.fanout_min, params.fanout_max));
        std::sort(members.begin(), members.end());
        leaf_psi[k] = members;
        for (auto i : members) ledger.psi[leaf_names[k]].push_back(inst[i]);
        for (std::size_t i = cluster_begin(k); i < cluster_end(k); ++i) ledger.clusters[leaf_names[k]].push_back(inst[i]);
    }
    std::vector<std::vector<std::size_t>> type_psi(params.type_concepts);
    for (std::size_t t = 0; t < params.type_concepts; ++t) {
        for (std::size_t i = 0; i < n; ++i)
            if (coin(rng, params.type_coverage))
                type_psi[t].push_back(i);
        if (type_psi[t].empty())
            type_psi[t].push_back(uniform_index(rng, n));
        for (auto i : type_psi[t]) ledger.psi[type_names[t]].push_back(inst[i]);
    }

    // Instance edges: an exact count, so mean degree hits the target.
    const auto edge_target = static_cast<std::size_t>(std::llround(params.mean_degree * n / 2.0));
    const auto intra_target = static_cast<std::size_t>(std::llround(edge_target * params.intra_cluster_fraction));
    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 * (edge_target + 1);
    while (edge_set.size() < edge_target) {
        if (++attempts > max_attempts)
            throw Error(ErrorKind::invalid_argument, "infeasible synthetic params: cannot place instance edges");
        const std::size_t a = uniform_index(rng, n);
        std::size_t b;
        if (edge_set.size() < intra_target) {
            const auto k = cluster_of(a);
            b = cluster_begin(k) + uniform_index(rng, cluster_end(k) - cluster_begin(k));
        } else {
            b = uniform_index(rng, n);
        }
        if (a == b)
            continue;
        edge_set.emplace(std::min(a, b), std::max(a, b));
    }
    ledger.instance_edge_count = edge_set.size();

    std::string& edges = out.edges_tsv;
    edges += "# synthetic knowledge graph, seed " + std::to_string(params.seed) + "\n";
    for (const auto& [a, b] : edge_set) edges += inst[a] + "\t" + inst[b] + "\tinstance\n";
    for (std::size_t k = 0; k < leaves; ++k) {
        const auto& group = group_names[k / params.group_branching];
        edges += leaf_names[k] + "\t" + group + "\tbroader\n";
        ledger.broader[leaf_names[k]] = group;
    }
    for (const auto& g : group_names) {
        edges += g + "\troot\tbroader\n";
        ledger.broader[g] = "root";
    }
    for (std::size_t k = 0; k < leaves; ++k)
        for (auto i : leaf_psi[k]) edges += inst[i] + "\t" + leaf_names[k] + "\tontology\n";
    for (std::size_t t = 0; t < params.type_concepts; ++t)
        for (auto i : type_psi[t]) edges += inst[i] + "\t" + type_names[t] + "\tontology\n";

    // Documents.
    const int doc_digits = digits(params.document_count - 1);
    for (std::size_t di = 0; di < params.document_count; ++di) {
        const std::string doc_id = numbered("doc", di, doc_digits);
        const std::size_t k = uniform_index(rng, leaves);
        const auto& psi = leaf_psi[k];
        const std::size_t total = uniform_between(rng, params.entities_min, params.entities_max);
        const std::size_t matched = uniform_between(rng, params.matched_min, std::min(params.matched_max, psi.size()));

        std::vector<std::size_t> chosen(psi.begin(), psi.end());
        std::shuffle(chosen.begin(), chosen.end(), rng);
        chosen.resize(matched);
        auto taken = [&](std::size_t i) {
            return std::find(chosen.begin(), chosen.end(), i) != chosen.end() ||
                   std::binary_search(psi.begin(), psi.end(), i);
        };
        std::vector<std::size_t> local;
        for (std::size_t i = cluster_begin(k); i < cluster_end(k); ++i)
            if (!std::binary_search(psi.begin(), psi.end(), i))
                local.push_back(i);

        while (chosen.size() < total) {
            if (coin(rng, params.cluster_affinity)) {
                std::vector<std::size_t> free;
                for (auto i : local)
                    if (!taken(i))
                        free.push_back(i);
                if (!free.empty()) {
                    chosen.push_back(free[uniform_index(rng, free.size())]);
                    continue;
                }
            }
            const std::size_t pick = uniform_index(rng, n);
            if (!taken(pick))
                chosen.push_back(pick);
        }

        nlohmann::json entities = nlohmann::json::array();
        for (auto i : chosen) {
            const auto count = uniform_between(rng, 1, 3);
            entities.push_back({{"id", inst[i]}, {"count", count}});
            ++ledger.doc_frequency[inst[i]];
        }
        nlohmann::json rec{{"id", doc_id},
                           {"title", "Synthetic document " + std::to_string(di) + " on " + leaf_names[k]},
                           {"entities", std::move(entities)}};
        out.documents_jsonl += rec.dump() + "\n";
        ledger.document_concept[doc_id] = leaf_names[k];
    }
    ledger.document_count = params.document_count;
    return out;
}

void write_synthetic(const SynthOutput& out, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto write = [&](const char* name, const std::string& content) {
        std::ofstream f(fs::path(dir) / name, std::ios::binary | std::ios::trunc);
        if (!f || !(f << content))
            throw Error(ErrorKind::io, "cannot write '" + (fs::path(dir) / name).string() + "'");
    };
    write("nodes.tsv", out.nodes_tsv);
    write("edges.tsv", out.edges_tsv);
    write("documents.jsonl", out.documents_jsonl);
    write("ledger.json", out.ledger.to_json().dump(2) + "\n");
}

} // namespace ncx
