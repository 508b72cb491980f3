#pragma once

#include "ncx/inverted_index.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ncx::testing {

/// Twenty documents over 100 instances, written as raw index rows.
///   sport     d01..d12           extent 30  (the query concept)
///   football  d01..d06           extent 10  several distinct pivot entities
///   tennis    d07..d10           extent 5
///   ball      d01..d12           extent 50  always the same entity
///   thing     d01..d12           extent 100 covers every instance
///   chess     d13..d20           extent 4   never co-occurs with sport
struct HandRow {
    std::string concept_name;
    std::string document;
    double cdr;
    std::vector<std::string> matched;
};

inline std::string doc_name(int i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "d%02d", i);
    return buf;
}

inline std::vector<HandRow> hand_rows() {
    std::vector<HandRow> rows;
    for (int i = 1; i <= 12; ++i) rows.push_back({"sport", doc_name(i), 0.5 + 0.01 * i, {"s" + std::to_string(i % 4)}});
    for (int i = 1; i <= 6; ++i)
        rows.push_back({"football", doc_name(i), 0.3 * i - 0.07, {"f" + std::to_string(i % 3), "f9"}});
    for (int i = 7; i <= 10; ++i) rows.push_back({"tennis", doc_name(i), 1.25 - 0.1 * (i - 7), {"t" + std::to_string(i)}});
    for (int i = 1; i <= 12; ++i) rows.push_back({"ball", doc_name(i), 0.2 + 0.05 * (i % 5), {"ball"}});
    for (int i = 1; i <= 12; ++i) rows.push_back({"thing", doc_name(i), 0.9, {"x" + std::to_string(i)}});
    for (int i = 13; i <= 20; ++i) rows.push_back({"chess", doc_name(i), 0.4, {"c" + std::to_string(i)}});
    return rows;
}

inline const std::map<std::string, std::size_t>& hand_extents() {
    static const std::map<std::string, std::size_t> extents{
        {"sport", 30}, {"football", 10}, {"tennis", 5}, {"ball", 50}, {"thing", 100}, {"chess", 4}};
    return extents;
}

inline constexpr std::size_t kHandInstances = 100;

inline InvertedIndex hand_index() {
    IndexHeader header;
    header.instance_count = kHandInstances;
    header.graph_fingerprint = "00000000";
    std::vector<ConceptInfo> concepts;
    for (const auto& [name, extent] : hand_extents()) concepts.push_back({name, extent, extent});
    std::vector<IndexEntry> entries;
    for (const auto& r : hand_rows()) {
        IndexEntry e;
        e.concept_name = r.concept_name;
        e.document = r.document;
        e.cdr = r.cdr;
        e.cdr_o = r.cdr;
        e.cdr_c = 1.0;
        e.pivot_entity = r.matched.front();
        e.pivot_concept = r.concept_name;
        e.matched_entities = r.matched;
        entries.push_back(std::move(e));
    }
    return InvertedIndex(std::move(header), std::move(concepts), std::move(entries));
}

struct SheetRow {
    double coverage = 0.0;
    double specificity = 0.0;
    double diversity = 0.0;
    double sbr = 0.0;
};

/// Column-by-column recomputation of the subtopic score for query {sport},
/// straight from the raw rows.
inline std::map<std::string, SheetRow> hand_sheet() {
    std::set<std::string> dq;
    for (const auto& r : hand_rows())
        if (r.concept_name == "sport")
            dq.insert(r.document);
    std::map<std::string, SheetRow> sheet;
    std::map<std::string, std::set<std::string>> entities;
    std::map<std::string, int> support;
    for (const auto& r : hand_rows()) {
        if (r.concept_name == "sport" || !dq.count(r.document))
            continue;
        sheet[r.concept_name].coverage += r.cdr;
        entities[r.concept_name].insert(r.matched.begin(), r.matched.end());
        ++support[r.concept_name];
    }
    for (auto& [c, row] : sheet) {
        row.specificity = std::log(static_cast<double>(kHandInstances) / static_cast<double>(hand_extents().at(c)));
        row.diversity = static_cast<double>(entities[c].size()) / support[c];
        row.sbr = row.coverage * row.specificity * row.diversity;
    }
    return sheet;
}

} // namespace ncx::testing
