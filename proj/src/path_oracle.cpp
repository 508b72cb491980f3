#include "ncx/path_oracle.hpp"

#include "ncx/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ncx {

void ConnParams::validate() const {
    if (tau < 1)
        throw Error(ErrorKind::invalid_argument, "tau must be >= 1");
    if (!(beta > 0.0 && beta <= 1.0))
        throw Error(ErrorKind::invalid_argument, "beta must lie in (0, 1]");
}

namespace {

// Depth-first walker over node-simple paths from a fixed source. `visit` is
// called for every path prefix (node, hops); returning false stops descent
// below that node.
class SimplePathDfs {
public:
    SimplePathDfs(const KnowledgeGraph& g, std::uint32_t max_hops, std::uint64_t cap)
        : g_(g), max_hops_(max_hops), cap_(cap), on_path_(g.instance_count(), 0) {}

    template <typename Visit>
    void run(InstanceId source, Visit&& visit) {
        path_.assign(1, source);
        on_path_[index_of(source)] = 1;
        descend(visit);
        on_path_[index_of(source)] = 0;
    }

    const Path& path() const noexcept { return path_; }
    std::uint64_t extensions() const noexcept { return extensions_; }

private:
    template <typename Visit>
    void descend(Visit& visit) {
        const auto hops = static_cast<std::uint32_t>(path_.size() - 1);
        if (hops == max_hops_)
            return;
        for (InstanceId n : g_.neighbors(path_.back())) {
            if (on_path_[index_of(n)])
                continue;
            if (++extensions_ > cap_)
                throw Error(ErrorKind::limit, "path enumeration exceeded " + std::to_string(cap_) + " extensions");
            path_.push_back(n);
            on_path_[index_of(n)] = 1;
            if (visit(n, hops + 1))
                descend(visit);
            on_path_[index_of(n)] = 0;
            path_.pop_back();
        }
    }

    const KnowledgeGraph& g_;
    std::uint32_t max_hops_;
    std::uint64_t cap_;
    std::uint64_t extensions_ = 0;
    std::vector<std::uint8_t> on_path_;
    Path path_;
};

} // namespace

std::uint64_t count_simple_paths(const KnowledgeGraph& g, InstanceId u, InstanceId v, std::uint32_t hops,
                                 std::uint64_t extension_cap) {
    if (u == v || hops == 0)
        return 0;
    std::uint64_t count = 0;
    SimplePathDfs dfs(g, hops, extension_cap);
    dfs.run(u, [&](InstanceId n, std::uint32_t len) {
        if (n == v) {
            if (len == hops)
                ++count;
            return false;
        }
        return true;
    });
    return count;
}

std::vector<Path> enumerate_paths(const KnowledgeGraph& g, InstanceId u, InstanceId v, std::uint32_t max_hops,
                                  std::uint64_t extension_cap) {
    std::vector<Path> out;
    if (u == v)
        return out;
    SimplePathDfs dfs(g, max_hops, extension_cap);
    try {
        dfs.run(u, [&](InstanceId n, std::uint32_t) {
            if (n == v) {
                out.push_back(dfs.path());
                return false;
            }
            return true;
        });
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::limit)
            throw;
        throw Error(ErrorKind::limit,
                    std::string(e.what()) + " (partial count " + std::to_string(out.size()) + " paths)");
    }
    return out;
}

double exact_conn(const KnowledgeGraph& g, std::span<const InstanceId> sources, std::span<const InstanceId> context,
                  const ConnParams& p, std::uint64_t extension_cap) {
    p.validate();
    if (context.empty())
        throw Error(ErrorKind::invalid_argument, "context set is empty");
    std::vector<std::uint8_t> is_source(g.instance_count(), 0);
    for (InstanceId u : sources) is_source[index_of(u)] = 1;
    for (InstanceId v : context) {
        if (is_source[index_of(v)])
            throw Error(ErrorKind::invalid_argument, "context entity '" + g.name(v) + "' is also a source");
    }

    // Damped path weight from all sources to each context node. One DFS per
    // source covers every target; paths stop at a context node because a
    // simple path ending at v cannot pass through v earlier.
    std::unordered_map<std::uint32_t, double> weight;
    for (InstanceId v : context) weight.emplace(index_of(v), 0.0);

    std::vector<double> damping(p.tau + 1, 1.0);
    for (std::uint32_t l = 1; l <= p.tau; ++l) damping[l] = damping[l - 1] * p.beta;

    std::uint64_t budget = extension_cap;
    for (InstanceId u : sources) {
        SimplePathDfs dfs(g, p.tau, budget);
        dfs.run(u, [&](InstanceId n, std::uint32_t len) {
            if (auto it = weight.find(index_of(n)); it != weight.end())
                it->second += damping[len];
            return true;
        });
        budget -= dfs.extensions();
    }

    double total = 0.0;
    for (InstanceId v : context) total += weight[index_of(v)];
    return total / static_cast<double>(context.size());
}

double exact_conn(const KnowledgeGraph& g, ConceptId c, std::span<const InstanceId> context, const ConnParams& p,
                  std::uint64_t extension_cap) {
    return exact_conn(g, g.instances_of(c), context, p, extension_cap);
}

} // namespace ncx
