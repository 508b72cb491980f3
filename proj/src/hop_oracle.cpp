#include "ncx/hop_oracle.hpp"

#include "ncx/error.hpp"

namespace ncx {

HopMap build_hop_map(const KnowledgeGraph& g, InstanceId target, HopCount radius) {
    if (index_of(target) >= g.instance_count())
        throw Error(ErrorKind::not_found, "unknown entity handle " + std::to_string(index_of(target)));
    std::unordered_map<std::uint32_t, HopCount> dist;
    dist.emplace(index_of(target), 0);
    std::vector<InstanceId> frontier{target};
    for (HopCount level = 1; level <= radius && !frontier.empty(); ++level) {
        std::vector<InstanceId> next;
        for (InstanceId u : frontier) {
            for (InstanceId n : g.neighbors(u)) {
                if (dist.emplace(index_of(n), level).second)
                    next.push_back(n);
            }
        }
        frontier = std::move(next);
    }
    return HopMap(target, radius, std::move(dist));
}

HopCache::HopCache(const KnowledgeGraph& g, HopCount radius, std::size_t capacity)
    : g_(g), radius_(radius), capacity_(capacity == 0 ? 1 : capacity) {}

std::shared_ptr<const HopMap> HopCache::map_for(InstanceId target) const {
    const auto key = index_of(target);
    {
        std::lock_guard lock(mutex_);
        auto it = slots_.find(key);
        if (it != slots_.end()) {
            order_.splice(order_.begin(), order_, it->second.position);
            return it->second.map;
        }
    }
    auto map = std::make_shared<const HopMap>(build_hop_map(g_, target, radius_));
    std::lock_guard lock(mutex_);
    auto it = slots_.find(key);
    if (it != slots_.end()) {
        it->second.map = map;
        order_.splice(order_.begin(), order_, it->second.position);
        return map;
    }
    order_.push_front(key);
    slots_.emplace(key, Slot{map, order_.begin()});
    while (slots_.size() > capacity_) {
        slots_.erase(order_.back());
        order_.pop_back();
    }
    return map;
}

std::size_t HopCache::cached() const {
    std::lock_guard lock(mutex_);
    return slots_.size();
}

std::shared_ptr<const HopMap> KHopIndex::map_for(InstanceId target) const {
    if (index_of(target) >= maps_.size())
        throw Error(ErrorKind::not_found, "unknown entity handle " + std::to_string(index_of(target)));
    return maps_[index_of(target)];
}

KHopIndex build_khop_index(const KnowledgeGraph& g, HopCount radius, std::size_t memory_budget) {
    // Rough per-entry cost of an unordered_map node plus bucket slot.
    constexpr std::size_t bytes_per_entry = 40;
    constexpr std::size_t bytes_per_map = sizeof(HopMap) + 64;

    const auto start = std::chrono::steady_clock::now();
    KHopIndex index;
    index.radius_ = radius;
    index.maps_.reserve(g.instance_count());
    for (std::uint32_t i = 0; i < g.instance_count(); ++i) {
        auto map = std::make_shared<const HopMap>(build_hop_map(g, InstanceId{i}, radius));
        index.report_.entries += map->size();
        index.report_.estimated_bytes += bytes_per_map + map->size() * bytes_per_entry;
        if (index.report_.estimated_bytes > memory_budget)
            throw Error(ErrorKind::limit,
                        "k-hop index exceeds memory budget of " + std::to_string(memory_budget) +
                            " bytes after " + std::to_string(i + 1) +
                            " targets; use the per-target hop cache instead");
        index.maps_.push_back(std::move(map));
    }
    index.report_.build_time = std::chrono::steady_clock::now() - start;
    return index;
}

} // namespace ncx
