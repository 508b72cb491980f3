#pragma once

#include "ncx/knowledge_graph.hpp"

#include <chrono>
#include <cstdint>
#include <limits>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace ncx {

using HopCount = std::uint32_t;
inline constexpr HopCount kUnreachable = std::numeric_limits<HopCount>::max();

/// Exact instance-space hop distances to one target, truncated at `radius`.
class HopMap {
public:
    HopMap(InstanceId target, HopCount radius, std::unordered_map<std::uint32_t, HopCount> distances)
        : target_(target), radius_(radius), distances_(std::move(distances)) {}

    InstanceId target() const noexcept { return target_; }
    HopCount radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return distances_.size(); }

    /// Distance from `n` to the target, or kUnreachable beyond the radius.
    HopCount hop(InstanceId n) const {
        auto it = distances_.find(index_of(n));
        return it == distances_.end() ? kUnreachable : it->second;
    }

    const std::unordered_map<std::uint32_t, HopCount>& distances() const noexcept { return distances_; }

private:
    InstanceId target_;
    HopCount radius_;
    std::unordered_map<std::uint32_t, HopCount> distances_;
};

/// Breadth-first search from `target` over instance edges, stopping at `radius`.
HopMap build_hop_map(const KnowledgeGraph& g, InstanceId target, HopCount radius);

/// Source of per-target hop maps for the random-walk estimator.
class HopOracle {
public:
    virtual ~HopOracle() = default;
    virtual HopCount radius() const noexcept = 0;
    virtual std::shared_ptr<const HopMap> map_for(InstanceId target) const = 0;

    HopCount hop(InstanceId n, InstanceId target) const { return map_for(target)->hop(n); }
};

/// On-demand oracle: builds a target's map on first use and keeps the most
/// recently used `capacity` maps. Safe for concurrent callers; two threads
/// racing on one target both build it and the later insert wins.
class HopCache final : public HopOracle {
public:
    HopCache(const KnowledgeGraph& g, HopCount radius, std::size_t capacity = 4096);

    HopCount radius() const noexcept override { return radius_; }
    std::shared_ptr<const HopMap> map_for(InstanceId target) const override;

    std::size_t cached() const;
    std::size_t capacity() const noexcept { return capacity_; }

private:
    using Lru = std::list<std::uint32_t>;
    struct Slot {
        std::shared_ptr<const HopMap> map;
        Lru::iterator position;
    };

    const KnowledgeGraph& g_;
    HopCount radius_;
    std::size_t capacity_;
    mutable std::mutex mutex_;
    mutable Lru order_;
    mutable std::unordered_map<std::uint32_t, Slot> slots_;
};

struct KHopIndexReport {
    std::chrono::duration<double> build_time{};
    std::size_t entries = 0;
    std::size_t estimated_bytes = 0;
};

/// Fully precomputed radius-bounded neighbourhood table for every instance.
/// Answers are identical to build_hop_map for each target.
class KHopIndex final : public HopOracle {
public:
    HopCount radius() const noexcept override { return radius_; }
    std::shared_ptr<const HopMap> map_for(InstanceId target) const override;

    const KHopIndexReport& report() const noexcept { return report_; }

private:
    friend KHopIndex build_khop_index(const KnowledgeGraph&, HopCount, std::size_t);

    HopCount radius_ = 0;
    std::vector<std::shared_ptr<const HopMap>> maps_;
    KHopIndexReport report_;
};

inline constexpr std::size_t kDefaultKHopMemoryBudget = std::size_t{512} << 20;

/// Throws Error(limit) once the running memory estimate passes `memory_budget`.
KHopIndex build_khop_index(const KnowledgeGraph& g, HopCount radius,
                           std::size_t memory_budget = kDefaultKHopMemoryBudget);

} // namespace ncx
