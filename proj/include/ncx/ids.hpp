#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ncx {

/// Dense handle of an instance entity (V_I).
enum class InstanceId : std::uint32_t {};
/// Dense handle of a concept entity (V_C).
enum class ConceptId : std::uint32_t {};

constexpr std::uint32_t index_of(InstanceId id) noexcept { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index_of(ConceptId id) noexcept { return static_cast<std::uint32_t>(id); }

/// Maps identifier strings to dense handles in first-seen order.
template <typename Handle>
class Interner {
public:
    /// Returns the existing handle or assigns the next one.
    Handle intern(std::string_view name) {
        auto it = index_.find(std::string(name));
        if (it != index_.end())
            return it->second;
        Handle h{static_cast<std::uint32_t>(names_.size())};
        names_.emplace_back(name);
        index_.emplace(names_.back(), h);
        return h;
    }

    std::optional<Handle> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    const std::string& name(Handle h) const { return names_.at(index_of(h)); }
    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Handle> index_;
};

} // namespace ncx
