#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htn/value.hpp"

namespace htn {

/// Key of a state variable: `loc(agent)` is {"loc", [agent]}.
struct StateKey {
    std::string name;
    std::vector<Value> args;

    auto operator<=>(const StateKey&) const = default;
};

/// A set of state variables. Lookups of absent keys yield std::nullopt,
/// which callers treat as "unknown" (observations may be partial).
class State {
public:
    using Map = std::map<StateKey, Value>;

    State() = default;

    std::optional<Value> get(const StateKey& key) const;
    bool contains(const StateKey& key) const { return vars_.count(key) != 0; }

    /// Inserts or overwrites.
    void set(StateKey key, Value value);
    bool erase(const StateKey& key) { return vars_.erase(key) != 0; }

    /// Returns a copy with one variable changed.
    State with(StateKey key, Value value) const;

    template <class T>
    std::optional<T> get_as(const StateKey& key) const {
        auto v = get(key);
        if (!v) return std::nullopt;
        if (const T* p = std::get_if<T>(&*v)) return *p;
        return std::nullopt;
    }

    std::size_t size() const { return vars_.size(); }
    bool empty() const { return vars_.empty(); }
    const Map& vars() const { return vars_; }

    /// Order-stable digest of every (key, value) pair.
    std::uint64_t digest() const;

    bool operator==(const State&) const = default;

private:
    Map vars_;
};

inline StateKey key(std::string name) { return StateKey{std::move(name), {}}; }
inline StateKey key(std::string name, Value arg) { return StateKey{std::move(name), {std::move(arg)}}; }

}  // namespace htn
