#include "htn/value.hpp"

#include <sstream>
#include <type_traits>

#include "htn/state.hpp"
#include "htn/task.hpp"

namespace htn {

std::string to_string(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, IntPair>) {
                return "(" + std::to_string(x.x) + "," + std::to_string(x.y) + ")";
            } else {
                return x.name;
            }
        },
        v);
}

std::ostream& operator<<(std::ostream& os, const Value& v) { return os << to_string(v); }

void Fnv1a::bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h_ ^= p[i];
        h_ *= 0x100000001b3ULL;
    }
}

void Fnv1a::u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(buf, sizeof buf);
}

void Fnv1a::str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
}

void Fnv1a::value(const Value& v) {
    u64(v.index());
    std::visit(
        [this](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) {
                u64(x ? 1 : 0);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                u64(static_cast<std::uint64_t>(x));
            } else if constexpr (std::is_same_v<T, IntPair>) {
                u64(static_cast<std::uint64_t>(x.x));
                u64(static_cast<std::uint64_t>(x.y));
            } else {
                str(x.name);
            }
        },
        v);
}

// State

std::optional<Value> State::get(const StateKey& key) const {
    auto it = vars_.find(key);
    if (it == vars_.end()) return std::nullopt;
    return it->second;
}

void State::set(StateKey key, Value value) { vars_.insert_or_assign(std::move(key), std::move(value)); }

State State::with(StateKey key, Value value) const {
    State copy = *this;
    copy.set(std::move(key), std::move(value));
    return copy;
}

std::uint64_t State::digest() const {
    Fnv1a h;
    h.u64(vars_.size());
    for (const auto& [k, v] : vars_) {
        h.str(k.name);
        h.u64(k.args.size());
        for (const auto& a : k.args) h.value(a);
        h.value(v);
    }
    return h.digest();
}

// Task

std::string to_string(const Task& t) {
    std::string out = t.name;
    if (!t.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i) out += ',';
            out += to_string(t.args[i]);
        }
        out += ')';
    }
    return out;
}

std::string to_string(const TaskList& tasks) {
    std::string out = "(";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (i) out += ", ";
        out += to_string(tasks[i]);
    }
    return out + ")";
}

std::ostream& operator<<(std::ostream& os, const Task& t) { return os << to_string(t); }

TaskList concat(const TaskList& head, const TaskList& tail) {
    TaskList out;
    out.reserve(head.size() + tail.size());
    out.insert(out.end(), head.begin(), head.end());
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

}  // namespace htn
