#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>

namespace htn {

/// Interned-by-value symbolic constant, e.g. `exit`, `right`, `boat2`.
struct Symbol {
    std::string name;

    Symbol() = default;
    explicit Symbol(std::string n) : name(std::move(n)) {}

    auto operator<=>(const Symbol&) const = default;
};

struct IntPair {
    std::int64_t x = 0;
    std::int64_t y = 0;

    auto operator<=>(const IntPair&) const = default;
};

/// Closed value union used for state variable values and task arguments.
using Value = std::variant<bool, std::int64_t, IntPair, Symbol>;

inline Value sym(std::string name) { return Symbol{std::move(name)}; }
inline Value integer(std::int64_t v) { return v; }
inline Value pair(std::int64_t x, std::int64_t y) { return IntPair{x, y}; }

std::string to_string(const Value& v);
std::ostream& operator<<(std::ostream& os, const Value& v);

/// Stable 64-bit FNV-1a accumulation, independent of std::hash.
class Fnv1a {
public:
    void bytes(const void* data, std::size_t len);
    void u64(std::uint64_t v);
    void str(const std::string& s);
    void value(const Value& v);
    std::uint64_t digest() const { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace htn
