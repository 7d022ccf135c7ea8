#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "htn/value.hpp"

namespace htn {

/// A named activity with arguments. Whether it is primitive or compound is
/// decided by the Domain it is looked up in.
struct Task {
    std::string name;
    std::vector<Value> args;

    Task() = default;
    explicit Task(std::string n, std::vector<Value> a = {}) : name(std::move(n)), args(std::move(a)) {}

    auto operator<=>(const Task&) const = default;
};

/// Ordered, possibly empty, no implicit deduplication.
using TaskList = std::vector<Task>;

std::string to_string(const Task& t);
std::string to_string(const TaskList& tasks);
std::ostream& operator<<(std::ostream& os, const Task& t);

/// (head..., tail...) without mutating either input.
TaskList concat(const TaskList& head, const TaskList& tail);

}  // namespace htn
