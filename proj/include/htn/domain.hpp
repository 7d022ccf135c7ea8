#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htn/state.hpp"
#include "htn/task.hpp"

namespace htn {

/// Executor for a primitive task. std::nullopt means "not applicable".
struct ActionDef {
    std::string name;
    std::function<std::optional<State>(const State&, const Task&)> apply;
};

/// Decomposition rule for a compound task. std::nullopt means "not
/// applicable"; an empty TaskList means the task is already achieved.
struct MethodDef {
    std::string name;
    std::function<std::optional<TaskList>(const State&, const Task&)> decompose;
};

enum class TaskKind { primitive, compound, unknown };

const char* to_string(TaskKind k);

/// Registry of actions and methods. A name is registered either as an
/// action or as a compound task with one or more methods, never both.
/// Methods for a name are tried in insertion order.
class Domain {
public:
    /// Throws std::invalid_argument if the name already has methods or an action.
    Domain& add_action(ActionDef action);
    /// Appends a method for `task_name`. Throws std::invalid_argument if
    /// `task_name` is registered as an action.
    Domain& add_method(std::string task_name, MethodDef method);

    TaskKind classify(const Task& task) const;

    const ActionDef* action(const std::string& name) const;
    /// Empty if the name has no methods.
    const std::vector<MethodDef>& methods(const std::string& name) const;

    const std::map<std::string, ActionDef>& actions() const { return actions_; }
    const std::map<std::string, std::vector<MethodDef>>& method_table() const { return methods_; }

private:
    std::map<std::string, ActionDef> actions_;
    std::map<std::string, std::vector<MethodDef>> methods_;
};

}  // namespace htn
