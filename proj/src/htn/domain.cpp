#include "htn/domain.hpp"

#include <stdexcept>

namespace htn {

const char* to_string(TaskKind k) {
    switch (k) {
        case TaskKind::primitive: return "primitive";
        case TaskKind::compound: return "compound";
        case TaskKind::unknown: return "unknown";
    }
    return "?";
}

Domain& Domain::add_action(ActionDef action) {
    if (action.name.empty()) throw std::invalid_argument("action name must not be empty");
    if (!action.apply) throw std::invalid_argument("action '" + action.name + "' has no apply function");
    if (methods_.count(action.name)) {
        throw std::invalid_argument("'" + action.name + "' is already a compound task");
    }
    auto name = action.name;
    auto [it, inserted] = actions_.emplace(name, std::move(action));
    if (!inserted) throw std::invalid_argument("duplicate action '" + name + "'");
    return *this;
}

Domain& Domain::add_method(std::string task_name, MethodDef method) {
    if (task_name.empty()) throw std::invalid_argument("task name must not be empty");
    if (!method.decompose) throw std::invalid_argument("method for '" + task_name + "' has no decompose function");
    if (actions_.count(task_name)) {
        throw std::invalid_argument("'" + task_name + "' is already a primitive task");
    }
    methods_[std::move(task_name)].push_back(std::move(method));
    return *this;
}

TaskKind Domain::classify(const Task& task) const {
    if (actions_.count(task.name)) return TaskKind::primitive;
    if (methods_.count(task.name)) return TaskKind::compound;
    return TaskKind::unknown;
}

const ActionDef* Domain::action(const std::string& name) const {
    auto it = actions_.find(name);
    return it == actions_.end() ? nullptr : &it->second;
}

const std::vector<MethodDef>& Domain::methods(const std::string& name) const {
    static const std::vector<MethodDef> none;
    auto it = methods_.find(name);
    return it == methods_.end() ? none : it->second;
}

}  // namespace htn
