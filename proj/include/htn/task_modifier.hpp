#pragma once

#include <functional>

#include "htn/environment.hpp"
#include "htn/task.hpp"

namespace htn {

/// Rewrites the remaining task list after an observation. May insert,
/// delete or reorder tasks; must always return a list (possibly the input).
///
/// Stateful modifiers (belief tracking, private RNG) keep their state inside
/// the callable, so copies share nothing unless the callable shares it.
class TaskModifier {
public:
    using Fn = std::function<TaskList(const Observation&, const TaskList&)>;

    TaskModifier() = default;
    explicit TaskModifier(Fn fn) : fn_(std::move(fn)) {}

    TaskList operator()(const Observation& obs, const TaskList& tasks) const {
        return fn_ ? fn_(obs, tasks) : tasks;
    }

    /// `next` applied to the output of *this.
    TaskModifier then(TaskModifier next) const;

private:
    Fn fn_;
};

TaskModifier identity_tm();

}  // namespace htn
