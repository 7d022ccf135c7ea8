#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "htn/domain.hpp"

namespace htn {

struct PlanStep {
    std::string action;
    Task task;

    bool operator==(const PlanStep&) const = default;
};

struct Plan {
    std::vector<PlanStep> steps;

    bool empty() const { return steps.empty(); }
    std::size_t size() const { return steps.size(); }
    bool operator==(const Plan&) const = default;
};

enum class PlanError {
    no_solution,      ///< every backtracking branch dead-ended
    bound_exceeded,   ///< expansion budget exhausted
    unknown_task,     ///< a task name is neither an action nor a compound task
};

const char* to_string(PlanError e);

struct PlanFailure {
    PlanError error;
    std::string detail;
};

struct PlannerOptions {
    /// Upper bound on action applications plus method decompositions.
    std::size_t max_expansions = 10'000;
};

struct SearchStats {
    std::size_t expansions = 0;
    std::size_t backtracks = 0;
    /// True if some backtrack discarded an already-applied action. The acting
    /// loop cannot follow such a search because execution is irreversible.
    bool retracted_action = false;
};

/// Either a Plan or a PlanFailure.
class PlanResult {
public:
    PlanResult(Plan p) : v_(std::move(p)) {}
    PlanResult(PlanFailure f) : v_(std::move(f)) {}

    bool ok() const { return std::holds_alternative<Plan>(v_); }
    explicit operator bool() const { return ok(); }
    const Plan& plan() const { return std::get<Plan>(v_); }
    const PlanFailure& failure() const { return std::get<PlanFailure>(v_); }

    SearchStats stats;

private:
    std::variant<Plan, PlanFailure> v_;
};

/// Ordered task decomposition with depth-first backtracking over methods.
///
/// Works on the first task of the list. A primitive head is applied and
/// removed; a compound head is replaced by the subtasks of the first method
/// (in registry order) whose expansion eventually succeeds. Method
/// decompositions are evaluated lazily, only when their branch is tried.
/// Uses an explicit choice-point stack, so recursive methods such as
/// go_to cost no call-stack depth.
PlanResult seek_plan(const State& state, const TaskList& tasks, const Domain& domain,
                     const PlannerOptions& options = {});

struct ReplayFailure {
    std::size_t step_index;
    std::string reason;
};

/// Folds each step's ActionDef over the state.
std::variant<State, ReplayFailure> replay(const State& state, const Plan& plan, const Domain& domain);

}  // namespace htn
