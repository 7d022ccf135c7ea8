#include "htn/planner.hpp"

#include <optional>

namespace htn {

const char* to_string(PlanError e) {
    switch (e) {
        case PlanError::no_solution: return "no_solution";
        case PlanError::bound_exceeded: return "bound_exceeded";
        case PlanError::unknown_task: return "unknown_task";
    }
    return "?";
}

namespace {

// Task list stored back-to-front so that popping the head and prepending a
// method's subtasks are both O(subtasks).
struct ReversedTasks {
    std::vector<Task> rev;

    static ReversedTasks from(const TaskList& tasks) { return {TaskList(tasks.rbegin(), tasks.rend())}; }
    bool empty() const { return rev.empty(); }
    const Task& head() const { return rev.back(); }
    void pop() { rev.pop_back(); }
    void prepend(const TaskList& subtasks) { rev.insert(rev.end(), subtasks.rbegin(), subtasks.rend()); }
};

struct ChoicePoint {
    State state;
    Task head;
    ReversedTasks tail;
    std::size_t plan_len;
    std::size_t next_method = 0;
};

}  // namespace

PlanResult seek_plan(const State& initial, const TaskList& tasks, const Domain& domain,
                     const PlannerOptions& options) {
    SearchStats stats;
    State state = initial;
    ReversedTasks todo = ReversedTasks::from(tasks);
    Plan plan;
    std::vector<ChoicePoint> choices;

    auto fail = [&](PlanError e, std::string detail) {
        PlanResult r{PlanFailure{e, std::move(detail)}};
        r.stats = stats;
        return r;
    };

    // Resume at the most recent choice point that still has an applicable
    // method. Returns false when the stack is exhausted, or sets `over_budget`.
    bool over_budget = false;
    auto resume = [&](bool backtracking) -> bool {
        while (!choices.empty()) {
            ChoicePoint& cp = choices.back();
            const auto& methods = domain.methods(cp.head.name);
            while (cp.next_method < methods.size()) {
                if (++stats.expansions > options.max_expansions) {
                    over_budget = true;
                    return false;
                }
                const std::size_t i = cp.next_method++;
                std::optional<TaskList> sub = methods[i].decompose(cp.state, cp.head);
                if (!sub) continue;
                if (backtracking) {
                    ++stats.backtracks;
                    if (plan.steps.size() > cp.plan_len) stats.retracted_action = true;
                }
                plan.steps.resize(cp.plan_len);
                if (cp.next_method == methods.size()) {
                    // Last alternative: nothing to come back to.
                    state = std::move(cp.state);
                    todo = std::move(cp.tail);
                    choices.pop_back();
                } else {
                    state = cp.state;
                    todo = cp.tail;
                }
                todo.prepend(*sub);
                return true;
            }
            choices.pop_back();
            backtracking = true;
        }
        return false;
    };

    for (;;) {
        if (todo.empty()) {
            PlanResult r{std::move(plan)};
            r.stats = stats;
            return r;
        }
        Task head = todo.head();
        todo.pop();
        bool dead_end = false;
        switch (domain.classify(head)) {
            case TaskKind::unknown:
                return fail(PlanError::unknown_task, "no action or method for '" + head.name + "'");
            case TaskKind::primitive: {
                if (++stats.expansions > options.max_expansions) {
                    return fail(PlanError::bound_exceeded, "expansion bound reached");
                }
                const ActionDef* a = domain.action(head.name);
                std::optional<State> next = a->apply(state, head);
                if (next) {
                    plan.steps.push_back({a->name, std::move(head)});
                    state = std::move(*next);
                } else {
                    dead_end = true;
                }
                break;
            }
            case TaskKind::compound:
                choices.push_back({state, std::move(head), todo, plan.size()});
                if (!resume(false)) {
                    if (over_budget) return fail(PlanError::bound_exceeded, "expansion bound reached");
                    return fail(PlanError::no_solution, "no applicable decomposition");
                }
                break;
        }
        if (dead_end && !resume(true)) {
            if (over_budget) return fail(PlanError::bound_exceeded, "expansion bound reached");
            return fail(PlanError::no_solution, "no applicable decomposition");
        }
    }
}

std::variant<State, ReplayFailure> replay(const State& state, const Plan& plan, const Domain& domain) {
    State s = state;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const PlanStep& step = plan.steps[i];
        const ActionDef* a = domain.action(step.action);
        if (!a) return ReplayFailure{i, "'" + step.action + "' is not an action"};
        std::optional<State> next = a->apply(s, step.task);
        if (!next) return ReplayFailure{i, "'" + to_string(step.task) + "' is not applicable"};
        s = std::move(*next);
    }
    return s;
}

}  // namespace htn
