#include "htn/actor.hpp"

#include <optional>

namespace htn {

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::completed: return "completed";
        case Outcome::failed: return "failed";
        case Outcome::terminated_by_environment: return "terminated";
        case Outcome::capped: return "capped";
    }
    return "?";
}

// ModelEnvironment

Observation ModelEnvironment::reset(std::uint64_t) {
    current_ = initial_;
    executed_ = 0;
    return {current_, false};
}

std::optional<Observation> ModelEnvironment::execute(const std::string& action, const Task& task) {
    const ActionDef* a = domain_->action(action);
    if (!a) throw EnvironmentError("unknown action '" + action + "'");
    std::optional<State> next = a->apply(current_, task);
    if (!next) return std::nullopt;
    current_ = std::move(*next);
    ++executed_;
    return Observation{current_, false};
}

// TaskModifier

TaskModifier TaskModifier::then(TaskModifier next) const {
    TaskModifier first = *this;
    return TaskModifier([first, next](const Observation& obs, const TaskList& tasks) {
        return next(obs, first(obs, tasks));
    });
}

TaskModifier identity_tm() {
    return TaskModifier([](const Observation&, const TaskList& tasks) { return tasks; });
}

// Acting loop

namespace {

struct Pending {
    Task head;
    TaskList tail;
    std::size_t next_method = 0;
};

}  // namespace

ActingResult seek_plan_act_tm(const Observation& obs, const TaskList& tasks, const Domain& domain,
                              const TaskModifier& tm, Environment& env, const ActingOptions& options) {
    ActingResult r;
    r.last = obs;
    TaskList todo = tasks;
    // Choice points since the latest executed action. All of them were
    // created against r.last, so no state is stored with them.
    std::vector<Pending> choices;
    std::size_t expansions = 0;

    auto stop = [&](Outcome o, std::string detail = {}) {
        r.outcome = o;
        r.detail = std::move(detail);
        r.remaining = std::move(todo);
        return r;
    };

    // Continue with the next applicable method of the newest choice point.
    // Returns an empty optional on exhaustion, or a failure message.
    auto resume = [&]() -> std::optional<std::string> {
        while (!choices.empty()) {
            Pending& cp = choices.back();
            const auto& methods = domain.methods(cp.head.name);
            while (cp.next_method < methods.size()) {
                if (++expansions > options.max_expansions_per_action) return std::string("expansion bound reached");
                const std::size_t i = cp.next_method++;
                std::optional<TaskList> sub = methods[i].decompose(r.last.state, cp.head);
                if (!sub) continue;
                todo = concat(*sub, cp.tail);
                if (cp.next_method == methods.size()) choices.pop_back();
                return std::nullopt;
            }
            choices.pop_back();
        }
        return std::string("no applicable action or method");
    };

    for (;;) {
        if (r.last.terminated) {
            return stop(todo.empty() || r.trace.empty() ? Outcome::completed : Outcome::terminated_by_environment);
        }
        if (todo.empty()) return stop(Outcome::completed);
        if (options.max_actions != 0 && r.trace.size() >= options.max_actions) {
            return stop(Outcome::capped, "action budget reached");
        }

        Task head = std::move(todo.front());
        todo.erase(todo.begin());

        switch (domain.classify(head)) {
            case TaskKind::unknown:
                todo.insert(todo.begin(), head);
                return stop(Outcome::failed, "unknown task '" + head.name + "'");

            case TaskKind::primitive: {
                if (++expansions > options.max_expansions_per_action) {
                    todo.insert(todo.begin(), head);
                    return stop(Outcome::failed, "expansion bound reached");
                }
                std::optional<Observation> next = env.execute(head.name, head);
                if (next) {
                    r.last = std::move(*next);
                    r.trace.push_back({{head.name, head}, r.last.state.digest()});
                    choices.clear();
                    expansions = 0;
                    todo = tm(r.last, todo);
                    ++r.tm_calls;
                    continue;
                }
                if (auto err = resume()) {
                    todo.insert(todo.begin(), head);
                    return stop(Outcome::failed, *err + " at '" + to_string(head) + "'");
                }
                continue;
            }

            case TaskKind::compound:
                choices.push_back({head, todo});
                if (auto err = resume()) {
                    todo.insert(todo.begin(), head);
                    return stop(Outcome::failed, *err + " at '" + to_string(head) + "'");
                }
                continue;
        }
    }
}

EpisodeResult act_from(Environment& env, const Observation& first, const TaskList& tasks, const Domain& domain,
                       const TaskModifier& tm, const ActingOptions& options) {
    ActingResult a = seek_plan_act_tm(first, tasks, domain, tm, env, options);
    EpisodeResult e;
    e.final_metric = env.metric();
    e.steps_executed = a.trace.size();
    e.trace = std::move(a.trace);
    e.outcome = a.outcome;
    e.tm_calls = a.tm_calls;
    e.detail = std::move(a.detail);
    e.remaining = std::move(a.remaining);
    return e;
}

EpisodeResult plan_act_tm(Environment& env, std::uint64_t seed, const TaskList& tasks, const Domain& domain,
                          const TaskModifier& tm, const ActingOptions& options) {
    Observation first = env.reset(seed);
    return act_from(env, first, tasks, domain, tm, options);
}

}  // namespace htn
