#pragma once

// Test-only generators of small HTN problems and a brute-force enumerator of
// their solutions, written straight from the recursive definition of a plan
// solution (empty list / primitive head / compound head). Independent of the
// planner's explicit-stack search.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "htn/domain.hpp"
#include "htn/planner.hpp"

namespace toy {

struct Problem {
    htn::State state;
    htn::TaskList tasks;
    htn::Domain domain;
    std::string label;
};

inline htn::StateKey var(int i) { return htn::key("v", htn::Value{std::int64_t{i}}); }

inline std::int64_t read(const htn::State& s, int i) { return s.get_as<std::int64_t>(var(i)).value_or(0); }

inline std::int64_t arg_of(const htn::Task& t) {
    return t.args.empty() ? 0 : std::get<std::int64_t>(t.args[0]);
}

/// Up to `max_names` task names (at least one primitive and one compound),
/// at most two methods per compound name. Compound name i only emits names
/// with a larger index, so every expansion is at most max_names deep.
inline Problem random_problem(std::mt19937_64& rng, int max_names = 4) {
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    Problem p;
    const int names = uni(2, max_names);
    const int primitives = uni(1, names - 1);
    const int compounds = names - primitives;
    auto name_of = [&](int i) { return (i < compounds ? "c" : "p") + std::to_string(i); };

    for (int i = 0; i < 3; ++i) p.state.set(var(i), std::int64_t{uni(0, 2)});

    for (int i = compounds; i < names; ++i) {
        const int pre_var = uni(0, 2);
        const int forbidden = uni(0, 2);
        const int eff_var = uni(0, 2);
        const int eff_add = uni(1, 2);
        p.domain.add_action({name_of(i), [=](const htn::State& s, const htn::Task& t) -> std::optional<htn::State> {
                                 if ((read(s, pre_var) + arg_of(t)) % 3 == forbidden) return std::nullopt;
                                 return s.with(var(eff_var), (read(s, eff_var) + eff_add + arg_of(t)) % 3);
                             }});
    }
    for (int i = 0; i < compounds; ++i) {
        const int methods = uni(1, 2);
        for (int m = 0; m < methods; ++m) {
            const bool guarded = uni(0, 2) != 0;
            const int pre_var = uni(0, 2);
            const int required = uni(0, 2);
            std::vector<std::pair<int, int>> subtasks;  // (name index, arg: 0/1 fixed, 2 = parent's)
            const int count = uni(0, 3);
            for (int k = 0; k < count; ++k) subtasks.emplace_back(uni(i + 1, names - 1), uni(0, 2));
            std::vector<std::string> sub_names;
            for (auto [idx, a] : subtasks) sub_names.push_back(name_of(idx));
            p.domain.add_method(name_of(i), {"m" + std::to_string(m),
                                             [=](const htn::State& s, const htn::Task& t) -> std::optional<htn::TaskList> {
                                                 if (guarded && (read(s, pre_var) + arg_of(t)) % 3 != required) {
                                                     return std::nullopt;
                                                 }
                                                 htn::TaskList out;
                                                 for (std::size_t k = 0; k < subtasks.size(); ++k) {
                                                     const int a = subtasks[k].second;
                                                     const std::int64_t v = a == 2 ? arg_of(t) : a;
                                                     out.emplace_back(sub_names[k], std::vector<htn::Value>{v});
                                                 }
                                                 return out;
                                             }});
        }
    }
    const int n_tasks = uni(1, 3);
    for (int k = 0; k < n_tasks; ++k) {
        p.tasks.emplace_back(name_of(uni(0, names - 1)), std::vector<htn::Value>{std::int64_t{uni(0, 1)}});
    }
    p.label = "toy(" + std::to_string(names) + " names)";
    return p;
}

/// Navigation on a 3x3 grid with blocked cells. reach(x, y) has three
/// methods in order: done, step horizontally, step vertically. A blocked
/// step makes its method's action inapplicable, forcing backtracking.
inline Problem mini_grid_problem(std::mt19937_64& rng) {
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    using htn::IntPair;
    using htn::Task;
    using htn::TaskList;

    Problem p;
    const htn::StateKey at = htn::key("at");
    auto blocked_key = [](std::int64_t x, std::int64_t y) { return htn::key("blocked", htn::Value{IntPair{x, y}}); };

    const IntPair start{uni(0, 2), uni(0, 2)};
    p.state.set(at, start);
    const int walls = uni(0, 2);
    for (int w = 0; w < walls; ++w) {
        const IntPair c{uni(0, 2), uni(0, 2)};
        if (c != start) p.state.set(blocked_key(c.x, c.y), true);
    }

    p.domain.add_action({"step", [=](const htn::State& s, const Task& t) -> std::optional<htn::State> {
                             const auto here = s.get_as<IntPair>(at).value();
                             const auto d = std::get<IntPair>(t.args[0]);
                             const IntPair next{here.x + d.x, here.y + d.y};
                             if (next.x < 0 || next.x > 2 || next.y < 0 || next.y > 2) return std::nullopt;
                             if (s.get_as<bool>(blocked_key(next.x, next.y)).value_or(false)) return std::nullopt;
                             return s.with(at, next);
                         }});
    auto target_of = [](const Task& t) { return std::get<IntPair>(t.args[0]); };
    auto sgn = [](std::int64_t v) -> std::int64_t { return (v > 0) - (v < 0); };
    p.domain.add_method("reach", {"done", [=](const htn::State& s, const Task& t) -> std::optional<TaskList> {
                                      if (s.get_as<IntPair>(at).value() != target_of(t)) return std::nullopt;
                                      return TaskList{};
                                  }});
    p.domain.add_method("reach", {"horizontal", [=](const htn::State& s, const Task& t) -> std::optional<TaskList> {
                                      const auto here = s.get_as<IntPair>(at).value();
                                      const auto dx = sgn(target_of(t).x - here.x);
                                      if (dx == 0) return std::nullopt;
                                      return TaskList{Task("step", {IntPair{dx, 0}}), t};
                                  }});
    p.domain.add_method("reach", {"vertical", [=](const htn::State& s, const Task& t) -> std::optional<TaskList> {
                                      const auto here = s.get_as<IntPair>(at).value();
                                      const auto dy = sgn(target_of(t).y - here.y);
                                      if (dy == 0) return std::nullopt;
                                      return TaskList{Task("step", {IntPair{0, dy}}), t};
                                  }});
    const int goals = uni(1, 3);
    for (int g = 0; g < goals; ++g) p.tasks.push_back(Task("reach", {IntPair{uni(0, 2), uni(0, 2)}}));
    p.label = "mini-grid";
    return p;
}

/// Every solution plan, in depth-first order over methods.
inline void enumerate_plans(const htn::State& s, const htn::TaskList& tasks, const htn::Domain& d,
                            std::vector<htn::PlanStep>& prefix, std::vector<htn::Plan>& out, std::size_t limit) {
    if (out.size() >= limit) return;
    if (tasks.empty()) {
        out.push_back(htn::Plan{prefix});
        return;
    }
    const htn::Task& head = tasks.front();
    const htn::TaskList rest(tasks.begin() + 1, tasks.end());
    if (const htn::ActionDef* a = d.action(head.name)) {
        auto next = a->apply(s, head);
        if (!next) return;
        prefix.push_back({a->name, head});
        enumerate_plans(*next, rest, d, prefix, out, limit);
        prefix.pop_back();
        return;
    }
    for (const htn::MethodDef& m : d.methods(head.name)) {
        auto sub = m.decompose(s, head);
        if (!sub) continue;
        htn::TaskList expanded = *sub;
        expanded.insert(expanded.end(), rest.begin(), rest.end());
        enumerate_plans(s, expanded, d, prefix, out, limit);
    }
}

inline std::vector<htn::Plan> all_plans(const Problem& p, std::size_t limit = 100'000) {
    std::vector<htn::Plan> out;
    std::vector<htn::PlanStep> prefix;
    enumerate_plans(p.state, p.tasks, p.domain, prefix, out, limit);
    return out;
}

}  // namespace toy
