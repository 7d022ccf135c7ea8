#include <random>
#include <set>

#include "doctest.h"
#include "htn/planner.hpp"
#include "rainy_grid/rainy_grid.hpp"
#include "toy_domains.hpp"

using namespace htn;

namespace {

Domain move_goto_domain() {
    Domain d;
    d.add_action({"move", [](const State& s, const Task&) -> std::optional<State> { return s; }});
    d.add_method("go_to", {"m", [](const State&, const Task&) -> std::optional<TaskList> { return TaskList{}; }});
    return d;
}

}  // namespace

TEST_CASE("state lookups of absent keys are unknown, not errors") {
    State s;
    s.set(key("loc", sym("agent")), pair(0, 0));
    CHECK(s.get(key("loc", sym("agent"))) == Value{IntPair{0, 0}});
    CHECK_FALSE(s.get(key("loc", sym("beacon"))).has_value());
    CHECK_FALSE(s.get_as<bool>(key("loc", sym("agent"))).has_value());

    s.set(key("loc", sym("agent")), pair(1, 0));
    CHECK(s.size() == 1);
}

TEST_CASE("state digest depends on content only") {
    State a;
    a.set(key("x"), integer(1));
    a.set(key("y"), true);
    State b;
    b.set(key("y"), true);
    b.set(key("x"), integer(1));
    CHECK(a.digest() == b.digest());
    b.set(key("x"), integer(2));
    CHECK(a.digest() != b.digest());
}

TEST_CASE("classify") {
    const Domain d = move_goto_domain();
    CHECK(d.classify(Task("move", {sym("right")})) == TaskKind::primitive);
    CHECK(d.classify(Task("go_to", {sym("exit")})) == TaskKind::compound);
    CHECK(d.classify(Task("fly", {sym("a")})) == TaskKind::unknown);
}

TEST_CASE("a name is never both an action and a compound task") {
    Domain d = move_goto_domain();
    CHECK_THROWS_AS(d.add_action({"go_to", [](const State& s, const Task&) -> std::optional<State> { return s; }}),
                    std::invalid_argument);
    CHECK_THROWS_AS(d.add_method("move", {"m", [](const State&, const Task&) -> std::optional<TaskList> {
                                              return TaskList{};
                                          }}),
                    std::invalid_argument);
}

TEST_CASE("empty task list gives the empty plan in any state") {
    const Domain d = move_goto_domain();
    State s;
    s.set(key("anything"), integer(42));
    for (const State& st : {State{}, s}) {
        auto r = seek_plan(st, {}, d);
        REQUIRE(r.ok());
        CHECK(r.plan().empty());
    }
}

TEST_CASE("rainy grid model: one step from (9,8) to the exit") {
    const Domain d = rainy::make_domain();
    State s;
    s.set(key("loc", sym("agent")), pair(9, 8));
    s.set(key("loc", sym("beacon")), pair(2, 2));
    s.set(key("loc", sym("exit")), pair(9, 9));
    s.set(key("beacon_reached"), false);
    const TaskList tasks{rainy::go_to("exit")};

    auto r = seek_plan(s, tasks, d);
    REQUIRE(r.ok());
    REQUIRE(r.plan().size() == 1);
    CHECK(r.plan().steps[0].task == rainy::move(rainy::Direction::up));

    // Brute force: among all move sequences of length <= 2, exactly one of
    // length 1 reaches the exit, and the planner returned it.
    std::set<std::vector<rainy::Direction>> reaching;
    const rainy::Direction dirs[] = {rainy::Direction::right, rainy::Direction::up, rainy::Direction::left,
                                     rainy::Direction::down};
    for (auto a : dirs) {
        if (rainy::step({9, 8}, a) == rainy::kExit) reaching.insert({a});
    }
    CHECK(reaching.size() == 1);
    CHECK(*reaching.begin() == std::vector<rainy::Direction>{rainy::Direction::up});
    CHECK(toy::all_plans({s, tasks, d, ""}).front() == r.plan());
}

TEST_CASE("backtracking skips an inapplicable first method") {
    Domain d;
    d.add_action({"prim", [](const State& s, const Task&) -> std::optional<State> {
                      return s.with(key("done"), true);
                  }});
    d.add_method("t", {"never", [](const State&, const Task&) -> std::optional<TaskList> { return std::nullopt; }});
    d.add_method("t", {"works", [](const State&, const Task&) -> std::optional<TaskList> {
                           return TaskList{Task("prim")};
                       }});
    auto r = seek_plan({}, {Task("t")}, d);
    REQUIRE(r.ok());
    CHECK(r.plan().size() == 1);
    CHECK(r.stats.retracted_action == false);

    // Enumerating both method orders: only the second method yields plans,
    // and each order finds the same single plan.
    Domain swapped;
    swapped.add_action(*d.action("prim"));
    swapped.add_method("t", d.methods("t")[1]);
    swapped.add_method("t", d.methods("t")[0]);
    CHECK(toy::all_plans({{}, {Task("t")}, d, ""}).size() == 1);
    CHECK(toy::all_plans({{}, {Task("t")}, swapped, ""}).size() == 1);
    CHECK(seek_plan({}, {Task("t")}, swapped).plan() == r.plan());
}

TEST_CASE("backtracking over an applied action is detected") {
    Domain d;
    d.add_action({"a", [](const State& s, const Task&) -> std::optional<State> { return s.with(key("a"), true); }});
    d.add_action({"b", [](const State& s, const Task&) -> std::optional<State> { return s.with(key("b"), true); }});
    d.add_action({"needs_not_a", [](const State& s, const Task&) -> std::optional<State> {
                      if (s.get_as<bool>(key("a")).value_or(false)) return std::nullopt;
                      return s;
                  }});
    d.add_method("t", {"via_a", [](const State&, const Task&) -> std::optional<TaskList> {
                           return TaskList{Task("a"), Task("needs_not_a")};
                       }});
    d.add_method("t", {"via_b", [](const State&, const Task&) -> std::optional<TaskList> {
                           return TaskList{Task("b")};
                       }});
    auto r = seek_plan({}, {Task("t")}, d);
    REQUIRE(r.ok());
    CHECK(r.plan().steps.at(0).action == "b");
    CHECK(r.stats.retracted_action);
    CHECK(r.stats.backtracks == 1);
}

TEST_CASE("failures: no solution, unknown task, expansion bound") {
    Domain d;
    d.add_action({"nope", [](const State&, const Task&) -> std::optional<State> { return std::nullopt; }});
    d.add_method("loop", {"forever", [](const State&, const Task& t) -> std::optional<TaskList> {
                              return TaskList{t};
                          }});

    auto none = seek_plan({}, {Task("nope")}, d);
    REQUIRE_FALSE(none.ok());
    CHECK(none.failure().error == PlanError::no_solution);

    auto unknown = seek_plan({}, {Task("fly")}, d);
    REQUIRE_FALSE(unknown.ok());
    CHECK(unknown.failure().error == PlanError::unknown_task);

    PlannerOptions opts;
    opts.max_expansions = 500;
    auto looped = seek_plan({}, {Task("loop")}, d, opts);
    REQUIRE_FALSE(looped.ok());
    CHECK(looped.failure().error == PlanError::bound_exceeded);
    CHECK(looped.stats.expansions == 501);

    // Default bound also stops it.
    CHECK(seek_plan({}, {Task("loop")}, d).failure().error == PlanError::bound_exceeded);
}

TEST_CASE("deep tail recursion does not grow the choice stack") {
    // count(n) -> (inc, count(n-1)); 5000 levels.
    Domain d;
    d.add_action({"inc", [](const State& s, const Task&) -> std::optional<State> {
                      return s.with(key("n"), s.get_as<std::int64_t>(key("n")).value_or(0) + 1);
                  }});
    d.add_method("count", {"step", [](const State&, const Task& t) -> std::optional<TaskList> {
                               const auto n = std::get<std::int64_t>(t.args[0]);
                               if (n == 0) return TaskList{};
                               return TaskList{Task("inc"), Task("count", {integer(n - 1)})};
                           }});
    PlannerOptions opts;
    opts.max_expansions = 20'000;
    auto r = seek_plan({}, {Task("count", {integer(5000)})}, d, opts);
    REQUIRE(r.ok());
    CHECK(r.plan().size() == 5000);
    auto end = replay({}, r.plan(), d);
    REQUIRE(std::holds_alternative<State>(end));
    CHECK(std::get<State>(end).get_as<std::int64_t>(key("n")) == 5000);
}

TEST_CASE("replay") {
    Domain d;
    d.add_action({"inc", [](const State& s, const Task&) -> std::optional<State> {
                      return s.with(key("n"), s.get_as<std::int64_t>(key("n")).value_or(0) + 1);
                  }});
    d.add_action({"only_at_zero", [](const State& s, const Task&) -> std::optional<State> {
                      if (s.get_as<std::int64_t>(key("n")).value_or(0) != 0) return std::nullopt;
                      return s;
                  }});
    State s;
    s.set(key("n"), integer(0));

    SUBCASE("empty plan is the identity") {
        auto r = replay(s, Plan{}, d);
        REQUIRE(std::holds_alternative<State>(r));
        CHECK(std::get<State>(r) == s);
    }
    SUBCASE("inapplicable second step reports index 1") {
        Plan p{{{"inc", Task("inc")}, {"only_at_zero", Task("only_at_zero")}}};
        auto r = replay(s, p, d);
        REQUIRE(std::holds_alternative<ReplayFailure>(r));
        CHECK(std::get<ReplayFailure>(r).step_index == 1);
    }
    SUBCASE("unknown action name") {
        Plan p{{{"warp", Task("warp")}}};
        auto r = replay(s, p, d);
        REQUIRE(std::holds_alternative<ReplayFailure>(r));
        CHECK(std::get<ReplayFailure>(r).step_index == 0);
    }
}

TEST_CASE("property: planner agrees with exhaustive enumeration on random toy problems") {
    std::mt19937_64 rng(20240611);
    int solvable = 0;
    for (int i = 0; i < 300; ++i) {
        const toy::Problem p = i % 3 == 2 ? toy::mini_grid_problem(rng) : toy::random_problem(rng);
        const auto plans = toy::all_plans(p);
        const auto r = seek_plan(p.state, p.tasks, p.domain);
        INFO("problem " << i << " " << p.label << " tasks " << to_string(p.tasks));
        REQUIRE(r.ok() == !plans.empty());
        if (!r.ok()) {
            CHECK(r.failure().error == PlanError::no_solution);
            continue;
        }
        ++solvable;
        // Depth-first over methods in registry order: the first enumerated plan.
        CHECK(r.plan() == plans.front());
        CHECK(std::holds_alternative<State>(replay(p.state, r.plan(), p.domain)));
        // Deterministic.
        CHECK(seek_plan(p.state, p.tasks, p.domain).plan() == r.plan());
    }
    CHECK(solvable > 30);
    CHECK(solvable < 300);
}
