#include <random>

#include "doctest.h"
#include "htn/actor.hpp"
#include "toy_domains.hpp"

using namespace htn;

namespace {

Domain counter_domain() {
    Domain d;
    d.add_action({"inc", [](const State& s, const Task&) -> std::optional<State> {
                      return s.with(key("n"), s.get_as<std::int64_t>(key("n")).value_or(0) + 1);
                  }});
    d.add_action({"blocked", [](const State&, const Task&) -> std::optional<State> { return std::nullopt; }});
    return d;
}

// Counts calls and refuses to act after termination, like every real environment.
class ScriptedEnv final : public Environment {
public:
    explicit ScriptedEnv(int terminate_after) : terminate_after_(terminate_after) {}

    Observation reset(std::uint64_t) override {
        executed = 0;
        terminated_ = terminate_after_ == 0;
        return {State{}, terminated_};
    }
    std::optional<Observation> execute(const std::string& action, const Task&) override {
        if (terminated_) throw EnvironmentError("after termination");
        if (action == "blocked") return std::nullopt;
        ++executed;
        terminated_ = terminate_after_ >= 0 && executed >= terminate_after_;
        State s;
        s.set(key("n"), integer(executed));
        return Observation{s, terminated_};
    }
    double metric() const override { return executed; }

    int executed = 0;

private:
    int terminate_after_;
    bool terminated_ = false;
};

}  // namespace

TEST_CASE("identity task modifier") {
    const TaskModifier id = identity_tm();
    const TaskList abc{Task("a"), Task("b"), Task("c")};
    CHECK(id(Observation{}, abc) == abc);
    CHECK(id(Observation{}, {}).empty());

    const TaskModifier drop_first([](const Observation&, const TaskList& t) {
        return t.empty() ? t : TaskList(t.begin() + 1, t.end());
    });
    CHECK(drop_first.then(id)(Observation{}, abc) == drop_first(Observation{}, abc));
    CHECK(id.then(drop_first)(Observation{}, abc) == drop_first(Observation{}, abc));
}

TEST_CASE("empty task list returns the observation without touching the environment") {
    ScriptedEnv env(-1);
    const Domain d = counter_domain();
    Observation obs = env.reset(0);
    obs.state.set(key("marker"), true);
    const ActingResult r = seek_plan_act_tm(obs, {}, d, identity_tm(), env);
    CHECK(r.outcome == Outcome::completed);
    CHECK(r.last.state == obs.state);
    CHECK(env.executed == 0);
    CHECK(r.tm_calls == 0);
}

TEST_CASE("episode already over at reset") {
    ScriptedEnv env(0);
    const EpisodeResult r = plan_act_tm(env, 1, {Task("inc"), Task("inc")}, counter_domain(), identity_tm());
    CHECK(r.outcome == Outcome::completed);
    CHECK(r.steps_executed == 0);
    CHECK(env.executed == 0);
}

TEST_CASE("single primitive, identity TM: one action") {
    ScriptedEnv env(-1);
    const EpisodeResult r = plan_act_tm(env, 1, {Task("inc")}, counter_domain(), identity_tm());
    CHECK(r.outcome == Outcome::completed);
    CHECK(r.steps_executed == 1);
    CHECK(r.trace.size() == 1);
    CHECK(r.tm_calls == 1);
    CHECK(r.final_metric == 1.0);
}

TEST_CASE("a modifier that empties the list stops after one action") {
    ScriptedEnv env(-1);
    const TaskModifier empty([](const Observation&, const TaskList&) { return TaskList{}; });
    const EpisodeResult r = plan_act_tm(env, 1, {Task("inc"), Task("inc")}, counter_domain(), empty);
    CHECK(r.steps_executed == 1);
    CHECK(env.executed == 1);
    CHECK(r.outcome == Outcome::completed);
}

TEST_CASE("the modifier sees the remaining tasks only after actions") {
    Domain d = counter_domain();
    d.add_method("twice", {"m", [](const State&, const Task&) -> std::optional<TaskList> {
                               return TaskList{Task("inc"), Task("inc")};
                           }});
    std::vector<TaskList> seen;
    const TaskModifier spy([&seen](const Observation&, const TaskList& t) {
        seen.push_back(t);
        return t;
    });
    ScriptedEnv env(-1);
    const EpisodeResult r = plan_act_tm(env, 1, {Task("twice"), Task("inc")}, d, spy);
    CHECK(r.steps_executed == 3);
    REQUIRE(seen.size() == 3);
    CHECK(seen[0] == TaskList{Task("inc"), Task("inc")});
    CHECK(seen[1] == TaskList{Task("inc")});
    CHECK(seen[2].empty());
}

TEST_CASE("termination stops the loop and execute is never called afterwards") {
    ScriptedEnv env(2);
    const EpisodeResult r = plan_act_tm(env, 1, {Task("inc"), Task("inc"), Task("inc")}, counter_domain(), identity_tm());
    CHECK(r.outcome == Outcome::terminated_by_environment);
    CHECK(r.steps_executed == 2);
    CHECK(r.remaining == TaskList{Task("inc")});
}

TEST_CASE("environment contract violation surfaces as an exception") {
    ScriptedEnv env(1);
    env.reset(0);
    env.execute("inc", Task("inc"));
    CHECK_THROWS_AS(env.execute("inc", Task("inc")), EnvironmentError);
}

TEST_CASE("inapplicable action fails the episode; earlier actions stand") {
    ScriptedEnv env(-1);
    const EpisodeResult r = plan_act_tm(env, 1, {Task("inc"), Task("blocked"), Task("inc")}, counter_domain(), identity_tm());
    CHECK(r.outcome == Outcome::failed);
    CHECK(r.steps_executed == 1);
    CHECK(r.remaining.front() == Task("blocked"));
}

TEST_CASE("unknown task inserted by the modifier fails the episode") {
    ScriptedEnv env(-1);
    const TaskModifier inserts([](const Observation&, const TaskList& t) {
        TaskList out{Task("teleport")};
        out.insert(out.end(), t.begin(), t.end());
        return out;
    });
    const EpisodeResult r = plan_act_tm(env, 1, {Task("inc"), Task("inc")}, counter_domain(), inserts);
    CHECK(r.outcome == Outcome::failed);
    CHECK(r.steps_executed == 1);
    CHECK(r.detail.find("teleport") != std::string::npos);
}

TEST_CASE("method backtracking before any action") {
    Domain d = counter_domain();
    d.add_method("t", {"blocked_first", [](const State&, const Task&) -> std::optional<TaskList> {
                           return TaskList{Task("blocked")};
                       }});
    d.add_method("t", {"inc_second", [](const State&, const Task&) -> std::optional<TaskList> {
                           return TaskList{Task("inc")};
                       }});
    ScriptedEnv env(-1);
    const EpisodeResult r = plan_act_tm(env, 1, {Task("t")}, d, identity_tm());
    CHECK(r.outcome == Outcome::completed);
    REQUIRE(r.steps_executed == 1);
    CHECK(r.trace[0].action.action == "inc");
}

TEST_CASE("no backtracking across an executed action") {
    // Offline, t's first method dead-ends after `inc` and the planner falls
    // back to the second method. Acting, `inc` has happened and cannot be undone.
    Domain d = counter_domain();
    d.add_method("t", {"inc_then_blocked", [](const State&, const Task&) -> std::optional<TaskList> {
                           return TaskList{Task("inc"), Task("blocked")};
                       }});
    d.add_method("t", {"just_inc", [](const State&, const Task&) -> std::optional<TaskList> {
                           return TaskList{Task("inc")};
                       }});
    const auto offline = seek_plan({}, {Task("t")}, d);
    REQUIRE(offline.ok());
    CHECK(offline.stats.retracted_action);

    ScriptedEnv env(-1);
    const EpisodeResult r = plan_act_tm(env, 1, {Task("t")}, d, identity_tm());
    CHECK(r.outcome == Outcome::failed);
    CHECK(r.steps_executed == 1);
    CHECK(env.executed == 1);
}

TEST_CASE("a method that recurses without acting hits the per-action bound") {
    Domain d = counter_domain();
    d.add_method("spin", {"again", [](const State&, const Task& t) -> std::optional<TaskList> {
                              return TaskList{t};
                          }});
    ScriptedEnv env(-1);
    ActingOptions opts;
    opts.max_expansions_per_action = 100;
    const EpisodeResult r = plan_act_tm(env, 1, {Task("inc"), Task("spin")}, d, identity_tm(), opts);
    CHECK(r.outcome == Outcome::failed);
    CHECK(r.steps_executed == 1);
}

TEST_CASE("action cap") {
    Domain d = counter_domain();
    d.add_method("forever", {"m", [](const State&, const Task& t) -> std::optional<TaskList> {
                                 return TaskList{Task("inc"), t};
                             }});
    ScriptedEnv env(-1);
    ActingOptions opts;
    opts.max_actions = 25;
    const EpisodeResult r = plan_act_tm(env, 1, {Task("forever")}, d, identity_tm(), opts);
    CHECK(r.outcome == Outcome::capped);
    CHECK(r.steps_executed == 25);
    CHECK(r.tm_calls == 25);
}

TEST_CASE("mirror environment on a 3x3 grid reproduces the offline plan") {
    std::mt19937_64 rng(7);
    int compared = 0;
    for (int i = 0; i < 60; ++i) {
        const toy::Problem p = toy::mini_grid_problem(rng);
        const auto offline = seek_plan(p.state, p.tasks, p.domain);
        ModelEnvironment env(p.domain, p.state);
        const EpisodeResult r = plan_act_tm(env, 0, p.tasks, p.domain, identity_tm());
        CHECK(r.tm_calls == r.steps_executed);
        if (!offline.ok() || offline.stats.retracted_action) {
            CHECK(r.outcome == Outcome::failed);
            continue;
        }
        ++compared;
        REQUIRE(r.outcome == Outcome::completed);
        REQUIRE(r.trace.size() == offline.plan().size());
        for (std::size_t k = 0; k < r.trace.size(); ++k) CHECK(r.trace[k].action == offline.plan().steps[k]);
        CHECK(env.state() == std::get<State>(replay(p.state, offline.plan(), p.domain)));
    }
    CHECK(compared >= 20);
}
