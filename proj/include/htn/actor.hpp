#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "htn/domain.hpp"
#include "htn/environment.hpp"
#include "htn/planner.hpp"
#include "htn/task_modifier.hpp"

namespace htn {

enum class Outcome {
    completed,                  ///< task list ran empty (or the episode was over at reset)
    failed,                     ///< no applicable action or method
    terminated_by_environment,  ///< terminal signal arrived with tasks still pending
    capped,                     ///< action budget exhausted
};

const char* to_string(Outcome o);

struct TraceEntry {
    PlanStep action;
    std::uint64_t observation_digest;

    bool operator==(const TraceEntry&) const = default;
};

struct ActingOptions {
    /// Decomposition budget between two executed actions; turns a method
    /// that recurses without ever producing an action into a failure.
    std::size_t max_expansions_per_action = 10'000;
    /// Stop after this many executed actions. 0 = unlimited.
    std::size_t max_actions = 0;
};

struct ActingResult {
    Observation last;
    Outcome outcome = Outcome::completed;
    std::vector<TraceEntry> trace;
    std::size_t tm_calls = 0;
    std::string detail;
    /// Tasks still pending when the loop stopped.
    TaskList remaining;
};

struct EpisodeResult {
    double final_metric = 0.0;
    std::size_t steps_executed = 0;
    std::vector<TraceEntry> trace;
    Outcome outcome = Outcome::completed;
    std::size_t tm_calls = 0;
    std::string detail;
    TaskList remaining;
};

/// Interleaved decomposition and execution with a task modifier hook.
///
/// Ordered task decomposition on the head of the list. A primitive head is
/// executed in `env`; the next observation and the remaining tasks are then
/// passed through `tm` and the loop continues on its output. The modifier is
/// never called after a method decomposition.
///
/// Executing an action is a commit point: the backtracking stack is cleared,
/// so method alternatives are only revisited for decompositions made since
/// the latest execution. A dead end after a commit fails the episode.
ActingResult seek_plan_act_tm(const Observation& obs, const TaskList& tasks, const Domain& domain,
                              const TaskModifier& tm, Environment& env, const ActingOptions& options = {});

/// Resets `env` with `seed`, then runs seek_plan_act_tm from the first observation.
EpisodeResult plan_act_tm(Environment& env, std::uint64_t seed, const TaskList& tasks, const Domain& domain,
                          const TaskModifier& tm, const ActingOptions& options = {});

/// Same, starting from an already-obtained observation (env already reset).
EpisodeResult act_from(Environment& env, const Observation& first, const TaskList& tasks, const Domain& domain,
                       const TaskModifier& tm, const ActingOptions& options = {});

}  // namespace htn
