#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "htn/domain.hpp"
#include "htn/state.hpp"
#include "htn/task.hpp"

namespace htn {

/// What the agent sees after reset or after an action. `state` may be partial.
struct Observation {
    State state;
    bool terminated = false;
};

/// Raised when an environment is driven outside its contract, e.g. an
/// action after the terminal signal.
class EnvironmentError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Episodic world the actor interacts with. Equal seeds and equal action
/// sequences must give identical episodes.
class Environment {
public:
    virtual ~Environment() = default;

    virtual Observation reset(std::uint64_t seed) = 0;

    /// Performs one action. std::nullopt means the action is not applicable
    /// and the world is unchanged. Throws EnvironmentError after termination.
    virtual std::optional<Observation> execute(const std::string& action, const Task& task) = 0;

    /// Domain performance measure of the episode so far.
    virtual double metric() const = 0;
};

/// Environment whose transitions are exactly a Domain's ActionDef model.
/// Never terminates on its own. Used to check the acting loop against the
/// offline planner.
class ModelEnvironment final : public Environment {
public:
    ModelEnvironment(const Domain& domain, State initial) : domain_(&domain), initial_(std::move(initial)) {}

    Observation reset(std::uint64_t seed) override;
    std::optional<Observation> execute(const std::string& action, const Task& task) override;
    /// Number of successfully executed actions.
    double metric() const override { return static_cast<double>(executed_); }

    const State& state() const { return current_; }

private:
    const Domain* domain_;
    State initial_;
    State current_;
    std::size_t executed_ = 0;
};

}  // namespace htn
