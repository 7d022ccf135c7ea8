#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "htn/domain.hpp"
#include "htn/environment.hpp"
#include "htn/task_modifier.hpp"

namespace htn::rainy {

inline constexpr int kGridSize = 10;

struct GridPos {
    int x = 0;
    int y = 0;

    auto operator<=>(const GridPos&) const = default;
};

inline constexpr GridPos kExit{kGridSize - 1, kGridSize - 1};

int manhattan(GridPos a, GridPos b);
bool in_bounds(GridPos p);

/// right = +x, up = +y.
enum class Direction { right, up, left, down };

const char* to_string(Direction d);
std::optional<Direction> parse_direction(const std::string& s);
GridPos step(GridPos p, Direction d);

/// Direction of one step from `from` toward `to`: along the axis with the
/// larger remaining gap, horizontal on ties. `from` must differ from `to`.
Direction step_toward(GridPos from, GridPos to);

// Task constructors. Destinations are the symbols `beacon` and `exit`.
Task move(Direction d);
Task go_to(const std::string& dest);

// Observation layout.
//   loc(agent), loc(beacon), loc(exit) : IntPair
//   beacon_reached                     : bool
//   reward                             : int64, cumulative
std::optional<GridPos> position(const State& s, const std::string& who);

struct RainyGridConfig {
    /// True rain probability. Not part of the observation.
    double p_rain = 0.0;
};

struct RainyGridState {
    GridPos agent;
    GridPos beacon;
    GridPos exit = kExit;
    bool beacon_reached = false;
    std::int64_t cumulative_reward = 0;
    bool terminated = false;
    std::size_t rainy_steps = 0;
};

class RainyGridEnv final : public Environment {
public:
    explicit RainyGridEnv(RainyGridConfig config);

    /// Agent and beacon uniform over the grid, pairwise distinct and off the exit.
    Observation reset(std::uint64_t seed) override;

    /// Accepts `move(dir)` only. Before the beacon is reached each move is
    /// rainy with probability p_rain: reward -5 and no motion. Otherwise
    /// reward -1 and one step, clamped at the border.
    std::optional<Observation> execute(const std::string& action, const Task& task) override;

    /// Cumulative reward.
    double metric() const override { return static_cast<double>(state_.cumulative_reward); }

    /// Reseeds and places the agent and beacon explicitly.
    Observation start_at(std::uint64_t seed, GridPos agent, GridPos beacon, bool beacon_reached = false);

    const RainyGridState& state() const { return state_; }
    Observation observe() const;

private:
    RainyGridConfig config_;
    RainyGridState state_;
    std::mt19937_64 rng_;
};

/// `move` is modelled as a dry step; `go_to(dest)` decomposes into
/// (move(dir), go_to(dest)) until the agent stands on dest, then into ().
Domain make_domain();

std::optional<TaskList> method_go_to(const State& s, const Task& t);

/// Expected cost of one net move under an assumed rain probability.
enum class CostModel {
    as_published,    ///< (1 + p) / (1 - p)
    reward_derived,  ///< (1 + 4p) / (1 - p): -1 dry, -5 rainy, retry until dry
};

const char* to_string(CostModel m);
std::optional<CostModel> parse_cost_model(const std::string& s);

/// Throws std::domain_error unless 0 <= p_assumed < 1.
double expected_move_cost(double p_assumed, CostModel model = CostModel::as_published);

struct TmConfig {
    double p_assumed = 0.5;
    CostModel cost_model = CostModel::as_published;
};

/// Cheaper of (go_to(exit)) and (go_to(beacon), go_to(exit)). Moves made
/// after the beacon are costed at 1 since rain has stopped. Ties go
/// directly to the exit; after the beacon is reached always (go_to(exit)).
TaskList choose_route(const State& s, const TmConfig& config = {});

/// Rewrites either route shape into choose_route's pick. Other lists are
/// returned unchanged.
TaskModifier make_task_modifier(TmConfig config = {});

/// 1: (go_to(exit)). 2: (go_to(beacon), go_to(exit)). Throws
/// std::invalid_argument otherwise.
TaskList baseline_tasklist(int which);

}  // namespace htn::rainy
