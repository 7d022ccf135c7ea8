#include "rainy_grid/rainy_grid.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace htn::rainy {

namespace {

const Symbol kAgent{"agent"};
const Symbol kBeacon{"beacon"};
const Symbol kExitSym{"exit"};

Value as_value(GridPos p) { return IntPair{p.x, p.y}; }

// Uniform in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

GridPos random_cell(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coord(0, kGridSize - 1);
    GridPos p;
    p.x = coord(rng);
    p.y = coord(rng);
    return p;
}

}  // namespace

int manhattan(GridPos a, GridPos b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

bool in_bounds(GridPos p) { return p.x >= 0 && p.x < kGridSize && p.y >= 0 && p.y < kGridSize; }

const char* to_string(Direction d) {
    switch (d) {
        case Direction::right: return "right";
        case Direction::up: return "up";
        case Direction::left: return "left";
        case Direction::down: return "down";
    }
    return "?";
}

std::optional<Direction> parse_direction(const std::string& s) {
    if (s == "right") return Direction::right;
    if (s == "up") return Direction::up;
    if (s == "left") return Direction::left;
    if (s == "down") return Direction::down;
    return std::nullopt;
}

GridPos step(GridPos p, Direction d) {
    switch (d) {
        case Direction::right: ++p.x; break;
        case Direction::up: ++p.y; break;
        case Direction::left: --p.x; break;
        case Direction::down: --p.y; break;
    }
    return p;
}

Direction step_toward(GridPos from, GridPos to) {
    const int dx = to.x - from.x;
    const int dy = to.y - from.y;
    if (std::abs(dx) >= std::abs(dy) && dx != 0) return dx > 0 ? Direction::right : Direction::left;
    return dy > 0 ? Direction::up : Direction::down;
}

Task move(Direction d) { return Task("move", {Symbol{to_string(d)}}); }
Task go_to(const std::string& dest) { return Task("go_to", {Symbol{dest}}); }

std::optional<GridPos> position(const State& s, const std::string& who) {
    auto p = s.get_as<IntPair>(key("loc", Symbol{who}));
    if (!p) return std::nullopt;
    return GridPos{static_cast<int>(p->x), static_cast<int>(p->y)};
}

// Environment

RainyGridEnv::RainyGridEnv(RainyGridConfig config) : config_(config) {
    if (!(config_.p_rain >= 0.0 && config_.p_rain <= 1.0)) {
        throw std::invalid_argument("p_rain must lie in [0, 1]");
    }
}

Observation RainyGridEnv::reset(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5261696eU};
    rng_.seed(seq);
    state_ = RainyGridState{};
    do {
        state_.agent = random_cell(rng_);
    } while (state_.agent == state_.exit);
    do {
        state_.beacon = random_cell(rng_);
    } while (state_.beacon == state_.exit || state_.beacon == state_.agent);
    return observe();
}

Observation RainyGridEnv::start_at(std::uint64_t seed, GridPos agent, GridPos beacon, bool beacon_reached) {
    if (!in_bounds(agent) || !in_bounds(beacon)) throw std::invalid_argument("position off the grid");
    reset(seed);
    state_.agent = agent;
    state_.beacon = beacon;
    state_.beacon_reached = beacon_reached;
    state_.terminated = agent == state_.exit;
    return observe();
}

Observation RainyGridEnv::observe() const {
    Observation obs;
    obs.state.set(key("loc", kAgent), as_value(state_.agent));
    obs.state.set(key("loc", kBeacon), as_value(state_.beacon));
    obs.state.set(key("loc", kExitSym), as_value(state_.exit));
    obs.state.set(key("beacon_reached"), state_.beacon_reached);
    obs.state.set(key("reward"), state_.cumulative_reward);
    obs.terminated = state_.terminated;
    return obs;
}

std::optional<Observation> RainyGridEnv::execute(const std::string& action, const Task& task) {
    if (state_.terminated) throw EnvironmentError("rainy grid: action after the episode terminated");
    if (action != "move" || task.args.size() != 1) return std::nullopt;
    const auto* dir_sym = std::get_if<Symbol>(&task.args[0]);
    if (!dir_sym) return std::nullopt;
    const auto dir = parse_direction(dir_sym->name);
    if (!dir) return std::nullopt;

    // The rain roll comes first: a rainy step does not move, so it cannot
    // reach the beacon.
    const bool rainy = !state_.beacon_reached && unit(rng_) < config_.p_rain;
    if (rainy) {
        state_.cumulative_reward -= 5;
        ++state_.rainy_steps;
        return observe();
    }
    state_.cumulative_reward -= 1;
    const GridPos next = step(state_.agent, *dir);
    if (in_bounds(next)) state_.agent = next;
    if (state_.agent == state_.beacon) state_.beacon_reached = true;
    if (state_.agent == state_.exit) state_.terminated = true;
    return observe();
}

// Domain

std::optional<TaskList> method_go_to(const State& s, const Task& t) {
    if (t.args.size() != 1) return std::nullopt;
    const auto* dest = std::get_if<Symbol>(&t.args[0]);
    if (!dest || (dest->name != "beacon" && dest->name != "exit")) return std::nullopt;
    const auto agent = position(s, "agent");
    const auto target = position(s, dest->name);
    if (!agent || !target) return std::nullopt;
    if (*agent == *target) return TaskList{};
    return TaskList{move(step_toward(*agent, *target)), t};
}

Domain make_domain() {
    Domain d;
    d.add_action({"move", [](const State& s, const Task& t) -> std::optional<State> {
                      if (t.args.size() != 1) return std::nullopt;
                      const auto* sym = std::get_if<Symbol>(&t.args[0]);
                      if (!sym) return std::nullopt;
                      const auto dir = parse_direction(sym->name);
                      const auto agent = position(s, "agent");
                      if (!dir || !agent) return std::nullopt;
                      GridPos next = step(*agent, *dir);
                      if (!in_bounds(next)) next = *agent;
                      State out = s.with(key("loc", kAgent), as_value(next));
                      if (position(s, "beacon") == next) out.set(key("beacon_reached"), true);
                      return out;
                  }});
    d.add_method("go_to", {"go_to_step", method_go_to});
    return d;
}

// Task modifier

const char* to_string(CostModel m) {
    switch (m) {
        case CostModel::as_published: return "published";
        case CostModel::reward_derived: return "reward-derived";
    }
    return "?";
}

std::optional<CostModel> parse_cost_model(const std::string& s) {
    if (s == "published") return CostModel::as_published;
    if (s == "reward-derived") return CostModel::reward_derived;
    return std::nullopt;
}

double expected_move_cost(double p_assumed, CostModel model) {
    if (!(p_assumed >= 0.0 && p_assumed < 1.0)) {
        throw std::domain_error("assumed rain probability must lie in [0, 1)");
    }
    switch (model) {
        case CostModel::as_published: return (1.0 + p_assumed) / (1.0 - p_assumed);
        case CostModel::reward_derived: return (1.0 + 4.0 * p_assumed) / (1.0 - p_assumed);
    }
    return 0.0;
}

TaskList choose_route(const State& s, const TmConfig& config) {
    const TaskList direct{go_to("exit")};
    if (s.get_as<bool>(key("beacon_reached")).value_or(false)) return direct;
    const auto agent = position(s, "agent");
    const auto beacon = position(s, "beacon");
    const auto exit = position(s, "exit");
    if (!agent || !beacon || !exit) return direct;

    const double e = expected_move_cost(config.p_assumed, config.cost_model);
    const double cost_direct = e * manhattan(*agent, *exit);
    const double cost_via_beacon = e * manhattan(*agent, *beacon) + 1.0 * manhattan(*beacon, *exit);
    if (cost_via_beacon < cost_direct) return TaskList{go_to("beacon"), go_to("exit")};
    return direct;
}

TaskModifier make_task_modifier(TmConfig config) {
    expected_move_cost(config.p_assumed, config.cost_model);
    const TaskList direct = baseline_tasklist(1);
    const TaskList via = baseline_tasklist(2);
    return TaskModifier([config, direct, via](const Observation& obs, const TaskList& tasks) {
        if (tasks != direct && tasks != via) return tasks;
        return choose_route(obs.state, config);
    });
}

TaskList baseline_tasklist(int which) {
    switch (which) {
        case 1: return {go_to("exit")};
        case 2: return {go_to("beacon"), go_to("exit")};
        default: throw std::invalid_argument("rainy grid baseline must be 1 or 2");
    }
}

}  // namespace htn::rainy
