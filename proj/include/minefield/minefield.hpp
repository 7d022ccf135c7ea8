#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "htn/domain.hpp"
#include "htn/environment.hpp"
#include "htn/task_modifier.hpp"

namespace htn::minefield {

inline constexpr int kGridSize = 20;
inline constexpr int kCentralLow = 5;    // first central row
inline constexpr int kCentralHigh = 14;  // last central row
inline constexpr int kTransportCount = 10;
inline constexpr int kFisherCount = 3;

struct Cell {
    int x = 0;
    int y = 0;

    auto operator<=>(const Cell&) const = default;
};

enum class Region { lower, central, upper };

Region region_of(Cell c);
bool in_grid(Cell c);
int chebyshev(Cell a, Cell b);
/// Distinct cells at Chebyshev distance 1.
bool adjacent(Cell a, Cell b);
/// One king-move from `from` that reduces every nonzero coordinate gap to `to`.
Cell greedy_step(Cell from, Cell to);
/// In-grid neighbours of c, counterclockwise starting east.
std::vector<Cell> neighbours_ccw(Cell c);

Value as_value(Cell c);
std::optional<Cell> as_cell(const Value& v);

// Task constructors.
Task move(Cell c);
Task arrest(const std::string& boat);
Task random_moves();
Task move_diag(Cell c);
Task search_near(Cell c);
Task follow(const std::string& boat);

// Observation layout.
//   loc(agent)            : IntPair (absent without an agent)
//   loc(<boat id>)        : IntPair, ids boat0..boat3; roles are not observed
//   transport(i), alive(i): IntPair, bool for i in 0..9
//   pirate_arrested       : bool
//   mines_cleared         : int64, mines removed by the latest agent move
//   mines_here            : int64, mines currently in the agent's cell
//   tick                  : int64
std::optional<Cell> agent_cell(const State& s);
std::optional<Cell> boat_cell(const State& s, const std::string& id);
std::vector<std::string> boat_ids(const State& s);

struct MinefieldConfig {
    /// Per-tick probability that the pirate drops a batch of mines.
    double p_mines = 0.0;
    double mine_sigma = 2.0;
    int mines_per_drop = 20;
    int transport_start_delay = 20;
    /// Without an agent the episode is driven by idle_tick() only.
    bool agent_present = true;
};

struct Boat {
    std::string id;
    Cell pos;
    bool pirate = false;
    bool arrested = false;
    std::optional<Cell> waypoint;
};

struct Transport {
    Cell pos;
    bool alive = true;
};

struct MineLedger {
    std::int64_t created = 0;
    std::int64_t cleared = 0;
    std::int64_t detonated = 0;
};

/// Bookkeeping of the latest tick, for invariant checks.
struct TickReport {
    bool agent_moved = false;
    std::int64_t mines_cleared = 0;
    std::int64_t mines_at_agent_after_move = 0;
    std::int64_t created = 0;
    std::int64_t detonated = 0;
};

class MineGrid {
public:
    int at(Cell c) const { return cells_[index(c)]; }
    int& at(Cell c) { return cells_[index(c)]; }
    std::int64_t total() const;

private:
    static std::size_t index(Cell c) { return static_cast<std::size_t>(c.y) * kGridSize + static_cast<std::size_t>(c.x); }
    std::array<int, kGridSize * kGridSize> cells_{};
};

struct MinefieldState {
    std::optional<Cell> agent;
    std::vector<Boat> boats;
    std::vector<Transport> transports;
    MineGrid mines;
    std::int64_t tick = 0;
    bool terminated = false;
    std::int64_t last_cleared = 0;
};

class MinefieldEnv final : public Environment {
public:
    explicit MinefieldEnv(MinefieldConfig config);

    Observation reset(std::uint64_t seed) override;

    /// move(c) needs c adjacent to the agent; arrest(b) needs b within one
    /// cell. An applicable action advances the world by one tick.
    std::optional<Observation> execute(const std::string& action, const Task& task) override;

    /// Advances one tick with no agent action.
    Observation idle_tick();

    /// Surviving transports.
    double metric() const override;

    const MinefieldState& state() const { return state_; }
    /// Replaces the world state. For building scenarios in tests.
    void set_state(MinefieldState s);

    const MineLedger& ledger() const { return ledger_; }
    const TickReport& last_tick() const { return last_tick_; }
    const MinefieldConfig& config() const { return config_; }
    bool pirate_arrested() const;

    Observation observe() const;

private:
    void advance_world();
    void pirate_phase(Boat& pirate);
    void fisher_phase(Boat& fisher);
    Cell random_central_cell();

    MinefieldConfig config_;
    MinefieldState state_;
    MineLedger ledger_;
    TickReport last_tick_;
    std::mt19937_64 rng_;
};

/// Seed of the agent-side random stream for an episode seed. Independent of
/// the environment stream.
std::uint64_t agent_stream_seed(std::uint64_t episode_seed, std::uint64_t stream = 0);

using SharedRng = std::shared_ptr<std::mt19937_64>;

/// Agent model of the Minefield tasks. `rng` drives random_moves.
Domain make_domain(SharedRng rng);

std::optional<TaskList> method_random_moves(std::mt19937_64& rng, const State& s, const Task& t);
std::optional<TaskList> method_move_diag(const State& s, const Task& t);
std::optional<TaskList> method_search_near(const State& s, const Task& t);
std::optional<TaskList> method_follow(const State& s, const Task& t);

/// Evidence that each boat is the pirate, accumulated from observations.
struct AgentBelief {
    std::map<std::string, int> suspicion;
    std::set<Cell> encountered_mines;
    bool pirate_arrested_known = false;
};

/// Adds one suspicion point to every boat seen inside the central region
/// (fishing boats keep to the upper and lower regions). Returns the most
/// suspicious boat once its score reaches `threshold`, ties broken by id,
/// or nothing once the pirate is known to be arrested.
std::optional<std::string> estimate_pirate(AgentBelief& belief, const Observation& obs, int threshold);

struct TmConfig {
    int suspicion_threshold = 5;
};

/// Applies, in order:
///   1. mines cleared in cell c  => prepend search_near(c) unless already head
///   2. a suspect b              => drop every follow task, prepend follow(b)
///   3. next to the followed suspect and the pirate still free => prepend arrest(b)
/// `belief`, when given, receives the modifier's belief store for inspection.
TaskModifier make_task_modifier(TmConfig config = {}, std::shared_ptr<AgentBelief> belief = nullptr);

/// Prepends one of search_near(c), follow(b), arrest(b), move_diag(c) with
/// uniformly drawn kind, cell and boat.
TaskModifier make_random_task_modifier(SharedRng rng);

/// The patrol task list every Minefield agent starts from.
TaskList initial_tasklist();

}  // namespace htn::minefield
