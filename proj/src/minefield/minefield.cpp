#include "minefield/minefield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace htn::minefield {

namespace {

const Symbol kAgent{"agent"};

bool is_central(Cell c) { return c.y >= kCentralLow && c.y <= kCentralHigh; }

// Uniform in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int sign(int v) { return (v > 0) - (v < 0); }

std::optional<std::string> symbol_arg(const Task& t) {
    if (t.args.size() != 1) return std::nullopt;
    const auto* s = std::get_if<Symbol>(&t.args[0]);
    if (!s) return std::nullopt;
    return s->name;
}

std::optional<Cell> cell_arg(const Task& t) {
    if (t.args.size() != 1) return std::nullopt;
    auto c = as_cell(t.args[0]);
    if (!c || !in_grid(*c)) return std::nullopt;
    return c;
}

}  // namespace

Region region_of(Cell c) {
    if (c.y < kCentralLow) return Region::lower;
    if (c.y > kCentralHigh) return Region::upper;
    return Region::central;
}

bool in_grid(Cell c) { return c.x >= 0 && c.x < kGridSize && c.y >= 0 && c.y < kGridSize; }

int chebyshev(Cell a, Cell b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

bool adjacent(Cell a, Cell b) { return chebyshev(a, b) == 1; }

Cell greedy_step(Cell from, Cell to) { return {from.x + sign(to.x - from.x), from.y + sign(to.y - from.y)}; }

std::vector<Cell> neighbours_ccw(Cell c) {
    static constexpr int kOffsets[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
    std::vector<Cell> out;
    out.reserve(8);
    for (const auto& o : kOffsets) {
        const Cell n{c.x + o[0], c.y + o[1]};
        if (in_grid(n)) out.push_back(n);
    }
    return out;
}

Value as_value(Cell c) { return IntPair{c.x, c.y}; }

std::optional<Cell> as_cell(const Value& v) {
    const auto* p = std::get_if<IntPair>(&v);
    if (!p) return std::nullopt;
    return Cell{static_cast<int>(p->x), static_cast<int>(p->y)};
}

Task move(Cell c) { return Task("move", {as_value(c)}); }
Task arrest(const std::string& boat) { return Task("arrest", {Symbol{boat}}); }
Task random_moves() { return Task("random_moves"); }
Task move_diag(Cell c) { return Task("move_diag", {as_value(c)}); }
Task search_near(Cell c) { return Task("search_near", {as_value(c)}); }
Task follow(const std::string& boat) { return Task("follow", {Symbol{boat}}); }

std::optional<Cell> agent_cell(const State& s) {
    auto v = s.get(key("loc", kAgent));
    if (!v) return std::nullopt;
    return as_cell(*v);
}

std::optional<Cell> boat_cell(const State& s, const std::string& id) {
    auto v = s.get(key("loc", Symbol{id}));
    if (!v) return std::nullopt;
    return as_cell(*v);
}

std::vector<std::string> boat_ids(const State& s) {
    std::vector<std::string> ids;
    for (const auto& [k, v] : s.vars()) {
        if (k.name != "loc" || k.args.size() != 1) continue;
        const auto* who = std::get_if<Symbol>(&k.args[0]);
        if (who && who->name.rfind("boat", 0) == 0) ids.push_back(who->name);
    }
    return ids;
}

std::int64_t MineGrid::total() const {
    std::int64_t n = 0;
    for (int c : cells_) n += c;
    return n;
}

// Environment

MinefieldEnv::MinefieldEnv(MinefieldConfig config) : config_(config) {
    if (!(config_.p_mines >= 0.0 && config_.p_mines <= 1.0)) throw std::invalid_argument("p_mines must lie in [0, 1]");
    if (!(config_.mine_sigma > 0.0)) throw std::invalid_argument("mine_sigma must be positive");
    if (config_.mines_per_drop < 0) throw std::invalid_argument("mines_per_drop must be non-negative");
}

Cell MinefieldEnv::random_central_cell() {
    std::uniform_int_distribution<int> x(0, kGridSize - 1);
    std::uniform_int_distribution<int> y(kCentralLow, kCentralHigh);
    Cell c;
    c.x = x(rng_);
    c.y = y(rng_);
    return c;
}

Observation MinefieldEnv::reset(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x4d696e65U};
    rng_.seed(seq);
    state_ = MinefieldState{};
    ledger_ = MineLedger{};
    last_tick_ = TickReport{};

    for (int i = 0; i < kTransportCount; ++i) state_.transports.push_back({Cell{0, kCentralLow + i}, true});

    // Agent (if any), pirate and fishers on distinct cells outside the central band.
    std::uniform_int_distribution<int> xs(0, kGridSize - 1);
    constexpr int kCentralRows = kCentralHigh - kCentralLow + 1;
    std::uniform_int_distribution<int> band(0, kGridSize - kCentralRows - 1);
    std::vector<Cell> taken;
    auto draw_outside = [&]() {
        for (;;) {
            int row = band(rng_);
            if (row >= kCentralLow) row += kCentralRows;
            Cell c;
            c.x = xs(rng_);
            c.y = row;
            if (std::find(taken.begin(), taken.end(), c) == taken.end()) {
                taken.push_back(c);
                return c;
            }
        }
    };
    if (config_.agent_present) state_.agent = draw_outside();
    const int pirate_index = std::uniform_int_distribution<int>(0, kFisherCount)(rng_);
    for (int i = 0; i <= kFisherCount; ++i) {
        Boat b;
        b.id = "boat" + std::to_string(i);
        b.pos = draw_outside();
        b.pirate = i == pirate_index;
        state_.boats.push_back(std::move(b));
    }
    for (Boat& b : state_.boats) {
        if (b.pirate) b.waypoint = random_central_cell();
    }
    return observe();
}

void MinefieldEnv::set_state(MinefieldState s) { state_ = std::move(s); }

bool MinefieldEnv::pirate_arrested() const {
    return std::any_of(state_.boats.begin(), state_.boats.end(), [](const Boat& b) { return b.pirate && b.arrested; });
}

double MinefieldEnv::metric() const {
    return static_cast<double>(std::count_if(state_.transports.begin(), state_.transports.end(),
                                             [](const Transport& t) { return t.alive; }));
}

Observation MinefieldEnv::observe() const {
    Observation obs;
    State& s = obs.state;
    if (state_.agent) {
        s.set(key("loc", kAgent), as_value(*state_.agent));
        s.set(key("mines_here"), static_cast<std::int64_t>(state_.mines.at(*state_.agent)));
    }
    for (const Boat& b : state_.boats) s.set(key("loc", Symbol{b.id}), as_value(b.pos));
    for (std::size_t i = 0; i < state_.transports.size(); ++i) {
        const auto idx = static_cast<std::int64_t>(i);
        s.set(key("transport", idx), as_value(state_.transports[i].pos));
        s.set(key("alive", idx), state_.transports[i].alive);
    }
    s.set(key("pirate_arrested"), pirate_arrested());
    s.set(key("mines_cleared"), state_.last_cleared);
    s.set(key("tick"), state_.tick);
    obs.terminated = state_.terminated;
    return obs;
}

std::optional<Observation> MinefieldEnv::execute(const std::string& action, const Task& task) {
    if (state_.terminated) throw EnvironmentError("minefield: action after the episode terminated");
    if (!state_.agent) throw EnvironmentError("minefield: no agent in this episode");
    const Cell here = *state_.agent;

    if (action == "move") {
        const auto c = cell_arg(task);
        if (!c || !adjacent(here, *c)) return std::nullopt;
        last_tick_ = TickReport{};
        state_.agent = *c;
        const int cleared = std::exchange(state_.mines.at(*c), 0);
        ledger_.cleared += cleared;
        state_.last_cleared = cleared;
        last_tick_.agent_moved = true;
        last_tick_.mines_cleared = cleared;
        last_tick_.mines_at_agent_after_move = state_.mines.at(*c);
    } else if (action == "arrest") {
        const auto id = symbol_arg(task);
        if (!id) return std::nullopt;
        auto it = std::find_if(state_.boats.begin(), state_.boats.end(), [&](const Boat& b) { return b.id == *id; });
        if (it == state_.boats.end() || chebyshev(here, it->pos) > 1) return std::nullopt;
        last_tick_ = TickReport{};
        state_.last_cleared = 0;
        if (it->pirate) it->arrested = true;
    } else {
        return std::nullopt;
    }
    advance_world();
    return observe();
}

Observation MinefieldEnv::idle_tick() {
    if (state_.terminated) throw EnvironmentError("minefield: tick after the episode terminated");
    last_tick_ = TickReport{};
    state_.last_cleared = 0;
    advance_world();
    return observe();
}

void MinefieldEnv::pirate_phase(Boat& pirate) {
    if (pirate.arrested) return;
    if (!pirate.waypoint) pirate.waypoint = random_central_cell();
    if (pirate.pos != *pirate.waypoint) pirate.pos = greedy_step(pirate.pos, *pirate.waypoint);
    while (pirate.pos == *pirate.waypoint) pirate.waypoint = random_central_cell();

    if (unit(rng_) < config_.p_mines) {
        std::normal_distribution<double> offset(0.0, config_.mine_sigma);
        for (int i = 0; i < config_.mines_per_drop; ++i) {
            const double dx = offset(rng_);
            const double dy = offset(rng_);
            const Cell c{pirate.pos.x + static_cast<int>(std::lround(dx)), pirate.pos.y + static_cast<int>(std::lround(dy))};
            if (!in_grid(c)) continue;
            ++state_.mines.at(c);
            ++ledger_.created;
            ++last_tick_.created;
        }
    }
}

void MinefieldEnv::fisher_phase(Boat& fisher) {
    if (fisher.arrested) return;
    std::vector<Cell> options;
    for (Cell n : neighbours_ccw(fisher.pos)) {
        if (!is_central(n)) options.push_back(n);
    }
    if (options.empty()) return;
    fisher.pos = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng_)];
}

void MinefieldEnv::advance_world() {
    for (Boat& b : state_.boats) {
        if (b.pirate) pirate_phase(b);
    }
    for (Boat& b : state_.boats) {
        if (!b.pirate) fisher_phase(b);
    }
    if (state_.tick >= config_.transport_start_delay) {
        for (Transport& t : state_.transports) {
            if (t.alive && t.pos.x < kGridSize - 1) ++t.pos.x;
        }
    }
    for (Transport& t : state_.transports) {
        if (!t.alive) continue;
        int& here = state_.mines.at(t.pos);
        if (here > 0) {
            --here;
            t.alive = false;
            ++ledger_.detonated;
            ++last_tick_.detonated;
        }
    }
    ++state_.tick;

    bool any_alive = false;
    bool all_across = true;
    for (const Transport& t : state_.transports) {
        if (!t.alive) continue;
        any_alive = true;
        if (t.pos.x != kGridSize - 1) all_across = false;
    }
    state_.terminated = !any_alive || all_across;
}

std::uint64_t agent_stream_seed(std::uint64_t episode_seed, std::uint64_t stream) {
    // splitmix64 finalizer over a stream-tagged seed.
    std::uint64_t z = episode_seed ^ (0xa0761d6478bd642fULL * (stream + 1));
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Agent model

std::optional<TaskList> method_random_moves(std::mt19937_64& rng, const State& s, const Task&) {
    const auto here = agent_cell(s);
    if (!here) return std::nullopt;
    std::uniform_int_distribution<int> x(0, kGridSize - 1);
    std::uniform_int_distribution<int> y(kCentralLow, kCentralHigh);
    Cell c1 = *here;
    while (c1 == *here) {
        c1.x = x(rng);
        c1.y = y(rng);
    }
    return TaskList{move_diag(c1), random_moves()};
}

std::optional<TaskList> method_move_diag(const State& s, const Task& t) {
    const auto target = cell_arg(t);
    const auto here = agent_cell(s);
    if (!target || !here) return std::nullopt;
    if (*here == *target) return TaskList{};
    return TaskList{move(greedy_step(*here, *target)), t};
}

std::optional<TaskList> method_search_near(const State&, const Task& t) {
    const auto c = cell_arg(t);
    if (!c) return std::nullopt;
    TaskList out;
    for (Cell n : neighbours_ccw(*c)) out.push_back(move_diag(n));
    return out;
}

std::optional<TaskList> method_follow(const State& s, const Task& t) {
    const auto id = symbol_arg(t);
    if (!id) return std::nullopt;
    const auto here = agent_cell(s);
    const auto there = boat_cell(s, *id);
    if (!here || !there) return std::nullopt;
    if (*here == *there) return TaskList{};
    return TaskList{move(greedy_step(*here, *there)), t};
}

Domain make_domain(SharedRng rng) {
    if (!rng) throw std::invalid_argument("minefield domain needs an agent RNG");
    Domain d;
    d.add_action({"move", [](const State& s, const Task& t) -> std::optional<State> {
                      const auto c = cell_arg(t);
                      const auto here = agent_cell(s);
                      if (!c || !here || !adjacent(*here, *c)) return std::nullopt;
                      return s.with(key("loc", kAgent), as_value(*c));
                  }});
    d.add_action({"arrest", [](const State& s, const Task& t) -> std::optional<State> {
                      const auto id = symbol_arg(t);
                      const auto here = agent_cell(s);
                      if (!id || !here) return std::nullopt;
                      const auto there = boat_cell(s, *id);
                      if (!there || chebyshev(*here, *there) > 1) return std::nullopt;
                      return s;
                  }});
    d.add_method("random_moves", {"patrol", [rng](const State& s, const Task& t) {
                                      return method_random_moves(*rng, s, t);
                                  }});
    d.add_method("move_diag", {"king_step", method_move_diag});
    d.add_method("search_near", {"ring", method_search_near});
    d.add_method("follow", {"chase", method_follow});
    return d;
}

// Task modifiers

std::optional<std::string> estimate_pirate(AgentBelief& belief, const Observation& obs, int threshold) {
    if (obs.state.get_as<bool>(key("pirate_arrested")).value_or(false)) belief.pirate_arrested_known = true;
    if (belief.pirate_arrested_known) return std::nullopt;

    for (const std::string& id : boat_ids(obs.state)) {
        const auto c = boat_cell(obs.state, id);
        int& score = belief.suspicion[id];
        if (c && is_central(*c)) ++score;
    }
    std::optional<std::string> best;
    int best_score = 0;
    // std::map iterates ids in lexicographic order, so ">" keeps the first on ties.
    for (const auto& [id, score] : belief.suspicion) {
        if (score > best_score) {
            best = id;
            best_score = score;
        }
    }
    if (best_score < threshold) return std::nullopt;
    return best;
}

TaskModifier make_task_modifier(TmConfig config, std::shared_ptr<AgentBelief> belief) {
    if (!belief) belief = std::make_shared<AgentBelief>();
    return TaskModifier([config, belief](const Observation& obs, const TaskList& in) {
        TaskList tasks = in;
        const auto here = agent_cell(obs.state);
        const auto suspect = estimate_pirate(*belief, obs, config.suspicion_threshold);

        // 1. Mines found where we stepped: sweep the surrounding ring.
        const auto cleared = obs.state.get_as<std::int64_t>(key("mines_cleared")).value_or(0);
        if (here && cleared > 0) {
            belief->encountered_mines.insert(*here);
            const Task sweep = search_near(*here);
            if (tasks.empty() || tasks.front() != sweep) tasks.insert(tasks.begin(), sweep);
        }

        // 2. Chase the most likely pirate, replacing any older chase.
        if (suspect) {
            std::erase_if(tasks, [](const Task& t) { return t.name == "follow"; });
            tasks.insert(tasks.begin(), follow(*suspect));
        }

        // 3. Close enough to the followed suspect: arrest it.
        if (suspect && here && !belief->pirate_arrested_known) {
            const auto there = boat_cell(obs.state, *suspect);
            if (there && chebyshev(*here, *there) <= 1) tasks.insert(tasks.begin(), arrest(*suspect));
        }
        return tasks;
    });
}

TaskModifier make_random_task_modifier(SharedRng rng) {
    if (!rng) throw std::invalid_argument("random task modifier needs an RNG");
    return TaskModifier([rng](const Observation& obs, const TaskList& in) {
        std::vector<std::string> ids = boat_ids(obs.state);
        if (ids.empty()) ids = {"boat0", "boat1", "boat2", "boat3"};
        std::uniform_int_distribution<int> kind(0, 3);
        std::uniform_int_distribution<int> coord(0, kGridSize - 1);
        std::uniform_int_distribution<std::size_t> boat(0, ids.size() - 1);

        Task t;
        switch (kind(*rng)) {
            case 0: t = search_near(Cell{coord(*rng), coord(*rng)}); break;
            case 1: t = follow(ids[boat(*rng)]); break;
            case 2: t = arrest(ids[boat(*rng)]); break;
            default: t = move_diag(Cell{coord(*rng), coord(*rng)}); break;
        }
        TaskList tasks;
        tasks.reserve(in.size() + 1);
        tasks.push_back(std::move(t));
        tasks.insert(tasks.end(), in.begin(), in.end());
        return tasks;
    });
}

TaskList initial_tasklist() { return {random_moves()}; }

}  // namespace htn::minefield
