#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "experiment/stats.hpp"
#include "minefield/minefield.hpp"
#include "rainy_grid/rainy_grid.hpp"

namespace htn::exp {

enum class DomainKind { rainy_grid, minefield };
enum class AgentKind { tm, baseline1, baseline2, none, random };

const char* to_string(DomainKind d);
const char* to_string(AgentKind a);
std::optional<DomainKind> parse_domain(const std::string& s);
std::optional<AgentKind> parse_agent(const std::string& s);

/// Rainy Grid runs tm, baseline1, baseline2; Minefield runs tm, none, random.
bool supports(DomainKind d, AgentKind a);

struct SweepSpec {
    DomainKind domain = DomainKind::rainy_grid;
    AgentKind agent = AgentKind::tm;
    std::vector<double> probabilities;
    std::size_t episodes_per_point = 1;
    std::uint64_t base_seed = 0;
    /// Executed actions (Rainy Grid) or world ticks (Minefield) per episode.
    std::size_t step_cap = 10'000;
    /// Worker threads; 0 = hardware concurrency. Never changes the output.
    unsigned jobs = 1;

    rainy::TmConfig rainy_tm;
    minefield::TmConfig minefield_tm;
    /// p_mines is taken from `probabilities`.
    minefield::MinefieldConfig minefield;
};

/// Throws std::invalid_argument describing the first problem found.
void validate(const SweepSpec& spec);

struct RunRecord {
    DomainKind domain = DomainKind::rainy_grid;
    AgentKind agent = AgentKind::tm;
    double probability = 0.0;
    std::size_t episode = 0;
    std::uint64_t seed = 0;
    double metric = 0.0;
    std::size_t steps = 0;
    std::string outcome;

    bool operator==(const RunRecord&) const = default;
};

/// base_seed XOR a splitmix64 hash of (probability index, episode index).
/// Independent of the agent, so every agent meets the same layouts.
std::uint64_t episode_seed(std::uint64_t base_seed, std::size_t probability_index, std::size_t episode);

/// One episode of the sweep point (probability_index, episode).
RunRecord run_episode(const SweepSpec& spec, std::size_t probability_index, std::size_t episode);

/// Every episode of every probability, ordered by (probability index,
/// episode index) regardless of `jobs`.
std::vector<RunRecord> run_sweep(const SweepSpec& spec);

struct AggregateRow {
    DomainKind domain = DomainKind::rainy_grid;
    AgentKind agent = AgentKind::tm;
    double probability = 0.0;
    std::size_t n = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Mean and standard error per (domain, probability, agent), sorted by
/// domain, probability, then agent.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);

/// Welch test of agent `a` against agent `b`, one report per probability
/// present for both agents (by_probability) or pooled over all of them.
/// A probability with fewer than two records on either side is skipped.
struct ComparisonRow {
    std::optional<double> probability;
    TestReport report;
};
std::vector<ComparisonRow> compare_agents(const std::vector<RunRecord>& records, AgentKind a, AgentKind b,
                                          bool by_probability);

// CSV. Reals are written with 6 significant digits; every line ends in '\n'.

/// printf("%.6g"), so -23 prints as "-23" and 0.1 as "0.1".
std::string format_real(double v);

void write_records(std::ostream& os, const std::vector<RunRecord>& records);
/// Throws std::runtime_error with the offending line number on malformed input.
std::vector<RunRecord> read_records(std::istream& is);
void write_comparisons(std::ostream& os, const std::vector<ComparisonRow>& rows);
void write_aggregate(std::ostream& os, const std::vector<AggregateRow>& rows);
/// Per-agent series of (probability, mean, stderr).
void write_plot_data(std::ostream& os, const std::vector<AggregateRow>& rows);

}  // namespace htn::exp
