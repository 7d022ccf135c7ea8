#include "experiment/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "htn/actor.hpp"

namespace htn::exp {

const char* to_string(DomainKind d) {
    switch (d) {
        case DomainKind::rainy_grid: return "rainy-grid";
        case DomainKind::minefield: return "minefield";
    }
    return "?";
}

const char* to_string(AgentKind a) {
    switch (a) {
        case AgentKind::tm: return "tm";
        case AgentKind::baseline1: return "baseline1";
        case AgentKind::baseline2: return "baseline2";
        case AgentKind::none: return "none";
        case AgentKind::random: return "random";
    }
    return "?";
}

std::optional<DomainKind> parse_domain(const std::string& s) {
    if (s == "rainy-grid") return DomainKind::rainy_grid;
    if (s == "minefield") return DomainKind::minefield;
    return std::nullopt;
}

std::optional<AgentKind> parse_agent(const std::string& s) {
    for (AgentKind a : {AgentKind::tm, AgentKind::baseline1, AgentKind::baseline2, AgentKind::none, AgentKind::random}) {
        if (s == to_string(a)) return a;
    }
    return std::nullopt;
}

bool supports(DomainKind d, AgentKind a) {
    if (d == DomainKind::rainy_grid) return a == AgentKind::tm || a == AgentKind::baseline1 || a == AgentKind::baseline2;
    return a == AgentKind::tm || a == AgentKind::none || a == AgentKind::random;
}

void validate(const SweepSpec& spec) {
    if (!supports(spec.domain, spec.agent)) {
        throw std::invalid_argument(std::string("agent '") + to_string(spec.agent) + "' is not available in " +
                                    to_string(spec.domain));
    }
    if (spec.probabilities.empty()) throw std::invalid_argument("at least one probability is required");
    for (double p : spec.probabilities) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability " + format_real(p) + " is outside [0, 1]");
    }
    if (spec.episodes_per_point < 1) throw std::invalid_argument("episodes per point must be at least 1");
    if (spec.step_cap < 1) throw std::invalid_argument("step cap must be at least 1");
    if (spec.domain == DomainKind::rainy_grid) rainy::expected_move_cost(spec.rainy_tm.p_assumed, spec.rainy_tm.cost_model);
}

std::uint64_t episode_seed(std::uint64_t base_seed, std::size_t probability_index, std::size_t episode) {
    std::uint64_t z = (static_cast<std::uint64_t>(probability_index) << 32) ^ static_cast<std::uint64_t>(episode);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return base_seed ^ z;
}

namespace {

RunRecord run_rainy(const SweepSpec& spec, double p, std::uint64_t seed) {
    rainy::RainyGridEnv env(rainy::RainyGridConfig{p});
    const Observation first = env.reset(seed);
    const Domain domain = rainy::make_domain();

    TaskList tasks;
    TaskModifier tm = identity_tm();
    switch (spec.agent) {
        case AgentKind::baseline1: tasks = rainy::baseline_tasklist(1); break;
        case AgentKind::baseline2: tasks = rainy::baseline_tasklist(2); break;
        default:
            // The TM agent opens with the same route choice its modifier makes after each move.
            tasks = rainy::choose_route(first.state, spec.rainy_tm);
            tm = rainy::make_task_modifier(spec.rainy_tm);
            break;
    }
    ActingOptions opts;
    opts.max_actions = spec.step_cap;
    const EpisodeResult r = act_from(env, first, tasks, domain, tm, opts);

    RunRecord rec;
    rec.metric = r.final_metric;
    rec.steps = r.steps_executed;
    rec.outcome = to_string(r.outcome);
    return rec;
}

RunRecord run_minefield(const SweepSpec& spec, double p, std::uint64_t seed) {
    minefield::MinefieldConfig cfg = spec.minefield;
    cfg.p_mines = p;
    cfg.agent_present = spec.agent != AgentKind::none;
    minefield::MinefieldEnv env(cfg);
    const Observation first = env.reset(seed);

    RunRecord rec;
    Outcome outcome = Outcome::completed;
    if (spec.agent != AgentKind::none) {
        auto domain_rng = std::make_shared<std::mt19937_64>(minefield::agent_stream_seed(seed, 0));
        const Domain domain = minefield::make_domain(domain_rng);
        TaskModifier tm;
        if (spec.agent == AgentKind::random) {
            tm = minefield::make_random_task_modifier(
                std::make_shared<std::mt19937_64>(minefield::agent_stream_seed(seed, 1)));
        } else {
            tm = minefield::make_task_modifier(spec.minefield_tm);
        }
        ActingOptions opts;
        opts.max_actions = spec.step_cap;
        outcome = act_from(env, first, minefield::initial_tasklist(), domain, tm, opts).outcome;
    }
    // The world runs to its end whether or not the agent is still acting.
    while (!env.state().terminated && static_cast<std::size_t>(env.state().tick) < spec.step_cap) env.idle_tick();
    if (!env.state().terminated) outcome = Outcome::capped;

    rec.metric = env.metric();
    rec.steps = static_cast<std::size_t>(env.state().tick);
    rec.outcome = to_string(outcome);
    return rec;
}

}  // namespace

RunRecord run_episode(const SweepSpec& spec, std::size_t probability_index, std::size_t episode) {
    const double p = spec.probabilities.at(probability_index);
    const std::uint64_t seed = episode_seed(spec.base_seed, probability_index, episode);
    RunRecord rec = spec.domain == DomainKind::rainy_grid ? run_rainy(spec, p, seed) : run_minefield(spec, p, seed);
    rec.domain = spec.domain;
    rec.agent = spec.agent;
    rec.probability = p;
    rec.episode = episode;
    rec.seed = seed;
    return rec;
}

std::vector<RunRecord> run_sweep(const SweepSpec& spec) {
    validate(spec);
    const std::size_t per_point = spec.episodes_per_point;
    const std::size_t total = spec.probabilities.size() * per_point;
    std::vector<RunRecord> records(total);

    unsigned jobs = spec.jobs == 0 ? std::max(1U, std::thread::hardware_concurrency()) : spec.jobs;
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        for (std::size_t i = next++; i < total && !failed; i = next++) {
            try {
                records[i] = run_episode(spec, i / per_point, i % per_point);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    return records;
}

// Aggregation

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
    using Key = std::tuple<DomainKind, double, AgentKind>;
    std::map<Key, std::vector<double>> groups;
    for (const RunRecord& r : records) groups[{r.domain, r.probability, r.agent}].push_back(r.metric);

    std::vector<AggregateRow> rows;
    rows.reserve(groups.size());
    for (const auto& [k, values] : groups) {
        AggregateRow row;
        std::tie(row.domain, row.probability, row.agent) = k;
        row.n = values.size();
        double sum = 0.0;
        for (double v : values) sum += v;
        row.mean = sum / static_cast<double>(row.n);
        if (row.n > 1) {
            double ss = 0.0;
            for (double v : values) ss += (v - row.mean) * (v - row.mean);
            row.std_error = std::sqrt(ss / static_cast<double>(row.n - 1) / static_cast<double>(row.n));
        }
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        row.min = *lo;
        row.max = *hi;
        rows.push_back(row);
    }
    return rows;
}

std::vector<ComparisonRow> compare_agents(const std::vector<RunRecord>& records, AgentKind a, AgentKind b,
                                          bool by_probability) {
    std::map<double, std::pair<std::vector<double>, std::vector<double>>> by_p;
    std::pair<std::vector<double>, std::vector<double>> pooled;
    for (const RunRecord& r : records) {
        if (r.agent != a && r.agent != b) continue;
        auto& slot = by_probability ? by_p[r.probability] : pooled;
        (r.agent == a ? slot.first : slot.second).push_back(r.metric);
    }
    std::vector<ComparisonRow> rows;
    auto add = [&](std::optional<double> p, const auto& samples) {
        if (samples.first.size() < 2 || samples.second.size() < 2) return;
        rows.push_back({p, welch_t(samples.first, samples.second, to_string(a), to_string(b))});
    };
    if (by_probability) {
        for (const auto& [p, samples] : by_p) add(p, samples);
    } else {
        add(std::nullopt, pooled);
    }
    return rows;
}

// CSV

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    std::string s = buf;
    if (s == "-0") s = "0";
    return s;
}

namespace {

constexpr const char* kRecordHeader = "domain,agent,probability,episode,seed,metric,steps,outcome";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_real(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::runtime_error("line " + std::to_string(line_no) + ": '" + s + "' is not a number");
}

std::uint64_t parse_uint(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        if (!s.empty() && s[0] != '-') {
            const unsigned long long v = std::stoull(s, &used);
            if (used == s.size()) return v;
        }
    } catch (const std::exception&) {
    }
    throw std::runtime_error("line " + std::to_string(line_no) + ": '" + s + "' is not a non-negative integer");
}

}  // namespace

void write_records(std::ostream& os, const std::vector<RunRecord>& records) {
    os << kRecordHeader << '\n';
    for (const RunRecord& r : records) {
        os << to_string(r.domain) << ',' << to_string(r.agent) << ',' << format_real(r.probability) << ','
           << r.episode << ',' << r.seed << ',' << format_real(r.metric) << ',' << r.steps << ',' << r.outcome
           << '\n';
    }
}

std::vector<RunRecord> read_records(std::istream& is) {
    std::vector<RunRecord> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kRecordHeader) throw std::runtime_error("line " + std::to_string(line_no) + ": unexpected header");
            header_seen = true;
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 8) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 8 fields, got " +
                                     std::to_string(f.size()));
        }
        RunRecord r;
        const auto d = parse_domain(f[0]);
        const auto a = parse_agent(f[1]);
        if (!d) throw std::runtime_error("line " + std::to_string(line_no) + ": unknown domain '" + f[0] + "'");
        if (!a) throw std::runtime_error("line " + std::to_string(line_no) + ": unknown agent '" + f[1] + "'");
        r.domain = *d;
        r.agent = *a;
        r.probability = parse_real(f[2], line_no);
        r.episode = parse_uint(f[3], line_no);
        r.seed = parse_uint(f[4], line_no);
        r.metric = parse_real(f[5], line_no);
        r.steps = parse_uint(f[6], line_no);
        r.outcome = f[7];
        out.push_back(std::move(r));
    }
    if (!header_seen) throw std::runtime_error("missing header line");
    return out;
}

void write_comparisons(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << "# Welch two-sample t-test (unequal variances); p_value is two-tailed\n";
    os << "probability,group_a,group_b,n_a,n_b,mean_a,mean_b,t_statistic,df,p_value\n";
    for (const ComparisonRow& row : rows) {
        const TestReport& t = row.report;
        os << (row.probability ? format_real(*row.probability) : std::string("all")) << ',' << t.group_a << ','
           << t.group_b << ',' << t.n_a << ',' << t.n_b << ',' << format_real(t.mean_a) << ','
           << format_real(t.mean_b) << ',' << format_real(t.t_statistic) << ',' << format_real(t.df) << ','
           << format_real(t.p_value) << '\n';
    }
}

void write_aggregate(std::ostream& os, const std::vector<AggregateRow>& rows) {
    os << "domain,agent,probability,n,mean,stderr,min,max\n";
    for (const AggregateRow& r : rows) {
        os << to_string(r.domain) << ',' << to_string(r.agent) << ',' << format_real(r.probability) << ',' << r.n
           << ',' << format_real(r.mean) << ',' << format_real(r.std_error) << ',' << format_real(r.min) << ','
           << format_real(r.max) << '\n';
    }
}

void write_plot_data(std::ostream& os, const std::vector<AggregateRow>& rows) {
    std::vector<AggregateRow> series = rows;
    std::stable_sort(series.begin(), series.end(), [](const AggregateRow& x, const AggregateRow& y) {
        return std::tie(x.domain, x.agent, x.probability) < std::tie(y.domain, y.agent, y.probability);
    });
    os << "domain,agent,probability,mean,stderr\n";
    for (const AggregateRow& r : series) {
        os << to_string(r.domain) << ',' << to_string(r.agent) << ',' << format_real(r.probability) << ','
           << format_real(r.mean) << ',' << format_real(r.std_error) << '\n';
    }
}

}  // namespace htn::exp
