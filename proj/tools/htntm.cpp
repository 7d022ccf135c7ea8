// Command-line front end for the experiment harness.
//
//   htntm run --domain rainy-grid --agent tm --probs 0.1,0.5 --episodes 500 --seed 1 --out results.csv
//   htntm stats --in results.csv --in base.csv --group-a tm --group-b baseline1 --by-prob --out tests.csv
//   htntm plot-data --in results.csv --out series.csv

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "experiment/harness.hpp"

namespace {

using namespace htn::exp;

// Writes to `path`, or stdout for "-" / empty.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    fn(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<RunRecord> load_all(const std::vector<std::string>& paths) {
    std::vector<RunRecord> all;
    for (const std::string& p : paths) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open '" + p + "'");
        try {
            auto recs = read_records(in);
            all.insert(all.end(), recs.begin(), recs.end());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(p + ": " + e.what());
        }
    }
    return all;
}

std::vector<double> parse_probs(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size()) throw CLI::ValidationError("--probs", "'" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw CLI::ValidationError("--probs", "needs at least one value");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HTN acting with task modifiers: experiment runner"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run a sweep of episodes and write one CSV row per episode");
    std::string domain_name;
    std::string agent_name;
    std::string probs = "";
    std::size_t episodes = 0;
    std::uint64_t seed = 0;
    std::size_t step_cap = 10'000;
    unsigned jobs = 0;
    std::string run_out;
    double p_assumed = 0.5;
    std::string cost_model = "published";
    run->add_option("--domain", domain_name, "rainy-grid | minefield")->required();
    run->add_option("--agent", agent_name, "tm | baseline1 | baseline2 (rainy-grid); tm | none | random (minefield)")
        ->required();
    run->add_option("--probs", probs, "Comma-separated probabilities (rain or mine drop)")->required();
    run->add_option("--episodes", episodes, "Episodes per probability (default 500 rainy-grid, 50 minefield)")
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Base seed")->capture_default_str();
    run->add_option("--step-cap", step_cap, "Per-episode action/tick budget")->capture_default_str();
    run->add_option("--jobs", jobs, "Worker threads, 0 = all cores")->capture_default_str();
    run->add_option("--out", run_out, "Output CSV (default stdout)");
    run->add_option("--p-assumed", p_assumed, "Rainy Grid TM: assumed rain probability")->capture_default_str();
    run->add_option("--cost-model", cost_model, "Rainy Grid TM: published | reward-derived")->capture_default_str();

    // stats
    auto* stats = app.add_subcommand("stats", "Welch t-tests between two agents");
    std::vector<std::string> stats_in;
    std::string group_a;
    std::string group_b;
    bool by_prob = false;
    std::string stats_out;
    stats->add_option("--in", stats_in, "Result CSV(s)")->required();
    stats->add_option("--group-a", group_a, "First agent")->required();
    stats->add_option("--group-b", group_b, "Second agent")->required();
    stats->add_flag("--by-prob", by_prob, "One test per probability instead of pooling");
    stats->add_option("--out", stats_out, "Output CSV (default stdout)");

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "Per-agent (probability, mean, stderr) series");
    std::vector<std::string> plot_in;
    std::string plot_out;
    bool full_table = false;
    plot->add_option("--in", plot_in, "Result CSV(s)")->required();
    plot->add_option("--out", plot_out, "Output CSV (default stdout)");
    plot->add_flag("--table", full_table, "Also emit n, min and max per point");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            SweepSpec spec;
            const auto d = parse_domain(domain_name);
            if (!d) throw CLI::ValidationError("--domain", "unknown domain '" + domain_name + "'");
            const auto a = parse_agent(agent_name);
            if (!a) throw CLI::ValidationError("--agent", "unknown agent '" + agent_name + "'");
            const auto cm = htn::rainy::parse_cost_model(cost_model);
            if (!cm) throw CLI::ValidationError("--cost-model", "unknown cost model '" + cost_model + "'");
            spec.domain = *d;
            spec.agent = *a;
            spec.probabilities = parse_probs(probs);
            spec.episodes_per_point = episodes != 0 ? episodes : (*d == DomainKind::rainy_grid ? 500 : 50);
            spec.base_seed = seed;
            spec.step_cap = step_cap;
            spec.jobs = jobs;
            spec.rainy_tm.p_assumed = p_assumed;
            spec.rainy_tm.cost_model = *cm;
            validate(spec);
            const auto records = run_sweep(spec);
            with_output(run_out, [&](std::ostream& os) { write_records(os, records); });
        } else if (*stats) {
            const auto a = parse_agent(group_a);
            if (!a) throw CLI::ValidationError("--group-a", "unknown agent '" + group_a + "'");
            const auto b = parse_agent(group_b);
            if (!b) throw CLI::ValidationError("--group-b", "unknown agent '" + group_b + "'");
            const auto rows = compare_agents(load_all(stats_in), *a, *b, by_prob);
            if (rows.empty()) throw std::runtime_error("no probability has at least two episodes for both agents");
            with_output(stats_out, [&](std::ostream& os) { write_comparisons(os, rows); });
        } else if (*plot) {
            const auto rows = aggregate(load_all(plot_in));
            with_output(plot_out, [&](std::ostream& os) {
                if (full_table) {
                    write_aggregate(os, rows);
                } else {
                    write_plot_data(os, rows);
                }
            });
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "htntm: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
