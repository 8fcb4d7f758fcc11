#include "ici/community.h"
#include "ici/graph.h"
#include "ici/harness.h"
#include "ici/netgen.h"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace
{

constexpr int exit_config = 2;
constexpr int exit_io = 3;

struct RunOptions {
    std::string preset;
    std::string config;
    std::string profile;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> steps;
    std::optional<std::size_t> workers;
    std::optional<std::size_t> window;
    std::string out;
    bool quiet = false;
};

struct GraphOptions {
    ici::NetGenConfig netgen;
    std::uint64_t seed = 1;
    std::string out;
    std::string in;
};

int run_command(const RunOptions& o)
{
    using namespace ici::harness;
    Settings s;
    s.workers = std::max(1u, std::thread::hardware_concurrency());
    if (!o.config.empty()) {
        load_config(o.config, s);
    }
    if (!o.profile.empty()) {
        s.profile = parse_profile(o.profile);
    }
    if (o.seed) {
        s.seed = *o.seed;
    }
    if (o.runs) {
        s.runs = *o.runs;
    }
    if (o.steps) {
        s.steps = *o.steps;
    }
    if (o.workers) {
        s.workers = std::max<std::size_t>(1, *o.workers);
    }
    if (o.window) {
        s.window = *o.window;
    }

    const Preset preset = make_preset(o.preset, s);
    Progress progress;
    if (!o.quiet) {
        progress = [](std::size_t done, std::size_t total) {
            std::cerr << "\r" << done << "/" << total << " runs" << (done == total ? "\n" : "") << std::flush;
        };
    }
    const auto rows = run_preset(preset, s, progress);
    if (o.out.empty() || o.out == "-") {
        write_csv(std::cout, rows);
    }
    else {
        write_csv(o.out, rows);
        std::cerr << "wrote " << rows.size() << " rows to " << o.out << "\n";
    }
    return 0;
}

int list_command()
{
    ici::harness::Settings s;
    for (std::string_view id : ici::harness::preset_ids()) {
        const auto p = ici::harness::make_preset(id, s);
        std::cout << id << ": " << p.description << "\n";
        for (const auto& plot : p.plots) {
            std::cout << "  " << plot.title << ": param vs";
            for (auto c : plot.columns) {
                std::cout << " " << c;
            }
            std::cout << "\n";
        }
    }
    return 0;
}

int graph_gen(const GraphOptions& o)
{
    try {
        o.netgen.validate();
    }
    catch (const std::invalid_argument& e) {
        throw ici::harness::ConfigError(e.what());
    }
    const ici::SocialGraph g = ici::generate_network(o.netgen, o.seed);
    if (o.out.empty() || o.out == "-") {
        ici::write_edge_list(std::cout, g);
        return 0;
    }
    std::ofstream out(o.out);
    if (!out) {
        throw ici::harness::IoError("cannot write " + o.out);
    }
    ici::write_edge_list(out, g);
    if (!out.flush()) {
        throw ici::harness::IoError("error while writing " + o.out);
    }
    return 0;
}

int graph_stats(const GraphOptions& o)
{
    ici::SocialGraph g(0);
    if (o.in.empty() || o.in == "-") {
        g = ici::read_edge_list(std::cin);
    }
    else {
        std::ifstream in(o.in);
        if (!in) {
            throw ici::harness::IoError("cannot read " + o.in);
        }
        g = ici::read_edge_list(in);
    }
    const auto nodes = g.nodes();
    std::size_t max_degree = 0;
    std::size_t close = 0;
    for (ici::UserId u : nodes) {
        max_degree = std::max(max_degree, g.degree(u));
    }
    for (const ici::Edge& e : g.edges()) {
        close += g.is_close(e.u, e.v);
    }
    const double mean = nodes.empty() ? 0.0 : 2.0 * static_cast<double>(g.edge_count()) / nodes.size();
    std::cout << "users " << nodes.size() << "\n"
              << "edges " << g.edge_count() << "\n"
              << "close_trusted " << close << "\n"
              << "mean_degree " << mean << "\n"
              << "max_degree " << max_degree << "\n"
              << "components " << ici::component_count(g) << "\n";
    if (g.edge_count() > 0) {
        std::cout << "communities " << ici::detect(g, o.seed).size() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Contextual-integrity assistant simulator"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment preset and write its CSV");
    run_cmd->add_option("preset", run.preset, "Preset id (E1..E7 or full name)")->required();
    run_cmd->add_option("--config", run.config, "INI file with [sim], [mix] and [run] sections");
    run_cmd->add_option("--profile", run.profile, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
    run_cmd->add_option("--seed", run.seed, "Base seed");
    run_cmd->add_option("--runs", run.runs, "Runs per grid point");
    run_cmd->add_option("--steps", run.steps, "Steps per run");
    run_cmd->add_option("--workers", run.workers, "Worker threads");
    run_cmd->add_option("--window", run.window, "Steps per window for step-series presets");
    run_cmd->add_option("--out", run.out, "Output CSV path (default stdout)");
    run_cmd->add_flag("--quiet", run.quiet, "No progress output");

    app.add_subcommand("list", "List presets and their plots");

    GraphOptions graph;
    auto* graph_cmd = app.add_subcommand("graph", "Network utilities");
    graph_cmd->require_subcommand(1);
    auto* gen = graph_cmd->add_subcommand("gen", "Generate a preferential-attachment network edge list");
    gen->add_option("--users", graph.netgen.users, "Number of users");
    gen->add_option("--edges-per-node", graph.netgen.edges_per_node, "Links per new user");
    gen->add_option("--close-ratio", graph.netgen.close_trusted_ratio, "Share of close/trusted edges");
    gen->add_option("--seed", graph.seed, "Seed");
    gen->add_option("--out", graph.out, "Output path (default stdout)");
    auto* stats = graph_cmd->add_subcommand("stats", "Summarize an edge list");
    stats->add_option("file", graph.in, "Edge list (default stdin)");
    stats->add_option("--seed", graph.seed, "Community detection seed");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*run_cmd) {
            return run_command(run);
        }
        if (app.got_subcommand("list")) {
            return list_command();
        }
        if (*gen) {
            return graph_gen(graph);
        }
        return graph_stats(graph);
    }
    catch (const ici::harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const ici::harness::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_io;
    }
    catch (const std::runtime_error& e) {
        // Malformed edge lists surface here.
        std::cerr << "input error: " << e.what() << "\n";
        return exit_io;
    }
}
