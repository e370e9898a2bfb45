#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crowds/bench.hpp"
#include "crowds/graph.hpp"
#include "crowds/observer.hpp"
#include "crowds/prune.hpp"
#include "crowds/report.hpp"
#include "crowds/version.hpp"

namespace {

crowds::TestimonialGraph load_graph(const std::string& path, bool directed, bool weighted) {
    std::ifstream in(path);
    if (!in) throw crowds::IoError("cannot open '" + path + "' for reading");
    return crowds::load_edge_list(in, directed, weighted);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw crowds::IoError("error writing to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw crowds::IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw crowds::IoError("error writing '" + path + "'");
}

crowds::Direction parse_direction(const std::string& name) {
    if (name == "out") return crowds::Direction::successors;
    if (name == "undirected") return crowds::Direction::neighbors;
    return crowds::Direction::predecessors;
}

crowds::PlotSpec::SortKey parse_sort_key(const std::string& name) {
    if (name == "s") return crowds::PlotSpec::SortKey::s;
    if (name == "d") return crowds::PlotSpec::SortKey::d;
    if (name == "node") return crowds::PlotSpec::SortKey::node;
    return crowds::PlotSpec::SortKey::pi;
}

struct ProfileArgs {
    std::string edges, attrs, out;
    bool undirected = false;
    bool unweighted = false;
    std::string direction = "in";
    int m_max = 5;
    int k_max = 5;
    int workers = 1;
};

int run_profile(const ProfileArgs& a, int verbosity) {
    auto graph = load_graph(a.edges, !a.undirected, !a.unweighted);
    if (!a.attrs.empty()) {
        std::ifstream in(a.attrs);
        if (!in) throw crowds::IoError("cannot open '" + a.attrs + "' for reading");
        std::vector<std::string> warnings;
        graph = crowds::load_attributes(graph, in, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << a.attrs << ": " << w << "\n";
    }
    if (verbosity >= 1)
        std::cerr << "loaded " << graph.node_count() << " nodes, " << graph.edge_count()
                  << " edges\n";

    crowds::ObserverParams params;
    params.m_max = a.m_max;
    params.k_max = a.k_max;
    params.direction = parse_direction(a.direction);
    const crowds::Crowd crowd(std::move(graph), params);

    const auto t0 = std::chrono::steady_clock::now();
    crowds::ProgressFn progress;
    if (verbosity >= 1) {
        progress = [&t0](std::size_t done, std::size_t total) {
            const std::size_t step = std::max<std::size_t>(1, total / 20);
            if (done % step != 0 && done != total) return;
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cerr << "profiled " << done << "/" << total << " nodes (" << secs << "s)\n";
        };
    }
    auto table = crowd.profile_all(a.workers, progress);
    table.graph_name = a.edges;
    if (verbosity >= 1) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "profile finished in " << secs << "s\n";
    }
    write_output(a.out, crowds::write_profile_csv(table));
    return 0;
}

struct PruneArgs {
    std::string edges, out;
    bool undirected = false;
    bool unweighted = false;
    int degree_threshold = 1;
    std::optional<double> weight_threshold;
};

int run_prune(const PruneArgs& a, int verbosity) {
    const auto graph = load_graph(a.edges, !a.undirected, !a.unweighted);
    crowds::PruneConfig config;
    config.degree_threshold = a.degree_threshold;
    config.weight_threshold = a.weight_threshold;
    const auto pruned = crowds::iteratively_prune(graph, config);
    if (pruned.node_count() == 0) std::cerr << "warning: pruning removed every node\n";
    if (verbosity >= 1)
        std::cerr << "pruned " << graph.node_count() << " -> " << pruned.node_count()
                  << " nodes, " << graph.edge_count() << " -> " << pruned.edge_count()
                  << " edges\n";

    std::ostringstream out;
    std::vector<std::string> warnings;
    crowds::write_edge_list(pruned, out, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    write_output(a.out, out.str());
    return 0;
}

struct PlotArgs {
    std::vector<std::string> inputs;
    std::string out, title;
    std::string sort = "pi";
    double width = 560.0;
    double height = 300.0;
    double y_max = 0.0;
};

int run_plot(const PlotArgs& a) {
    crowds::PlotSpec spec;
    spec.sort_key = parse_sort_key(a.sort);
    spec.panel_width = a.width;
    spec.panel_height = a.height;
    spec.y_max = a.y_max;

    std::vector<std::pair<std::string, crowds::ProfileTable>> panels;
    for (const auto& path : a.inputs) {
        std::ifstream in(path);
        if (!in) throw crowds::IoError("cannot open '" + path + "' for reading");
        panels.emplace_back(path, crowds::read_profile_csv(in));
    }
    std::string svg;
    if (panels.size() == 1)
        svg = crowds::render_sullivan_plot(panels[0].second, spec,
                                           a.title.empty() ? std::string_view{} : a.title);
    else
        svg = crowds::render_multi_panel(panels, spec);
    write_output(a.out, svg);
    return 0;
}

struct BenchArgs {
    std::vector<int> nodes;
    std::vector<double> probabilities;
    std::uint64_t seed = 0;
    int reps = 1;
    int workers = 1;
    bool parallel_cells = false;
    std::optional<double> budget;
    std::string out;
};

int run_bench(const BenchArgs& a, int verbosity) {
    crowds::BenchPlan plan;
    plan.node_counts = a.nodes;
    plan.edge_probabilities = a.probabilities;
    plan.seed = a.seed;
    plan.repetitions = a.reps;
    plan.workers = a.workers;
    plan.parallel_cells = a.parallel_cells;
    plan.per_cell_budget_seconds = a.budget;
    const auto rows = crowds::run_scaling_benchmark(plan, verbosity >= 1 ? &std::cerr : nullptr);
    write_output(a.out, crowds::write_timing_csv(rows));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"profiles the epistemic position of nodes in testimonial networks"};
    app.set_version_flag("--version", std::string(crowds::kVersion));
    app.require_subcommand(1);
    app.fallthrough(); // lets global flags like -v trail the subcommand
    int verbosity = 0;
    app.add_flag("-v,--verbose", verbosity, "print progress and diagnostics to stderr");

    ProfileArgs pa;
    auto* profile = app.add_subcommand("profile", "compute S, D, pi and h for every node");
    profile->add_option("edges", pa.edges, "edge-list file (u v [w] per line, # comments)")
        ->required();
    profile->add_option("--attrs", pa.attrs, "node attribute file (node,attr1;attr2 per line)");
    profile->add_option("--out", pa.out, "output CSV path (default: stdout)");
    profile->add_flag("--undirected", pa.undirected, "treat the edge list as undirected");
    profile->add_flag("--unweighted", pa.unweighted, "ignore weight columns");
    profile
        ->add_option("--direction", pa.direction,
                     "which neighbors count as sources (default: in)")
        ->check(CLI::IsMember({"in", "out", "undirected"}));
    profile->add_option("--m-max", pa.m_max, "separation bound (default 5)");
    profile->add_option("--k-max", pa.k_max, "source-count bound (default 5)");
    profile->add_option("--workers", pa.workers, "parallel workers (default 1)");

    PruneArgs ra;
    auto* prune = app.add_subcommand("prune", "iteratively reduce a graph to its stable core");
    prune->add_option("edges", ra.edges, "edge-list file")->required();
    prune->add_option("--out", ra.out, "output edge-list path (default: stdout)");
    prune->add_flag("--undirected", ra.undirected, "treat the edge list as undirected");
    prune->add_flag("--unweighted", ra.unweighted, "ignore weight columns");
    prune->add_option("--degree-threshold", ra.degree_threshold,
                      "drop nodes with indegree+outdegree <= this (default 1)");
    double weight_threshold = 0.0;
    auto* wt_opt = prune->add_option("--weight-threshold", weight_threshold,
                                     "drop edges with weight < this (default: keep all)");

    PlotArgs la;
    auto* plot = app.add_subcommand("plot", "render profile CSVs as an SVG summary plot");
    plot->add_option("profiles", la.inputs, "profile CSV files (one panel each)")
        ->required()
        ->expected(-1);
    plot->add_option("--out", la.out, "output SVG path (default: stdout)");
    plot->add_option("--title", la.title, "panel title (single-panel plots)");
    plot->add_option("--sort", la.sort, "bar sort key (default: pi)")
        ->check(CLI::IsMember({"pi", "s", "d", "node"}));
    plot->add_option("--width", la.width, "panel width in px (default 560)");
    plot->add_option("--height", la.height, "panel height in px (default 300)");
    plot->add_option("--y-max", la.y_max, "fixed log-axis top (default: from data)");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "time batch S computation on random digraphs");
    bench->add_option("--nodes", ba.nodes, "node counts, comma separated")
        ->required()
        ->delimiter(',');
    bench->add_option("--p", ba.probabilities, "edge probabilities, comma separated")
        ->required()
        ->delimiter(',');
    bench->add_option("--seed", ba.seed, "base PRNG seed (default 0)");
    bench->add_option("--reps", ba.reps, "repetitions per cell (default 1)");
    bench->add_option("--workers", ba.workers, "workers inside each cell (default 1)");
    bench->add_flag("--parallel-cells", ba.parallel_cells, "run cells concurrently");
    double budget = 0.0;
    auto* budget_opt =
        bench->add_option("--budget", budget, "per-cell budget in seconds; skip reps after");
    bench->add_option("--out", ba.out, "output CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    if (wt_opt->count() > 0) ra.weight_threshold = weight_threshold;
    if (budget_opt->count() > 0) ba.budget = budget;

    try {
        if (*profile) return run_profile(pa, verbosity);
        if (*prune) return run_prune(ra, verbosity);
        if (*plot) return run_plot(la);
        if (*bench) return run_bench(ba, verbosity);
    } catch (const crowds::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
