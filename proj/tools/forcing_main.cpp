// forcing: command-line driver for doubling constructions, densities,
// quasirandomness reports and the forcing experiments.
//
// Exit codes: 0 success, 2 validation error, 3 unsupported size,
// 4 non-convergence (experiment results are still written).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "forcing/density.hpp"
#include "forcing/errors.hpp"
#include "forcing/io.hpp"
#include "forcing/lab.hpp"
#include "forcing/quasirandom.hpp"
#include "forcing/sampling.hpp"

namespace fs = std::filesystem;
using namespace forcing;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitNotConverged = 4;

std::string format17(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

void emit(const Json& j, const std::string& out) {
    if (out.empty())
        std::cout << dump(j);
    else
        write_text_file(out, dump(j));
}

// A motif file may hold a plain graph or a colored one.
ColoredGraph load_colored(const std::string& path) { return colored_graph_from_json(read_json_file(path)); }

Graph load_motif_graph(const std::string& path) {
    const Json j = read_json_file(path);
    return j.contains("classes") ? colored_graph_from_json(j).graph() : graph_from_json(j);
}

struct DoublingArgs {
    std::optional<int> t;
    int k = 0;
    std::string motif, out;
};

int run_doubling(const DoublingArgs& a) {
    if (a.t.has_value() == !a.motif.empty()) throw InvalidArgument("doubling: give exactly one of --t and --motif");
    const ColoredGraph base = a.t ? complete_graph(*a.t) : load_colored(a.motif);
    if (a.k < 0 || a.k > base.class_count())
        throw InvalidArgument("doubling: --k must lie in [0, number of color classes]");
    const ColoredGraph doubled = iterated_double(base, a.k);
    std::cout << doubled.graph().vertex_count() << " vertices, " << doubled.graph().edge_count() << " edges\n";
    if (!a.out.empty()) write_text_file(a.out, dump(to_json(doubled)));
    return 0;
}

struct DensityArgs {
    std::string motif, graph, graphon, out;
    std::optional<int> kt;
    std::optional<int> doublings;
};

int run_density(const DensityArgs& a) {
    if (a.kt.has_value() == !a.motif.empty()) throw InvalidArgument("density: give exactly one of --motif and --kt");
    if (a.graph.empty() == a.graphon.empty()) throw InvalidArgument("density: give exactly one of --graph and --graphon");
    if (a.kt && (*a.kt < 1 || *a.kt > kMaxIsomorphismVertices))
        throw InvalidArgument("density: --kt must lie in [1, 32]");

    Json report;
    double value = 0.0;
    Graph motif(0, {});
    std::string method;
    try {
        if (a.doublings) {
            const ColoredGraph base = a.kt ? complete_graph(*a.kt) : load_colored(a.motif);
            if (*a.doublings < 0 || *a.doublings > base.class_count())
                throw InvalidArgument("density: --double must lie in [0, number of color classes]");
            motif = iterated_double(base, *a.doublings).graph();
            if (!a.graphon.empty()) {
                value = doubling_density(base, *a.doublings, graphon_from_json(read_json_file(a.graphon)));
                method = "doubling_density";
            }
        } else {
            motif = a.kt ? complete_graph(*a.kt).graph() : load_motif_graph(a.motif);
            if (!a.graphon.empty()) {
                value = graphon_density(motif, graphon_from_json(read_json_file(a.graphon)));
                method = "graphon_density";
            }
        }
        if (!a.graph.empty()) {
            value = hom_density(motif, graph_from_json(read_json_file(a.graph)));
            method = "hom_density";
        }
    } catch (const UnsupportedSize& e) {
        std::string hint;
        if (!a.graph.empty())
            hint = "the step graphon of the host (--graphon) with --double evaluates doubled motifs by recursion";
        else if (!a.doublings)
            hint = "for a doubled motif pass the base motif with --double K instead of the expanded graph";
        else
            hint = "use fewer parts or fewer doublings";
        throw UnsupportedSize(std::string(e.what()) + "; feasible alternative: " + hint);
    }

    std::cout << format17(value) << "\n";
    report["density"] = value;
    report["method"] = method;
    report["motif"] = {{"vertices", motif.vertex_count()}, {"edges", motif.edge_count()}};
    if (!a.out.empty()) write_text_file(a.out, dump(report));
    return 0;
}

struct QuasirandomArgs {
    std::string graph, out;
    double p = 0.5;
    QuasirandomOptions options;
};

int run_quasirandom(const QuasirandomArgs& a) {
    if (a.options.exact_max_n < 0 || a.options.exact_max_n > 30)
        throw InvalidArgument("quasirandom: --exact-max-n must lie in [0, 30]");
    if (a.options.random_starts < 0) throw InvalidArgument("quasirandom: --random-starts must be non-negative");
    const auto report = graph_quasirandomness(graph_from_json(read_json_file(a.graph)), a.p, a.options);
    std::cout << "deviation " << format17(report.deviation) << (report.exact ? " (exact)" : " (lower bound)")
              << ", witness size " << report.witness.size() << "\n";
    emit(to_json(report), a.out);
    return 0;
}

struct IdentityArgs {
    std::string graphon, out;
    double p = 0.5;
    int t = 3;
    std::optional<int> k;
    bool per_tuple = false;
};

int run_check_identity(const IdentityArgs& a) {
    const int k = a.k.value_or(default_doubling_count(a.t));
    const auto report = check_identity(graphon_from_json(read_json_file(a.graphon)), a.p, a.t, k, a.per_tuple);
    std::cout << "max_residual " << format17(report.max_residual) << " at (";
    for (std::size_t i = 0; i < report.argmax_tuple.size(); ++i)
        std::cout << (i ? "," : "") << report.argmax_tuple[i];
    std::cout << ")\n";
    emit(to_json(report), a.out);
    return 0;
}

struct ChainArgs {
    std::string graphon, out;
    int t = 3;
    std::optional<int> k;
};

int run_chain(const ChainArgs& a) {
    const auto record =
        cs_chain_check(a.t, a.k.value_or(default_doubling_count(a.t)), graphon_from_json(read_json_file(a.graphon)));
    for (std::size_t j = 0; j < record.steps.size(); ++j)
        std::cout << "step " << j + 1 << ": slack " << format17(record.steps[j].slack) << ", variance "
                  << format17(record.steps[j].variance) << "\n";
    std::cout << (record.holds ? "chain holds\n" : "chain violated\n");
    emit(to_json(record), a.out);
    return 0;
}

struct SampleArgs {
    int n = 1;
    std::optional<double> p;
    std::string graphon, out;
    std::uint64_t seed = 0;
};

int run_sample(const SampleArgs& a) {
    if (a.p.has_value() == !a.graphon.empty()) throw InvalidArgument("sample: give exactly one of --p and --graphon");
    SampleSpec spec;
    spec.n = a.n;
    spec.seed = a.seed;
    if (a.p)
        spec.source = *a.p;
    else
        spec.source = graphon_from_json(read_json_file(a.graphon));
    const Graph g = sample(spec);
    std::cout << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
    emit(to_json(g), a.out);
    return 0;
}

struct ExperimentArgs {
    std::string mode, out;
    ForcingOptions options;
    std::vector<double> deltas = ProbeOptions{}.deltas;
    int starts = ProbeOptions{}.starts;
};

int run_experiment(const ExperimentArgs& a) {
    if (a.out.empty()) throw InvalidArgument("experiment: --out DIR is required");
    const fs::path dir = a.out;
    fs::create_directories(dir);

    if (a.mode == "contrast") {
        const auto witness = contrast_witness();
        std::cout << "b = " << format17(witness.b) << ", t(K2) = " << format17(witness.edge_density)
                  << ", t(K3) = " << format17(witness.triangle_density) << ", linf = " << format17(witness.distance.linf)
                  << "\n";
        write_text_file(dir / "result.json", dump(to_json(witness)));
        return 0;
    }
    if (a.mode == "delta-eps") {
        ProbeOptions probe;
        probe.base = a.options;
        probe.deltas = a.deltas;
        probe.starts = a.starts;
        const auto rows = delta_epsilon_probe(probe);
        for (const auto& row : rows)
            std::cout << "delta " << format17(row.delta) << ": max l2 " << format17(row.max_l2) << "\n";
        write_text_file(dir / "result.json", dump(to_json(rows)));
        return 0;
    }

    const auto result = forcing_experiment(a.options);
    write_text_file(dir / "result.json", dump(to_json(result)));
    write_text_file(dir / "trials.csv", trials_csv(result));
    std::cout << result.summary.converged << "/" << result.trials.size() << " trials converged, max l2 "
              << format17(result.summary.max_l2) << ", max linf " << format17(result.summary.max_linf) << "\n";
    if (a.options.adversarial) {
        const auto at = distance_at_residual(result.frontier, 1e-8);
        std::cout << "frontier points " << result.frontier.size() << ", l2 at residual 1e-8: "
                  << (at ? format17(*at) : std::string("none")) << "\n";
    }
    if (result.summary.converged < static_cast<int>(result.trials.size())) {
        std::cerr << "forcing: " << result.trials.size() - result.summary.converged
                  << " trial(s) did not reach the tolerance; results written\n";
        return kExitNotConverged;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Doubling constructions, homomorphism densities and forcing experiments"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    DoublingArgs doubling;
    auto* cmd_doubling = app.add_subcommand("doubling", "Build T_k(K_t) or the k-fold doubling of a colored motif");
    cmd_doubling->add_option("--t", doubling.t, "Clique size t (the motif is K_t with singleton classes)")
        ->check(CLI::Range(1, kMaxIsomorphismVertices));
    cmd_doubling->add_option("--k", doubling.k, "Number of doublings (classes 1..k in order)")->required();
    cmd_doubling->add_option("--motif", doubling.motif, "ColoredGraph JSON file to double instead of K_t")
        ->check(CLI::ExistingFile);
    cmd_doubling->add_option("--out", doubling.out, "Write the doubled ColoredGraph JSON here");

    DensityArgs density;
    auto* cmd_density = app.add_subcommand("density", "Homomorphism density of a motif in a graph or step graphon");
    cmd_density->add_option("--motif", density.motif, "Graph or ColoredGraph JSON motif")->check(CLI::ExistingFile);
    cmd_density->add_option("--kt", density.kt, "Use K_T as the motif");
    cmd_density->add_option("--double", density.doublings, "Double the motif's first K classes");
    cmd_density->add_option("--graph", density.graph, "Host graph JSON")->check(CLI::ExistingFile);
    cmd_density->add_option("--graphon", density.graphon, "Host step graphon JSON")->check(CLI::ExistingFile);
    cmd_density->add_option("--out", density.out, "Write a JSON report here");

    QuasirandomArgs quasi;
    auto* cmd_quasi = app.add_subcommand("quasirandom", "Largest subset edge-count deviation from p");
    cmd_quasi->add_option("--graph", quasi.graph, "Graph JSON")->required()->check(CLI::ExistingFile);
    cmd_quasi->add_option("--p", quasi.p, "Edge probability p in (0, 1]")->required();
    cmd_quasi->add_option("--exact-max-n", quasi.options.exact_max_n, "Enumerate all subsets up to this many vertices")
        ->capture_default_str();
    cmd_quasi->add_option("--random-starts", quasi.options.random_starts, "Random local-search starts")
        ->capture_default_str();
    cmd_quasi->add_option("--seed", quasi.options.seed, "Seed for the random starts")->capture_default_str();
    cmd_quasi->add_option("--out", quasi.out, "Write the report here (default: stdout)");

    IdentityArgs identity;
    auto* cmd_identity = app.add_subcommand("check-identity", "Pointwise clique identity residuals over part tuples");
    cmd_identity->add_option("--graphon", identity.graphon, "Step graphon JSON")->required()->check(CLI::ExistingFile);
    cmd_identity->add_option("--p", identity.p, "Target edge density p")->required();
    cmd_identity->add_option("--t", identity.t, "Clique size t in [3, 6]")->required();
    cmd_identity->add_option("--k", identity.k, "Pinned vertices (default ceil((t+1)/2))");
    cmd_identity->add_flag("--per-tuple", identity.per_tuple, "Include every tuple in the report");
    cmd_identity->add_option("--out", identity.out, "Write the report here (default: stdout)");

    ChainArgs chain;
    auto* cmd_chain = app.add_subcommand("chain", "Cauchy-Schwarz chain d_j >= d_{j-1}^2 along the doublings of K_t");
    cmd_chain->add_option("--graphon", chain.graphon, "Step graphon JSON")->required()->check(CLI::ExistingFile);
    cmd_chain->add_option("--t", chain.t, "Clique size t")->required();
    cmd_chain->add_option("--k", chain.k, "Number of doublings (default ceil((t+1)/2))");
    cmd_chain->add_option("--out", chain.out, "Write the record here (default: stdout)");

    SampleArgs sampling;
    auto* cmd_sample = app.add_subcommand("sample", "G(n, p) or W-random graph");
    cmd_sample->add_option("--n", sampling.n, "Vertex count")->required();
    cmd_sample->add_option("--p", sampling.p, "Edge probability");
    cmd_sample->add_option("--graphon", sampling.graphon, "Step graphon JSON")->check(CLI::ExistingFile);
    cmd_sample->add_option("--seed", sampling.seed, "Seed")->capture_default_str();
    cmd_sample->add_option("--out", sampling.out, "Write the graph JSON here (default: stdout)");

    ExperimentArgs experiment;
    auto& eo = experiment.options;
    auto* cmd_exp = app.add_subcommand("experiment", "Forcing stress test, delta-epsilon probe or the (K2, K3) contrast");
    cmd_exp->add_option("mode", experiment.mode, "forcing | delta-eps | contrast")
        ->required()
        ->check(CLI::IsMember({"forcing", "delta-eps", "contrast"}));
    cmd_exp->add_option("--t", eo.t, "Clique size t in [2, 5]")->capture_default_str();
    cmd_exp->add_option("--k", eo.k, "Doublings (default ceil((t+1)/2))");
    cmd_exp->add_option("--p", eo.p, "Target edge density")->capture_default_str();
    cmd_exp->add_option("--parts", eo.parts, "Parts of the step graphons (at most 8)")->capture_default_str();
    cmd_exp->add_option("--trials", eo.trials, "Number of seeded trials")->capture_default_str();
    cmd_exp->add_option("--seed", eo.seed, "Base seed; trial i uses seed + i")->capture_default_str();
    cmd_exp->add_option("--tol", eo.tol, "Converged when r1^2 + r2^2 <= tol^2")->capture_default_str();
    cmd_exp->add_option("--max-iterations", eo.max_iterations, "Optimizer iteration cap")->capture_default_str();
    cmd_exp->add_option("--perturbation", eo.perturbation, "Start entries p + U(-a, a)")->capture_default_str();
    cmd_exp->add_option("--threads", eo.threads, "Worker threads")->capture_default_str();
    cmd_exp->add_flag("--adversarial", eo.adversarial, "Also trace the distance-vs-residual Pareto frontier");
    cmd_exp->add_option("--starts", experiment.starts, "Starts per delta (delta-eps)")->capture_default_str();
    cmd_exp->add_option("--deltas", experiment.deltas, "Relative tolerances (delta-eps)")->delimiter(',');
    cmd_exp->add_option("--out", experiment.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*cmd_doubling) return run_doubling(doubling);
        if (*cmd_density) return run_density(density);
        if (*cmd_quasi) return run_quasirandom(quasi);
        if (*cmd_identity) return run_check_identity(identity);
        if (*cmd_chain) return run_chain(chain);
        if (*cmd_sample) return run_sample(sampling);
        if (*cmd_exp) return run_experiment(experiment);
    } catch (const InvalidArgument& e) {
        std::cerr << "forcing: invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const UnsupportedSize& e) {
        std::cerr << "forcing: unsupported size: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const std::exception& e) {
        std::cerr << "forcing: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
