// anonet command-line front end.
//
//   anonet anonymize --graph G --algo {ga|uga|es|ua} [--preset P | --config F]
//                    [--gamma-frac 0.05] [--runs 5] [--seed S] [--jobs J]
//                    [--batches 100] --out results.json
//   anonet utility   --graph G --deleted run.edges [--seed S] [--out report.json]
//   anonet tune      --graph G [--sample 50] [--epoch-gens 10] [--seed S]
//                    [--pin ID ...] [--jobs J] --out halving.csv
//   anonet compare   results_a.json results_b.json ... [--out table.csv]
//
// Every command exits 0 on success and 1 with a message on stderr otherwise.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anonet/anonymity.hpp"
#include "anonet/artifacts.hpp"
#include "anonet/baselines.hpp"
#include "anonet/config_io.hpp"
#include "anonet/evolution.hpp"
#include "anonet/graph.hpp"
#include "anonet/tuning.hpp"
#include "anonet/utility.hpp"

namespace {

anonet::LoadedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    try {
        return anonet::load_edge_list(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

anonet::GaConfig load_ga_config(const std::string& config_path, const std::string& preset_name) {
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open config file: " + config_path);
        try {
            return anonet::parse_config(in);
        } catch (const std::exception& e) {
            throw std::runtime_error(config_path + ": " + e.what());
        }
    }
    return anonet::preset(preset_name);
}

std::filesystem::path run_edges_path(const std::filesystem::path& out, std::uint32_t run) {
    std::filesystem::path p = out.parent_path();
    return p / (out.stem().string() + "_run" + std::to_string(run) + ".edges");
}

int cmd_anonymize(const std::string& graph_path, const std::string& algo,
                  const std::string& config_path, const std::string& preset_name,
                  double gamma_frac, bool gamma_frac_given, std::uint32_t runs,
                  std::uint64_t seed, std::uint32_t jobs, std::uint32_t batches,
                  const std::string& out_path) {
    const anonet::LoadedGraph loaded = load_graph(graph_path);
    const anonet::Graph& g = loaded.graph;
    const bool evolutionary = (algo == "ga" || algo == "uga");

    anonet::GaConfig cfg;
    if (evolutionary) {
        if (config_path.empty() && preset_name.empty())
            throw std::runtime_error("--algo " + algo + " requires --config or --preset");
        cfg = load_ga_config(config_path, preset_name);
        if (gamma_frac_given) cfg.gamma_frac = gamma_frac;
        cfg.gamma.reset();  // the budget always comes from the fraction here
        cfg.uniqueness_aware = (algo == "uga");
    } else if (!config_path.empty() || !preset_name.empty()) {
        throw std::runtime_error("--config/--preset only apply to --algo ga or uga");
    }
    const double frac = evolutionary ? cfg.gamma_frac : gamma_frac;
    const std::uint32_t gamma = anonet::budget(g.edge_count(), frac);
    const std::uint32_t unique_before = anonet::AnonymityView(g).unique_count();

    anonet::ResultsDocument doc;
    doc.graph_path = graph_path;
    doc.algorithm = algo;
    doc.node_count = g.node_count();
    doc.edge_count = g.edge_count();
    doc.gamma = gamma;
    doc.gamma_frac = frac;
    doc.batches = evolutionary ? 0 : batches;
    doc.runs.resize(runs);

    const std::filesystem::path out(out_path);
    std::vector<std::uint32_t> run_ids(runs);
    for (std::uint32_t i = 0; i < runs; ++i) run_ids[i] = i;

    anonet::detail::parallel_for_each(run_ids, jobs, [&](std::uint32_t i) {
        const std::uint64_t run_seed = seed + i;
        anonet::RunRecord rec;
        rec.seed = run_seed;
        std::vector<anonet::EdgeId> order;
        if (evolutionary) {
            anonet::GaConfig run_cfg = cfg;
            run_cfg.seed = run_seed;
            const anonet::RunResult rr = anonet::run_ga(g, run_cfg);
            rec.best_f = rr.best_f;
            rec.unique_before = unique_before;
            rec.unique_after = rr.best_unique;
            rec.deletions = rr.best_bits.count();
            rec.generations = rr.generations;
            rec.wall_time = rr.wall_time;
            rec.trajectory = rr.trajectory;
            order = anonet::edge_ids_from_bits(rr.best_bits);
        } else {
            const auto started = std::chrono::steady_clock::now();
            const anonet::BaselineTrace trace =
                algo == "es" ? anonet::edge_sampling(g, gamma, batches, run_seed)
                             : anonet::unique_affect_greedy(g, gamma, batches, run_seed);
            rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                          started)
                                .count();
            rec.unique_before = trace.uniqueness_curve.front();
            rec.unique_after = trace.uniqueness_curve.back();
            rec.best_f = rec.unique_after;  // full budget spent, so no penalty term
            rec.deletions = static_cast<std::uint32_t>(trace.deleted.size());
            rec.generations = 0;
            rec.trajectory.assign(trace.uniqueness_curve.begin(), trace.uniqueness_curve.end());
            order = trace.deleted;
        }
        const std::filesystem::path edges = run_edges_path(out, i);
        anonet::write_file_atomic(edges, anonet::deleted_edges_text(g, loaded.labels, order));
        rec.deleted_edges_file = edges.filename().string();
        doc.runs[i] = std::move(rec);
    });

    anonet::save_results(out, doc);
    const auto [mean, sd] = anonet::mean_std(doc.reductions());
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << algo << ": reduction " << mean << " ± " << sd << " (|V_u| " << unique_before
         << " -> mean " << (static_cast<double>(unique_before) - mean) << ", " << runs
         << (runs == 1 ? " run" : " runs") << ", gamma " << gamma << ")";
    std::cout << line.str() << "\n";
    std::cerr << "wrote " << out_path << " and " << runs << " deleted-edge file"
              << (runs == 1 ? "" : "s") << "\n";
    return 0;
}

int cmd_utility(const std::string& graph_path, const std::string& deleted_path,
                std::uint64_t seed, const std::string& out_path) {
    const anonet::LoadedGraph loaded = load_graph(graph_path);
    const anonet::Graph& g = loaded.graph;
    std::ifstream in(deleted_path);
    if (!in) throw std::runtime_error("cannot open deleted-edge file: " + deleted_path);
    const std::vector<bool> mask = anonet::read_deleted_edges(in, g, loaded.labels);

    const anonet::UtilityReport report = anonet::utility_report(g, mask, seed);
    const std::string text = anonet::utility_report_to_json(report).dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        anonet::write_file_atomic(out_path, text);
        std::cout << text;
    }

    std::size_t deleted = 0;
    for (const bool b : mask) deleted += b ? 1 : 0;
    const std::uint32_t before = anonet::AnonymityView(g).unique_count();
    const anonet::Graph anon = anonet::delete_edges(g, mask);
    const std::uint32_t after = anonet::AnonymityView(anon).unique_count();
    std::cerr << "deleted " << deleted << " of " << g.edge_count() << " edges; |V_u| " << before
              << " -> " << after << "\n";
    return 0;
}

int cmd_tune(const std::string& graph_path, std::uint32_t sample, std::uint32_t epoch_gens,
             std::uint64_t seed, const std::vector<std::uint32_t>& pinned, std::uint32_t jobs,
             const std::string& out_path) {
    const anonet::LoadedGraph loaded = load_graph(graph_path);
    const std::vector<anonet::GaConfig> grid = anonet::enumerate_grid();
    const anonet::HalvingTrace trace =
        anonet::successive_halving(loaded.graph, grid, sample, epoch_gens, seed, pinned, jobs);

    std::ostringstream csv;
    anonet::write_halving_csv(trace, csv);
    anonet::write_file_atomic(out_path, csv.str());

    std::cout << "epochs: " << trace.survivors.size() << "\n";
    std::cout << "survivors:";
    for (const std::uint32_t id : trace.survivors.back()) std::cout << " " << id;
    std::cout << "\n";
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int cmd_compare(const std::vector<std::string>& result_paths, const std::string& out_path) {
    std::vector<anonet::ResultsDocument> docs;
    docs.reserve(result_paths.size());
    for (const auto& path : result_paths) docs.push_back(anonet::load_results(path));
    const anonet::ComparisonTable table = anonet::build_comparison(std::move(docs));

    std::ostringstream csv;
    anonet::write_comparison_csv(table, csv);
    std::cout << csv.str();
    if (!out_path.empty()) anonet::write_file_atomic(out_path, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"edge-deletion anonymization of undirected social networks"};
    app.require_subcommand(1);

    std::string graph_path;
    std::string algo;
    std::string config_path;
    std::string preset_name;
    double gamma_frac = 0.05;
    std::uint32_t runs = 5;
    std::uint64_t seed = 1;
    std::uint32_t jobs = 1;
    std::uint32_t batches = 100;
    std::string out_path;
    std::string deleted_path;
    std::uint32_t sample = 50;
    std::uint32_t epoch_gens = 10;
    std::vector<std::uint32_t> pinned;
    std::vector<std::string> result_paths;

    auto* anonymize = app.add_subcommand("anonymize", "delete edges to shrink the unique set");
    anonymize->add_option("--graph", graph_path, "edge-list file")->required();
    anonymize->add_option("--algo", algo, "ga, uga, es, or ua")
        ->required()
        ->check(CLI::IsMember({"ga", "uga", "es", "ua"}));
    auto* config_opt = anonymize->add_option("--config", config_path, "GA config file");
    auto* preset_opt =
        anonymize->add_option("--preset", preset_name, "named GA config")
            ->check(CLI::IsMember(anonet::preset_names()));
    config_opt->excludes(preset_opt);
    preset_opt->excludes(config_opt);
    auto* gamma_opt = anonymize->add_option("--gamma-frac", gamma_frac,
                                            "deletion budget as a fraction of |E| (default 0.05)");
    anonymize->add_option("--runs", runs, "independent runs (default 5)")
        ->check(CLI::PositiveNumber);
    anonymize->add_option("--seed", seed, "root seed; run i uses seed+i (default 1)");
    anonymize->add_option("--jobs", jobs, "parallel runs (default 1)")->check(CLI::PositiveNumber);
    anonymize->add_option("--batches", batches,
                          "uniqueness-curve batches for es/ua (default 100)")
        ->check(CLI::PositiveNumber);
    anonymize->add_option("--out", out_path, "results JSON path")->required();

    auto* utility = app.add_subcommand("utility", "measure distortion of a deletion set");
    utility->add_option("--graph", graph_path, "edge-list file")->required();
    utility->add_option("--deleted", deleted_path, "deleted-edge list from a run")->required();
    utility->add_option("--seed", seed, "consensus clustering seed (default 1)");
    utility->add_option("--out", out_path, "report JSON path (default: stdout only)");

    auto* tune = app.add_subcommand("tune", "successive-halving sweep over the config grid");
    tune->add_option("--graph", graph_path, "edge-list file")->required();
    tune->add_option("--sample", sample, "configs sampled from the grid (default 50)")
        ->check(CLI::PositiveNumber);
    tune->add_option("--epoch-gens", epoch_gens, "generations per halving epoch (default 10)")
        ->check(CLI::PositiveNumber);
    tune->add_option("--seed", seed, "sweep seed (default 1)");
    tune->add_option("--pin", pinned, "grid config ids forced into the sample");
    tune->add_option("--jobs", jobs, "parallel engines (default 1)")->check(CLI::PositiveNumber);
    tune->add_option("--out", out_path, "halving CSV path")->required();

    auto* compare = app.add_subcommand("compare", "cross-algorithm reduction table");
    compare->add_option("results", result_paths, "results JSON files (two or more)")
        ->required()
        ->expected(2, -1);
    compare->add_option("--out", out_path, "also write the CSV here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(anonymize))
            return cmd_anonymize(graph_path, algo, config_path, preset_name, gamma_frac,
                                 gamma_opt->count() > 0, runs, seed, jobs, batches, out_path);
        if (app.got_subcommand(utility)) return cmd_utility(graph_path, deleted_path, seed, out_path);
        if (app.got_subcommand(tune))
            return cmd_tune(graph_path, sample, epoch_gens, seed, pinned, jobs, out_path);
        if (app.got_subcommand(compare)) return cmd_compare(result_paths, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
