#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "anonet/bitstring.hpp"
#include "anonet/graph.hpp"
#include "anonet/stats.hpp"
#include "anonet/utility.hpp"

namespace anonet {

// One seeded run of any of the four algorithms. For the baselines,
// `generations` is 0 and `trajectory` holds the per-batch |V_u| curve; for the
// GA variants it holds best_f per generation.
struct RunRecord {
    std::uint64_t seed = 0;
    std::int64_t best_f = 0;
    std::uint32_t unique_before = 0;
    std::uint32_t unique_after = 0;
    std::uint32_t deletions = 0;
    std::uint32_t generations = 0;
    double wall_time = 0.0;
    std::vector<std::int64_t> trajectory;
    std::string deleted_edges_file;

    bool operator==(const RunRecord&) const = default;

    double reduction() const {
        return static_cast<double>(static_cast<std::int64_t>(unique_before) -
                                   static_cast<std::int64_t>(unique_after));
    }
};

struct ResultsDocument {
    std::string graph_path;
    std::string algorithm;  // es, ua, ga, uga
    std::uint32_t node_count = 0;
    std::uint32_t edge_count = 0;
    std::uint32_t gamma = 0;
    double gamma_frac = 0.0;
    std::uint32_t batches = 0;  // baselines only; 0 for the GA variants
    std::vector<RunRecord> runs;

    bool operator==(const ResultsDocument&) const = default;

    std::vector<double> reductions() const {
        std::vector<double> r;
        r.reserve(runs.size());
        for (const auto& run : runs) r.push_back(run.reduction());
        return r;
    }
};

inline nlohmann::json results_to_json(const ResultsDocument& doc) {
    nlohmann::json j;
    j["graph"] = doc.graph_path;
    j["algorithm"] = doc.algorithm;
    j["node_count"] = doc.node_count;
    j["edge_count"] = doc.edge_count;
    j["gamma"] = doc.gamma;
    j["gamma_frac"] = doc.gamma_frac;
    j["batches"] = doc.batches;
    j["runs"] = nlohmann::json::array();
    for (const auto& run : doc.runs) {
        nlohmann::json r;
        r["seed"] = run.seed;
        r["best_f"] = run.best_f;
        r["unique_before"] = run.unique_before;
        r["unique_after"] = run.unique_after;
        r["deletions"] = run.deletions;
        r["generations"] = run.generations;
        r["wall_time"] = run.wall_time;
        r["trajectory"] = run.trajectory;
        r["deleted_edges_file"] = run.deleted_edges_file;
        j["runs"].push_back(std::move(r));
    }
    if (!doc.runs.empty()) {
        const auto [mean, sd] = mean_std(doc.reductions());
        j["summary"] = {{"reduction_mean", mean}, {"reduction_std", sd}};
    }
    return j;
}

inline ResultsDocument results_from_json(const nlohmann::json& j) {
    ResultsDocument doc;
    doc.graph_path = j.at("graph").get<std::string>();
    doc.algorithm = j.at("algorithm").get<std::string>();
    doc.node_count = j.at("node_count").get<std::uint32_t>();
    doc.edge_count = j.at("edge_count").get<std::uint32_t>();
    doc.gamma = j.at("gamma").get<std::uint32_t>();
    doc.gamma_frac = j.at("gamma_frac").get<double>();
    doc.batches = j.at("batches").get<std::uint32_t>();
    for (const auto& r : j.at("runs")) {
        RunRecord run;
        run.seed = r.at("seed").get<std::uint64_t>();
        run.best_f = r.at("best_f").get<std::int64_t>();
        run.unique_before = r.at("unique_before").get<std::uint32_t>();
        run.unique_after = r.at("unique_after").get<std::uint32_t>();
        run.deletions = r.at("deletions").get<std::uint32_t>();
        run.generations = r.at("generations").get<std::uint32_t>();
        run.wall_time = r.at("wall_time").get<double>();
        run.trajectory = r.at("trajectory").get<std::vector<std::int64_t>>();
        run.deleted_edges_file = r.at("deleted_edges_file").get<std::string>();
        doc.runs.push_back(std::move(run));
    }
    return doc;
}

// Writes a file through a temporary sibling plus rename, so concurrent runs
// never expose half-written artifacts.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void save_results(const std::filesystem::path& path, const ResultsDocument& doc) {
    write_file_atomic(path, results_to_json(doc).dump(2) + "\n");
}

inline ResultsDocument load_results(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open results file: " + path.string());
    nlohmann::json j;
    in >> j;
    return results_from_json(j);
}

inline nlohmann::json utility_report_to_json(const UtilityReport& r) {
    nlohmann::json j;
    j["frac_deleted"] = r.frac_deleted;
    j["delta_clustering"] = r.delta_clustering;
    // NaN (no finite distances left) is stored as an explicit null.
    if (std::isnan(r.delta_avg_distance))
        j["delta_avg_distance"] = nullptr;
    else
        j["delta_avg_distance"] = r.delta_avg_distance;
    j["delta_lcc_frac"] = r.delta_lcc_frac;
    j["betweenness_top100_overlap"] = r.betweenness_top100_overlap;
    j["community_nmi"] = r.community_nmi;
    return j;
}

inline UtilityReport utility_report_from_json(const nlohmann::json& j) {
    UtilityReport r;
    r.frac_deleted = j.at("frac_deleted").get<double>();
    r.delta_clustering = j.at("delta_clustering").get<double>();
    const auto& dist = j.at("delta_avg_distance");
    r.delta_avg_distance =
        dist.is_null() ? std::numeric_limits<double>::quiet_NaN() : dist.get<double>();
    r.delta_lcc_frac = j.at("delta_lcc_frac").get<double>();
    r.betweenness_top100_overlap = j.at("betweenness_top100_overlap").get<double>();
    r.community_nmi = j.at("community_nmi").get<double>();
    return r;
}

inline std::vector<EdgeId> edge_ids_from_bits(const Bitstring& bits) {
    std::vector<EdgeId> ids;
    ids.reserve(bits.count());
    bits.for_each_one([&](std::uint32_t e) { ids.push_back(e); });
    return ids;
}

// Deleted-edge list: one "u w" line per edge, in the nodes' original labels.
inline void write_deleted_edges(std::ostream& out, const Graph& g,
                                const std::vector<std::string>& labels,
                                const std::vector<EdgeId>& order) {
    for (const EdgeId e : order) {
        const auto [v, w] = g.edge(e);
        out << labels[v] << " " << labels[w] << "\n";
    }
}

inline std::string deleted_edges_text(const Graph& g, const std::vector<std::string>& labels,
                                      const std::vector<EdgeId>& order) {
    std::ostringstream out;
    write_deleted_edges(out, g, labels, order);
    return out.str();
}

// Parses a deleted-edge list back into a deletion mask over g's edge indices.
// Any line naming an unknown node or a non-edge, or naming an edge twice, is
// an error that points at the offending pair.
inline std::vector<bool> read_deleted_edges(std::istream& in, const Graph& g,
                                            const std::vector<std::string>& labels) {
    std::unordered_map<std::string, NodeId> by_label;
    by_label.reserve(labels.size());
    for (NodeId v = 0; v < labels.size(); ++v) by_label.emplace(labels[v], v);

    std::vector<bool> mask(g.edge_count(), false);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::string a;
        std::string b;
        if (!(tokens >> a)) continue;  // blank line
        if (!(tokens >> b))
            throw std::runtime_error("deleted-edge list line " + std::to_string(lineno) +
                                     ": expected two node labels");
        const auto va = by_label.find(a);
        const auto vb = by_label.find(b);
        if (va == by_label.end() || vb == by_label.end())
            throw std::runtime_error("deleted-edge list line " + std::to_string(lineno) +
                                     ": unknown node in edge '" + a + " " + b + "'");
        const auto e = g.find_edge(va->second, vb->second);
        if (!e)
            throw std::runtime_error("deleted-edge list line " + std::to_string(lineno) +
                                     ": edge '" + a + " " + b + "' is not in the graph");
        if (mask[*e])
            throw std::runtime_error("deleted-edge list line " + std::to_string(lineno) +
                                     ": edge '" + a + " " + b + "' listed twice");
        mask[*e] = true;
    }
    return mask;
}

// Table-style cross-algorithm comparison over per-run uniqueness reductions.
struct AlgorithmSummary {
    std::string algorithm;
    std::vector<double> reductions;
    double mean = 0.0;
    double stddev = 0.0;
};

struct PairComparison {
    std::string a;
    std::string b;
    bool defined = false;  // factor is mean(b)/mean(a); undefined when mean(a) = 0
    double factor = 0.0;
    double p_value = 1.0;
    bool significant = false;
    bool exact = true;
};

struct ComparisonTable {
    std::vector<AlgorithmSummary> algorithms;
    std::vector<PairComparison> pairs;
};

namespace detail {

inline int algorithm_rank(const std::string& name) {
    if (name == "es") return 0;
    if (name == "ua") return 1;
    if (name == "ga") return 2;
    if (name == "uga") return 3;
    return 4;
}

}  // namespace detail

// Builds the comparison from result documents. Input order does not matter:
// algorithms are arranged es, ua, ga, uga (others after, alphabetically), and
// each ordered pair (a earlier, b later) gets an improvement factor
// mean-reduction(b) / mean-reduction(a) plus a rank-sum significance verdict.
inline ComparisonTable build_comparison(std::vector<ResultsDocument> docs) {
    if (docs.size() < 2)
        throw std::invalid_argument("compare: need at least two result documents");
    for (std::size_t i = 1; i < docs.size(); ++i) {
        if (docs[i].node_count != docs[0].node_count || docs[i].edge_count != docs[0].edge_count)
            throw std::invalid_argument("compare: results were produced on different graphs (" +
                                        docs[i].graph_path + " vs " + docs[0].graph_path + ")");
    }
    std::unordered_set<std::string> seen;
    for (const auto& doc : docs) {
        if (doc.runs.empty())
            throw std::invalid_argument("compare: no runs recorded for " + doc.algorithm);
        if (!seen.insert(doc.algorithm).second)
            throw std::invalid_argument("compare: duplicate results for algorithm '" +
                                        doc.algorithm + "'");
    }
    std::sort(docs.begin(), docs.end(), [](const ResultsDocument& x, const ResultsDocument& y) {
        const int rx = detail::algorithm_rank(x.algorithm);
        const int ry = detail::algorithm_rank(y.algorithm);
        if (rx != ry) return rx < ry;
        return x.algorithm < y.algorithm;
    });

    ComparisonTable table;
    for (const auto& doc : docs) {
        AlgorithmSummary s;
        s.algorithm = doc.algorithm;
        s.reductions = doc.reductions();
        const auto [mean, sd] = mean_std(s.reductions);
        s.mean = mean;
        s.stddev = sd;
        table.algorithms.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < table.algorithms.size(); ++i) {
        for (std::size_t j = i + 1; j < table.algorithms.size(); ++j) {
            const auto& a = table.algorithms[i];
            const auto& b = table.algorithms[j];
            PairComparison pc;
            pc.a = a.algorithm;
            pc.b = b.algorithm;
            if (a.mean > 0.0) {
                pc.defined = true;
                pc.factor = b.mean / a.mean;
            }
            const RankSumResult rs = wilcoxon_rank_sum(a.reductions, b.reductions);
            pc.p_value = rs.p_value;
            pc.significant = rs.significant;
            pc.exact = rs.exact;
            table.pairs.push_back(std::move(pc));
        }
    }
    return table;
}

// Two CSV sections: per-algorithm summaries, then the pairwise factors. An
// undefined factor (zero-reduction denominator) renders as "-".
inline void write_comparison_csv(const ComparisonTable& table, std::ostream& out) {
    out << "algorithm,runs,mean_reduction,std_reduction\n";
    for (const auto& s : table.algorithms) {
        out << s.algorithm << "," << s.reductions.size() << "," << std::fixed
            << std::setprecision(2) << s.mean << "," << s.stddev << "\n";
        out.unsetf(std::ios_base::floatfield);
    }
    out << "pair,factor,wilcoxon_p,significant\n";
    for (const auto& p : table.pairs) {
        out << p.a << "_vs_" << p.b << ",";
        if (p.defined) {
            out << std::fixed << std::setprecision(2) << p.factor;
            out.unsetf(std::ios_base::floatfield);
        } else {
            out << "-";
        }
        out << "," << std::setprecision(6) << p.p_value << "," << (p.significant ? "yes" : "no")
            << "\n";
    }
    out << std::setprecision(6);
}

}  // namespace anonet
