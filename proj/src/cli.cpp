#include "mog/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mog/analytics.hpp"
#include "mog/error.hpp"
#include "mog/layers.hpp"
#include "mog/synthgen.hpp"
#include "mog/temporal.hpp"

namespace mog::cli {

using nlohmann::ordered_json;

namespace {

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}

// Writes to `path` or, when empty, to `fallback`.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw InputError("cannot write '" + path + "'");
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }
    void finish() {
        stream_->flush();
        if (!*stream_) throw InputError("write failure");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

PathCollection load_paths(const std::string& path, char separator) {
    auto in = open_input(path);
    return parse_paths(in, {separator});
}

DirectedGraph load_graph(const PathCollection& paths, const std::string& edge_file) {
    if (edge_file.empty()) return derive_graph(paths);
    auto in = open_input(edge_file);
    return read_edge_list(in, paths);
}

ordered_json test_json(const OrderTestRecord& t) {
    ordered_json j;
    j["null_order"] = t.null_order;
    j["alt_order"] = t.alt_order;
    j["log_likelihood_null"] = t.log_likelihood_null;
    j["log_likelihood_alt"] = t.log_likelihood_alt;
    j["dof_null"] = t.dof_null;
    j["dof_alt"] = t.dof_alt;
    j["test_statistic"] = t.test_statistic;
    j["p_value"] = t.p_value;
    return j;
}

// Scores for every key of `reference`, 0 where `scores` has none.
VertexScores align(const VertexScores& scores, const VertexScores& reference) {
    VertexScores out;
    for (const auto& [label, value] : reference) {
        auto it = scores.find(label);
        out.emplace(label, it == scores.end() ? 0.0 : it->second);
    }
    return out;
}

struct DetectArgs {
    std::string input;
    std::string edges;
    std::string out;
    std::size_t max_order = kDefaultMaxOrder;
    double epsilon = kDefaultEpsilon;
    bool no_factor2 = false;
    char separator = ',';
};

struct ExtractArgs {
    std::string input;
    std::string out;
    std::int64_t delta = 0;
    bool all_paths = false;
    std::optional<std::uint64_t> shuffle_seed;
    bool undirected = false;
    bool self_loops = false;
};

struct RankArgs {
    std::string input;
    std::string out;
    std::string metrics;
    std::size_t order = 1;
    std::size_t compare_up_to = 0;
    double alpha = 0.85;
    double tol = 1e-12;
    std::size_t max_iter = 1000;
    bool weighted = false;
    bool truth = false;
    double auc_fraction = 0.15;
    char separator = ',';
};

struct BaselineArgs {
    std::string input;
    std::string out;
    std::size_t max_order = 5;
    std::string stop_token = kDefaultStopToken;
    char separator = ',';
};

struct LayerArgs {
    std::string input;
    std::string out;
    std::size_t order = 1;
    char separator = ',';
};

int cmd_detect(const DetectArgs& a, std::ostream& out) {
    auto paths = load_paths(a.input, a.separator);
    auto graph = load_graph(paths, a.edges);
    SelectOptions options;
    options.statistic = a.no_factor2 ? LrStatistic::no_factor2 : LrStatistic::wilks;
    auto result = select_order(paths, graph, a.max_order, a.epsilon, options);
    Output o(a.out, out);
    *o << detection_report(result, paths, graph, a.max_order, options.statistic).dump(2) << '\n';
    o.finish();
    return kSuccess;
}

int cmd_extract(const ExtractArgs& a, std::ostream& out) {
    TemporalParseOptions options;
    options.undirected = a.undirected;
    options.allow_self_loops = a.self_loops;
    TemporalNetwork network;
    if (a.input.empty() || a.input == "-") {
        network = parse_temporal(std::cin, options);
    } else {
        auto in = open_input(a.input);
        network = parse_temporal(in, options);
    }
    if (a.shuffle_seed) network = shuffle_timestamps(network, *a.shuffle_seed);
    auto paths = extract_time_respecting_paths(
        network, a.delta, a.all_paths ? ExtractionMode::all_paths : ExtractionMode::maximal);
    Output o(a.out, out);
    write_paths(*o, paths);
    o.finish();
    return kSuccess;
}

int cmd_rank(const RankArgs& a, std::ostream& out) {
    auto paths = load_paths(a.input, a.separator);
    PageRankOptions options;
    options.alpha = a.alpha;
    options.tol = a.tol;
    options.max_iter = a.max_iter;
    options.weighted = a.weighted;

    auto ranking = pagerank_pipeline(paths, a.order, options);
    Output o(a.out, out);
    write_ranking_tsv(*o, ranking);

    if (a.truth) {
        auto truth = visitation_probabilities(paths);
        ordered_json metrics;
        metrics["ranking_order"] = a.order;
        metrics["alpha"] = a.alpha;
        metrics["weighted"] = a.weighted;
        metrics["auc_fraction"] = a.auc_fraction;
        metrics["orders"] = ordered_json::array();
        const std::size_t last = std::max(a.order, a.compare_up_to);
        for (std::size_t k = 1; k <= last; ++k) {
            auto scores = align(k == a.order ? ranking : pagerank_pipeline(paths, k, options), truth);
            ordered_json row;
            row["k"] = k;
            row["kendall_tau"] = kendall_tau(scores, truth);
            row["auc"] = auc_top_fraction(scores, truth, a.auc_fraction);
            metrics["orders"].push_back(row);
        }
        if (a.metrics.empty()) {
            *o << metrics.dump(2) << '\n';
        } else {
            Output m(a.metrics, out);
            *m << metrics.dump(2) << '\n';
            m.finish();
        }
    }
    o.finish();
    return kSuccess;
}

int cmd_baseline(const BaselineArgs& a, std::ostream& out) {
    auto paths = load_paths(a.input, a.separator);
    auto result = baseline_order_aic_bic(paths, a.max_order, a.stop_token);
    Output o(a.out, out);
    *o << baseline_report(result, a.max_order, a.stop_token).dump(2) << '\n';
    o.finish();
    return kSuccess;
}

int cmd_generate(const GeneratorSpec& spec, const std::string& path, std::ostream& out) {
    auto data = generate(spec);
    Output o(path, out);
    write_paths(*o, data.paths);
    o.finish();
    return kSuccess;
}

int cmd_layer(const LayerArgs& a, std::ostream& out) {
    auto paths = load_paths(a.input, a.separator);
    auto layer = fit_layer(paths, a.order);
    Output o(a.out, out);
    write_layer_tsv(*o, layer);
    o.finish();
    return kSuccess;
}

const auto kOpenUnit = CLI::Validator(
    [](std::string& s) -> std::string {
        double v = 0.0;
        try {
            v = std::stod(s);
        } catch (...) {
            return "not a number";
        }
        return (v > 0.0 && v < 1.0) ? std::string() : "must lie strictly between 0 and 1";
    },
    "(0,1)");

} // namespace

ordered_json detection_report(const OrderDetectionResult& result, const PathCollection& paths,
                              const DirectedGraph& graph, std::size_t requested_max_order, LrStatistic statistic) {
    ordered_json j;
    j["k_opt"] = result.k_opt;
    j["epsilon"] = result.epsilon;
    j["statistic"] = statistic == LrStatistic::wilks ? "wilks" : "no_factor2";
    j["max_order"] = requested_max_order;
    j["max_order_tested"] = result.max_order_tested;
    ordered_json dataset;
    dataset["vertices"] = graph.num_vertices();
    dataset["edges"] = graph.num_edges();
    dataset["paths"] = paths.total_observations();
    dataset["distinct_paths"] = paths.size();
    dataset["min_length"] = paths.min_length();
    dataset["max_length"] = paths.max_length();
    j["dataset"] = dataset;
    j["tests"] = ordered_json::array();
    for (const auto& t : result.tests) j["tests"].push_back(test_json(t));
    return j;
}

ordered_json baseline_report(const BaselineResult& result, std::size_t max_order, const std::string& stop_token) {
    ordered_json j;
    j["order_aic"] = result.order_aic;
    j["order_bic"] = result.order_bic;
    j["max_order"] = max_order;
    j["stop_token"] = stop_token;
    j["alphabet_size"] = result.alphabet_size;
    j["scored_transitions"] = result.scored_transitions;
    j["criteria"] = ordered_json::array();
    for (std::size_t k = 0; k < result.aic.size(); ++k) {
        ordered_json row;
        row["k"] = k;
        row["log_likelihood"] = result.log_likelihood[k];
        row["aic"] = result.aic[k];
        row["bic"] = result.bic[k];
        j["criteria"].push_back(row);
    }
    return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-order graphical models for paths and temporal networks", "mog"};
    app.require_subcommand(1);

    DetectArgs detect;
    auto* detect_cmd = app.add_subcommand("detect", "Detect the optimal maximum order of a path file");
    detect_cmd->add_option("input", detect.input, "Path file")->required();
    detect_cmd->add_option("--edges", detect.edges, "Edge file with the underlying graph");
    detect_cmd->add_option("--max-order", detect.max_order, "Largest order to test")
        ->check(CLI::PositiveNumber);
    detect_cmd->add_option("--epsilon", detect.epsilon, "Significance threshold")->check(kOpenUnit);
    detect_cmd->add_flag("--lr-no-factor2", detect.no_factor2,
                         "Use ln(L_alt/L_null) instead of 2 ln(L_alt/L_null) as the statistic");
    detect_cmd->add_option("--separator", detect.separator, "Vertex separator");
    detect_cmd->add_option("-o,--out", detect.out, "Report file (default stdout)");

    ExtractArgs extract;
    auto* extract_cmd = app.add_subcommand("extract", "Extract time-respecting paths from time-stamped edges");
    extract_cmd->add_option("input", extract.input, "Temporal edge file (default stdin)");
    extract_cmd->add_option("--delta", extract.delta, "Maximum time difference between consecutive edges")
        ->required()
        ->check(CLI::PositiveNumber);
    extract_cmd->add_flag("--all-paths", extract.all_paths, "Emit every time-respecting path, not only maximal ones");
    extract_cmd->add_option("--shuffle-seed", extract.shuffle_seed, "Shuffle timestamps before extraction");
    extract_cmd->add_flag("--undirected", extract.undirected, "Treat every edge as two directed edges");
    extract_cmd->add_flag("--self-loops", extract.self_loops, "Accept self-loops");
    extract_cmd->add_option("-o,--out", extract.out, "Path file (default stdout)");

    RankArgs rank;
    auto* rank_cmd = app.add_subcommand("rank", "Higher-order PageRank projected to vertices");
    rank_cmd->add_option("input", rank.input, "Path file")->required();
    rank_cmd->add_option("--order", rank.order, "Order k of the ranking graph")->check(CLI::PositiveNumber);
    rank_cmd->add_option("--alpha", rank.alpha, "Damping factor")->check(kOpenUnit);
    rank_cmd->add_option("--tol", rank.tol, "L1 convergence tolerance")->check(CLI::PositiveNumber);
    rank_cmd->add_option("--max-iter", rank.max_iter, "Power iteration limit")->check(CLI::PositiveNumber);
    rank_cmd->add_flag("--weighted", rank.weighted, "Weight edges by transition probabilities");
    rank_cmd->add_flag("--truth", rank.truth, "Report Kendall tau and AUC against visitation probabilities");
    rank_cmd->add_option("--compare-up-to", rank.compare_up_to, "Report metrics for orders 1..K");
    rank_cmd->add_option("--auc-fraction", rank.auc_fraction, "Fraction of most visited vertices labelled positive")
        ->check(kOpenUnit);
    rank_cmd->add_option("--separator", rank.separator, "Vertex separator");
    rank_cmd->add_option("-o,--out", rank.out, "Ranking TSV (default stdout)");
    rank_cmd->add_option("--metrics", rank.metrics, "Metrics JSON (default: appended to the ranking output)");

    GeneratorSpec spec;
    std::string generate_out;
    bool geometric = false;
    auto* generate_cmd = app.add_subcommand("generate", "Generate paths from a random order-k chain");
    generate_cmd->add_option("--vertices", spec.n_vertices, "Number of vertices")->required();
    generate_cmd->add_option("--edges", spec.n_edges, "Number of directed edges")->required();
    generate_cmd->add_option("--order", spec.order, "Markov order")->required()->check(CLI::PositiveNumber);
    generate_cmd->add_option("--paths", spec.n_paths, "Number of paths")->required();
    generate_cmd->add_option("--length", spec.path_length, "Path length (mean length with --geometric)");
    generate_cmd->add_option("--concentration", spec.concentration, "Dirichlet concentration")
        ->check(CLI::PositiveNumber);
    generate_cmd->add_option("--seed", spec.seed, "Random seed");
    generate_cmd->add_flag("--geometric", geometric, "Geometric path lengths");
    generate_cmd->add_option("-o,--out", generate_out, "Path file (default stdout)");

    BaselineArgs baseline;
    auto* baseline_cmd = app.add_subcommand("baseline", "AIC/BIC order detection on concatenated paths");
    baseline_cmd->add_option("input", baseline.input, "Path file")->required();
    baseline_cmd->add_option("--max-order", baseline.max_order, "Largest order");
    baseline_cmd->add_option("--stop-token", baseline.stop_token, "Reserved separator symbol");
    baseline_cmd->add_option("--separator", baseline.separator, "Vertex separator");
    baseline_cmd->add_option("-o,--out", baseline.out, "Report file (default stdout)");

    LayerArgs layer;
    auto* layer_cmd = app.add_subcommand("layer", "Export one fitted layer as TSV");
    layer_cmd->add_option("input", layer.input, "Path file")->required();
    layer_cmd->add_option("--order", layer.order, "Layer order");
    layer_cmd->add_option("--separator", layer.separator, "Vertex separator");
    layer_cmd->add_option("-o,--out", layer.out, "TSV file (default stdout)");

    std::vector<std::string> argv_storage{"mog"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "mog: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (*detect_cmd) return cmd_detect(detect, out);
        if (*extract_cmd) return cmd_extract(extract, out);
        if (*rank_cmd) return cmd_rank(rank, out);
        if (*generate_cmd) {
            spec.distribution = geometric ? LengthDistribution::geometric : LengthDistribution::fixed;
            return cmd_generate(spec, generate_out, out);
        }
        if (*baseline_cmd) return cmd_baseline(baseline, out);
        if (*layer_cmd) return cmd_layer(layer, out);
    } catch (const InputError& e) {
        err << "mog: " << e.what() << '\n';
        return kInputError;
    } catch (const ParseError& e) {
        err << "mog: parse error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "mog: " << e.what() << '\n';
        return kAnalysisError;
    }
    return kAnalysisError;
}

} // namespace mog::cli
