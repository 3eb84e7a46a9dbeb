#include "mog/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "mog/error.hpp"

namespace mog {

VertexScores visitation_probabilities(const PathCollection& paths) {
    if (paths.empty()) throw AnalysisError("visitation probabilities of an empty path collection");
    std::vector<std::uint64_t> counts(paths.index().size(), 0);
    for (auto p : paths)
        for (Vertex v : p.vertices) counts[v] += p.frequency;
    const double total = static_cast<double>(paths.total_traversals());
    VertexScores out;
    for (Vertex v = 0; v < counts.size(); ++v)
        if (counts[v] > 0) out.emplace(paths.index().label(v), static_cast<double>(counts[v]) / total);
    return out;
}

std::vector<double> higher_order_pagerank(const StateGraph& graph, const PageRankOptions& options) {
    const std::size_t n = graph.num_states();
    if (n == 0) throw ContractError("PageRank of an empty graph");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ContractError("alpha must lie in (0, 1)");

    // Row-normalized transition weights.
    std::vector<double> row_scale(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        auto w = graph.weights(s);
        double sum = options.weighted ? std::accumulate(w.begin(), w.end(), 0.0)
                                      : static_cast<double>(w.size());
        row_scale[s] = sum > 0.0 ? 1.0 / sum : 0.0;
    }

    const double uniform = 1.0 / static_cast<double>(n);
    std::vector<double> x(n, uniform), next(n);
    double residual = 0.0;
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        double dangling = 0.0;
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            if (row_scale[s] == 0.0) {
                dangling += x[s];
                continue;
            }
            auto succ = graph.successors(s);
            auto w = graph.weights(s);
            const double share = x[s] * row_scale[s];
            for (std::size_t i = 0; i < succ.size(); ++i)
                next[succ[i]] += share * (options.weighted ? w[i] : 1.0);
        }
        const double base = (1.0 - options.alpha) * uniform + options.alpha * dangling * uniform;
        double sum = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            next[s] = options.alpha * next[s] + base;
            sum += next[s];
        }
        residual = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            next[s] /= sum;
            residual += std::fabs(next[s] - x[s]);
        }
        x.swap(next);
        if (residual < options.tol) return x;
    }
    throw ConvergenceError("PageRank did not converge within " + std::to_string(options.max_iter) +
                               " iterations (L1 residual " + std::to_string(residual) + ")",
                           x, residual);
}

VertexScores project_pagerank(const StateGraph& graph, std::span<const double> scores) {
    if (scores.size() != graph.num_states()) throw ContractError("one score per state expected");
    const double k = static_cast<double>(graph.order());
    std::vector<double> per_vertex(graph.index().size(), 0.0);
    std::vector<bool> seen(graph.index().size(), false);
    for (std::size_t s = 0; s < graph.num_states(); ++s)
        for (Vertex v : graph.state(s)) {
            per_vertex[v] += scores[s] / k;
            seen[v] = true;
        }
    VertexScores out;
    for (Vertex v = 0; v < per_vertex.size(); ++v)
        if (seen[v]) out.emplace(graph.index().label(v), per_vertex[v]);
    return out;
}

namespace {

void require_same_keys(const VertexScores& a, const VertexScores& b) {
    if (a.size() != b.size() ||
        !std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) { return x.first == y.first; }))
        throw AnalysisError("score vectors have different vertex sets");
}

} // namespace

double kendall_tau(const VertexScores& a, const VertexScores& b) {
    require_same_keys(a, b);
    const std::size_t n = a.size();
    if (n < 2) throw AnalysisError("Kendall's tau needs at least two vertices");
    std::vector<double> x, y;
    x.reserve(n);
    y.reserve(n);
    for (const auto& [k, v] : a) x.push_back(v);
    for (const auto& [k, v] : b) y.push_back(v);

    long double concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0) ties_x += 1;
            if (dy == 0.0) ties_y += 1;
            if (dx == 0.0 || dy == 0.0) continue;
            if ((dx > 0.0) == (dy > 0.0)) concordant += 1;
            else discordant += 1;
        }
    const long double pairs = static_cast<long double>(n) * (n - 1) / 2;
    const long double denom = std::sqrt((pairs - ties_x) * (pairs - ties_y));
    if (denom == 0) throw AnalysisError("Kendall's tau-b is undefined for a constant score vector");
    return static_cast<double>((concordant - discordant) / denom);
}

double auc_top_fraction(const VertexScores& scores, const VertexScores& truth, double fraction) {
    require_same_keys(scores, truth);
    if (!(fraction > 0.0 && fraction < 1.0)) throw ContractError("fraction must lie in (0, 1)");
    const std::size_t n = truth.size();

    // Positives: highest truth values; ties broken by label order, which is
    // the map order, via a stable sort.
    std::vector<std::pair<std::string, double>> by_truth(truth.begin(), truth.end());
    std::stable_sort(by_truth.begin(), by_truth.end(),
                     [](const auto& l, const auto& r) { return l.second > r.second; });
    // Guard against fraction * n landing just above an integer by rounding.
    const auto positives = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
    if (positives == 0 || positives >= n)
        throw AnalysisError("AUC undefined: all vertices fall into one class");
    std::map<std::string, bool> positive;
    for (std::size_t i = 0; i < n; ++i) positive.emplace(by_truth[i].first, i < positives);

    std::vector<std::pair<double, bool>> ranked;
    ranked.reserve(n);
    for (const auto& [label, s] : scores) ranked.emplace_back(s, positive.at(label));
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && ranked[j].first == ranked[i].first) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t)
            if (ranked[t].second) rank_sum += midrank;
        i = j;
    }
    const double p = static_cast<double>(positives);
    const double q = static_cast<double>(n - positives);
    return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

VertexScores pagerank_pipeline(const PathCollection& paths, std::size_t k, const PageRankOptions& options) {
    if (k < 1) throw ContractError("PageRank pipeline requires order >= 1");
    auto layer = fit_layer(paths, k);
    auto graph = layer_graph(layer);
    auto x = higher_order_pagerank(graph, options);
    return project_pagerank(graph, x);
}

void write_ranking_tsv(std::ostream& out, const VertexScores& scores) {
    std::vector<std::pair<std::string, double>> rows(scores.begin(), scores.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) { return l.second > r.second; });
    out.precision(17);
    for (const auto& [label, score] : rows) out << label << '\t' << score << '\n';
}

} // namespace mog
