#ifndef MOG_ANALYTICS_HPP
#define MOG_ANALYTICS_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mog/layers.hpp"
#include "mog/path_core.hpp"

namespace mog {

// Scores keyed by vertex label. Iteration follows label order, which is also
// the tie-breaking order wherever one is needed.
using VertexScores = std::map<std::string, double>;

// Fraction of all vertex traversals that land on each vertex. Throws
// AnalysisError for an empty collection.
VertexScores visitation_probabilities(const PathCollection& paths);

struct PageRankOptions {
    double alpha = 0.85;
    double tol = 1e-12;
    std::size_t max_iter = 1000;
    // Use edge weights (transition probabilities) instead of the binary
    // adjacency.
    bool weighted = false;
};

// Stationary vector of alpha * Q + (1 - alpha) / n by power iteration, where
// Q is the row-normalized adjacency with dangling rows replaced by 1/n.
// Returns one value per state. Throws ConvergenceError carrying the last
// iterate if the L1 change stays above tol after max_iter iterations.
std::vector<double> higher_order_pagerank(const StateGraph& graph, const PageRankOptions& options = {});

// Splits each state's score evenly over its k positions and sums per vertex.
VertexScores project_pagerank(const StateGraph& graph, std::span<const double> scores);

// Kendall's tau-b over the common keys. Throws AnalysisError when the key
// sets differ or fewer than two keys are present, and when either side is
// constant (tau-b is undefined).
double kendall_tau(const VertexScores& a, const VertexScores& b);

// AUC of `scores` for separating the ceil(fraction * n) vertices with the
// highest `truth` values from the rest, using midranks for tied scores.
double auc_top_fraction(const VertexScores& scores, const VertexScores& truth, double fraction);

// fit_layer -> layer_graph -> higher_order_pagerank -> project_pagerank.
VertexScores pagerank_pipeline(const PathCollection& paths, std::size_t k,
                               const PageRankOptions& options = {});

// TSV `vertex\tscore`, sorted by descending score then label.
void write_ranking_tsv(std::ostream& out, const VertexScores& scores);

} // namespace mog

#endif
