#ifndef MOG_SYNTHGEN_HPP
#define MOG_SYNTHGEN_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "mog/path_core.hpp"

namespace mog {

// Random directed graph on vertices labelled "0".."n-1" without self-loops
// or parallel edges. The first n edges give every vertex one random
// out-neighbor; the remaining m - n are drawn uniformly without replacement
// from the unused ordered pairs. Requires n <= m <= n(n-1).
DirectedGraph random_graph(std::size_t n, std::size_t m, std::uint64_t seed);

// Order-k transition table constrained to a graph. Histories are walks of k
// vertices; each history ending in a vertex with out-degree >= 2 owns a
// distribution over that vertex's successors (in successor order).
// Histories ending in a vertex with out-degree 1 are deterministic and not
// stored.
class MarkovChain {
public:
    MarkovChain(std::size_t order,
                std::unordered_map<std::vector<Vertex>, std::vector<double>, detail::SequenceHash,
                                   detail::SequenceEqual>
                    rows)
        : order_(order), rows_(std::move(rows)) {}

    std::size_t order() const noexcept { return order_; }
    std::size_t num_rows() const noexcept { return rows_.size(); }
    // nullptr for deterministic or infeasible histories.
    const std::vector<double>* row(std::span<const Vertex> history) const;
    const auto& rows() const noexcept { return rows_; }

private:
    std::size_t order_;
    std::unordered_map<std::vector<Vertex>, std::vector<double>, detail::SequenceHash, detail::SequenceEqual>
        rows_;
};

// Minimum total-variation distance required between the rows of at least one
// pair of histories that differ only in their first vertex, per vertex.
inline constexpr double kOrderSeparation = 0.2;

// Draws every row from a symmetric Dirichlet with the given concentration.
// For k >= 2, all rows of a vertex are redrawn until some pair of histories
// differing only in their first vertex is separated by more than
// kOrderSeparation in total variation, so the order-k dependence is real.
// Throws AnalysisError if no vertex allows such a dependence (for example
// when every vertex has out-degree 1) or if the separation cannot be reached.
MarkovChain random_chain(const DirectedGraph& graph, std::size_t k, double concentration, std::uint64_t seed);

enum class LengthDistribution {
    fixed,
    // order + Geometric, with mean equal to the requested length.
    geometric,
};

struct PathSpec {
    std::size_t count = 0;
    std::size_t length = 10;
    LengthDistribution distribution = LengthDistribution::fixed;
};

// Independent paths: uniform start vertex, uniform out-neighbor choices for
// the first k-1 steps, the chain afterwards. Path i draws from a stream
// seeded by (seed, i).
PathCollection generate_paths(const MarkovChain& chain, const DirectedGraph& graph, const PathSpec& spec,
                              std::uint64_t seed);

struct GeneratorSpec {
    std::size_t n_vertices = 10;
    std::size_t n_edges = 30;
    std::size_t order = 2;
    std::size_t n_paths = 1000;
    std::size_t path_length = 10;
    LengthDistribution distribution = LengthDistribution::fixed;
    double concentration = 0.1;
    std::uint64_t seed = 0;
};

struct SyntheticData {
    DirectedGraph graph;
    MarkovChain chain;
    PathCollection paths;
};

// Graph, chain and paths from one seed (sub-seeds are derived per stage).
SyntheticData generate(const GeneratorSpec& spec);

// SplitMix64 finalizer, used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace mog

#endif
