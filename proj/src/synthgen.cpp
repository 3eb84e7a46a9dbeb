#include "mog/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "mog/error.hpp"

namespace mog {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

DirectedGraph random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n < 2) throw ContractError("random_graph needs at least two vertices");
    const std::size_t max_edges = n * (n - 1);
    if (m < n || m > max_edges)
        throw ContractError("edge count " + std::to_string(m) + " outside [" + std::to_string(n) + ", " +
                            std::to_string(max_edges) + "] for " + std::to_string(n) + " vertices");

    VertexIndex index;
    std::vector<Vertex> vertices;
    for (std::size_t i = 0; i < n; ++i) vertices.push_back(index.intern(std::to_string(i)));

    std::mt19937_64 rng(seed);
    std::set<std::pair<Vertex, Vertex>> used;
    for (Vertex v = 0; v < n; ++v) {
        std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 2));
        Vertex t = pick(rng);
        if (t >= v) ++t;
        used.emplace(v, t);
    }
    const std::size_t extra = m - n;
    if (extra * 2 <= max_edges - n) {
        std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
        while (used.size() < m) {
            Vertex s = pick(rng), t = pick(rng);
            if (s != t) used.emplace(s, t);
        }
    } else {
        std::vector<std::pair<Vertex, Vertex>> unused;
        for (Vertex s = 0; s < n; ++s)
            for (Vertex t = 0; t < n; ++t)
                if (s != t && !used.count({s, t})) unused.emplace_back(s, t);
        for (std::size_t i = 0; i < extra; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, unused.size() - 1);
            std::swap(unused[i], unused[pick(rng)]);
            used.insert(unused[i]);
        }
    }
    return DirectedGraph(std::make_shared<const VertexIndex>(std::move(index)), std::move(vertices),
                         std::vector<std::pair<Vertex, Vertex>>(used.begin(), used.end()));
}

const std::vector<double>* MarkovChain::row(std::span<const Vertex> history) const {
    auto it = rows_.find(history);
    return it == rows_.end() ? nullptr : &it->second;
}

namespace {

void enumerate_walks(const DirectedGraph& graph, std::size_t vertices_per_walk, std::vector<Vertex>& walk,
                     std::vector<std::vector<Vertex>>& out) {
    if (walk.size() == vertices_per_walk) {
        out.push_back(walk);
        return;
    }
    for (Vertex next : graph.successors(walk.back())) {
        walk.push_back(next);
        enumerate_walks(graph, vertices_per_walk, walk, out);
        walk.pop_back();
    }
}

std::vector<double> dirichlet(std::size_t size, double concentration, std::mt19937_64& rng) {
    std::gamma_distribution<double> gamma(concentration, 1.0);
    std::vector<double> row(size);
    while (true) {
        double sum = 0.0;
        for (auto& x : row) sum += (x = gamma(rng));
        if (sum > 0.0 && std::isfinite(sum)) {
            for (auto& x : row) x /= sum;
            return row;
        }
    }
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::fabs(a[i] - b[i]);
    return 0.5 * d;
}

} // namespace

MarkovChain random_chain(const DirectedGraph& graph, std::size_t k, double concentration, std::uint64_t seed) {
    if (k < 1) throw ContractError("random_chain requires order >= 1");
    if (!(concentration > 0.0)) throw ContractError("concentration must be positive");

    // Histories grouped by their final vertex.
    std::map<Vertex, std::vector<std::vector<Vertex>>> by_last;
    for (Vertex start : graph.vertices()) {
        std::vector<Vertex> walk{start};
        std::vector<std::vector<Vertex>> walks;
        enumerate_walks(graph, k, walk, walks);
        for (auto& w : walks)
            if (graph.out_degree(w.back()) >= 2) by_last[w.back()].push_back(std::move(w));
    }
    if (by_last.empty())
        throw AnalysisError("every vertex has out-degree 1; the order is undetectable, use a denser graph");

    constexpr int kMaxDraws = 10000;
    bool any_dependence = (k == 1);
    std::unordered_map<std::vector<Vertex>, std::vector<double>, detail::SequenceHash, detail::SequenceEqual>
        rows;
    for (auto& [v, histories] : by_last) {
        std::sort(histories.begin(), histories.end());
        const std::size_t degree = graph.out_degree(v);
        std::mt19937_64 rng(mix_seed(seed, v));

        // Histories sharing their last k-1 vertices; only their first vertex
        // differs.
        std::map<std::vector<Vertex>, std::vector<std::size_t>> groups;
        if (k >= 2)
            for (std::size_t i = 0; i < histories.size(); ++i)
                groups[std::vector<Vertex>(histories[i].begin() + 1, histories[i].end())].push_back(i);
        bool checkable = std::any_of(groups.begin(), groups.end(), [](const auto& g) { return g.second.size() >= 2; });
        any_dependence = any_dependence || checkable;

        std::vector<std::vector<double>> drawn(histories.size());
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxDraws)
                throw AnalysisError("could not draw an order-" + std::to_string(k) +
                                    " dependence at this concentration; lower it");
            for (auto& row : drawn) row = dirichlet(degree, concentration, rng);
            if (!checkable) break;
            bool separated = false;
            for (const auto& [suffix, members] : groups) {
                for (std::size_t a = 0; a < members.size() && !separated; ++a)
                    for (std::size_t b = a + 1; b < members.size() && !separated; ++b)
                        separated = total_variation(drawn[members[a]], drawn[members[b]]) > kOrderSeparation;
                if (separated) break;
            }
            if (separated) break;
        }
        for (std::size_t i = 0; i < histories.size(); ++i) rows.emplace(std::move(histories[i]), std::move(drawn[i]));
    }
    if (!any_dependence)
        throw AnalysisError("no two histories of length " + std::to_string(k) +
                            " share a suffix at a branching vertex; the order is undetectable");
    return MarkovChain(k, std::move(rows));
}

PathCollection generate_paths(const MarkovChain& chain, const DirectedGraph& graph, const PathSpec& spec,
                              std::uint64_t seed) {
    const std::size_t k = chain.order();
    if (spec.length < k) throw ContractError("path length must be at least the chain order");
    PathCollection::Builder builder(graph.index());
    const auto& starts = graph.vertices();
    if (starts.empty()) throw ContractError("cannot generate paths on an empty graph");

    std::vector<Vertex> path;
    for (std::size_t i = 0; i < spec.count; ++i) {
        std::mt19937_64 rng(mix_seed(seed, i));
        std::size_t length = spec.length;
        if (spec.distribution == LengthDistribution::geometric && spec.length > k) {
            std::geometric_distribution<std::size_t> extra(1.0 / static_cast<double>(spec.length - k + 1));
            length = k + extra(rng);
        }
        path.clear();
        path.push_back(starts[std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng)]);
        for (std::size_t step = 1; step <= length; ++step) {
            auto succ = graph.successors(path.back());
            if (succ.empty()) break;
            if (succ.size() == 1) {
                path.push_back(succ[0]);
                continue;
            }
            const std::vector<double>* row = nullptr;
            if (step >= k) row = chain.row(std::span<const Vertex>(path).subspan(path.size() - k, k));
            if (row == nullptr) {
                path.push_back(succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)]);
                continue;
            }
            double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            std::size_t choice = 0;
            for (double acc = (*row)[0]; choice + 1 < row->size() && u >= acc; acc += (*row)[++choice]) {
            }
            path.push_back(succ[choice]);
        }
        builder.add(path);
    }
    return std::move(builder).build();
}

SyntheticData generate(const GeneratorSpec& spec) {
    auto graph = random_graph(spec.n_vertices, spec.n_edges, mix_seed(spec.seed, 1));
    auto chain = random_chain(graph, spec.order, spec.concentration, mix_seed(spec.seed, 2));
    auto paths = generate_paths(chain, graph, {spec.n_paths, spec.path_length, spec.distribution},
                                mix_seed(spec.seed, 3));
    return {std::move(graph), std::move(chain), std::move(paths)};
}

} // namespace mog
