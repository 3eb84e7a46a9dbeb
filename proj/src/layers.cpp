#include "mog/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "mog/error.hpp"
#include "mog/window_trie.hpp"

namespace mog {

LayerModel LayerModel::from_trie(const WindowTrie& trie, std::size_t order,
                                 std::shared_ptr<const VertexIndex> index) {
    if (order + 1 > trie.max_depth())
        throw ContractError("trie too shallow for a layer of order " + std::to_string(order));
    const auto& states = trie.level(order);
    const auto& windows = trie.level(order + 1);
    if (windows.empty()) {
        std::size_t deepest = order;
        while (deepest > 0 && trie.level(deepest).empty()) --deepest;
        throw EmptyLayerError(order, deepest == 0 ? 0 : deepest - 1);
    }

    LayerModel layer;
    layer.order_ = order;
    layer.index_ = std::move(index);

    std::unordered_map<std::uint32_t, std::uint32_t> state_of_node;
    state_of_node.reserve(states.size());
    layer.state_vertices_.reserve(states.size() * order);
    layer.state_counts_.reserve(states.size());
    std::vector<Vertex> buffer;
    for (auto node : states) {
        auto s = static_cast<std::uint32_t>(layer.state_counts_.size());
        state_of_node.emplace(node, s);
        trie.window(node, buffer);
        layer.state_vertices_.insert(layer.state_vertices_.end(), buffer.begin(), buffer.end());
        layer.state_counts_.push_back(trie.count(node));
        layer.lookup_.emplace(buffer, s);
    }

    // Group continuation windows by their prefix state (counting sort), then
    // order each row by successor id.
    layer.offsets_.assign(states.size() + 1, 0);
    std::vector<std::uint32_t> window_state(windows.size());
    for (std::size_t w = 0; w < windows.size(); ++w) {
        window_state[w] = state_of_node.at(trie.parent(windows[w]));
        ++layer.offsets_[window_state[w] + 1];
    }
    for (std::size_t s = 0; s < states.size(); ++s) layer.offsets_[s + 1] += layer.offsets_[s];
    layer.successors_.resize(windows.size());
    layer.counts_.resize(windows.size());
    std::vector<std::size_t> cursor(layer.offsets_.begin(), layer.offsets_.end() - 1);
    for (std::size_t w = 0; w < windows.size(); ++w) {
        auto pos = cursor[window_state[w]]++;
        layer.successors_[pos] = trie.last_vertex(windows[w]);
        layer.counts_[pos] = trie.count(windows[w]);
    }
    layer.history_totals_.assign(states.size(), 0);
    std::vector<std::pair<Vertex, std::uint64_t>> row;
    for (std::size_t s = 0; s < states.size(); ++s) {
        auto begin = layer.offsets_[s], end = layer.offsets_[s + 1];
        row.clear();
        for (auto i = begin; i < end; ++i) row.emplace_back(layer.successors_[i], layer.counts_[i]);
        std::sort(row.begin(), row.end());
        for (auto i = begin; i < end; ++i) {
            layer.successors_[i] = row[i - begin].first;
            layer.counts_[i] = row[i - begin].second;
            layer.history_totals_[s] += row[i - begin].second;
        }
        if (end > begin) ++layer.num_histories_;
    }
    return layer;
}

std::optional<std::size_t> LayerModel::find_state(std::span<const Vertex> history) const {
    if (auto it = lookup_.find(history); it != lookup_.end()) return it->second;
    return std::nullopt;
}

std::uint64_t LayerModel::count(std::span<const Vertex> history, Vertex next) const {
    auto s = find_state(history);
    if (!s) return 0;
    auto succ = successors(*s);
    auto it = std::lower_bound(succ.begin(), succ.end(), next);
    if (it == succ.end() || *it != next) return 0;
    return successor_counts(*s)[static_cast<std::size_t>(it - succ.begin())];
}

double LayerModel::probability(std::span<const Vertex> history, Vertex next) const {
    auto s = find_state(history);
    if (!s || history_totals_[*s] == 0) return 0.0;
    return static_cast<double>(count(history, next)) / static_cast<double>(history_totals_[*s]);
}

double LayerModel::log_prob_from_state(std::size_t s, Vertex next) const {
    auto succ = successors(s);
    auto it = std::lower_bound(succ.begin(), succ.end(), next);
    if (it == succ.end() || *it != next) return -std::numeric_limits<double>::infinity();
    auto c = successor_counts(s)[static_cast<std::size_t>(it - succ.begin())];
    return std::log(static_cast<double>(c)) - std::log(static_cast<double>(history_totals_[s]));
}

LayerModel fit_layer(const PathCollection& paths, std::size_t k) {
    if (paths.empty()) throw AnalysisError("cannot fit a layer to an empty path collection");
    if (k > paths.max_length()) throw EmptyLayerError(k, paths.max_length());
    WindowTrie trie(paths, k + 1);
    return LayerModel::from_trie(trie, k, paths.shared_index());
}

double transition_log_prob(const LayerModel& layer, std::span<const Vertex> history, Vertex next) {
    if (history.size() != layer.order())
        throw ContractError("history length " + std::to_string(history.size()) +
                            " does not match layer order " + std::to_string(layer.order()));
    auto s = layer.find_state(history);
    if (!s) return -std::numeric_limits<double>::infinity();
    return layer.log_prob_from_state(*s, next);
}

// ---------------------------------------------------------------------------

StateGraph::StateGraph(std::shared_ptr<const VertexIndex> index, std::size_t order,
                       std::vector<Vertex> state_vertices, std::vector<Edge> edges)
    : index_(std::move(index)), order_(order), state_vertices_(std::move(state_vertices)) {
    if (order_ == 0) throw ContractError("state graphs need order >= 1");
    if (state_vertices_.size() % order_ != 0)
        throw ContractError("state vertex list is not a multiple of the order");
    const std::size_t n = state_vertices_.size() / order_;
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge& a, const Edge& b) { return a.from == b.from && a.to == b.to; }),
                edges.end());
    offsets_.assign(n + 1, 0);
    for (const auto& e : edges) {
        if (e.from >= n || e.to >= n) throw ContractError("state graph edge out of range");
        ++offsets_[e.from + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    targets_.reserve(edges.size());
    weights_.reserve(edges.size());
    for (const auto& e : edges) {
        targets_.push_back(e.to);
        weights_.push_back(e.weight);
    }
}

StateGraph StateGraph::from_graph(const DirectedGraph& graph) {
    const auto& vertices = graph.vertices();
    std::vector<std::uint32_t> position(graph.id_bound(), 0);
    for (std::size_t i = 0; i < vertices.size(); ++i) position[vertices[i]] = static_cast<std::uint32_t>(i);
    std::vector<Edge> edges;
    for (auto [s, t] : graph.edges()) edges.push_back({position[s], position[t], 1.0});
    return StateGraph(graph.shared_index(), 1, vertices, std::move(edges));
}

std::optional<std::size_t> StateGraph::find_state(std::span<const Vertex> vertices) const {
    if (vertices.size() != order_) return std::nullopt;
    for (std::size_t s = 0; s < num_states(); ++s) {
        auto st = state(s);
        if (std::equal(st.begin(), st.end(), vertices.begin())) return s;
    }
    return std::nullopt;
}

StateGraph layer_graph(const LayerModel& layer) {
    const std::size_t k = layer.order();
    if (k == 0) throw ContractError("layer_graph requires order >= 1");
    std::vector<Vertex> state_vertices;
    state_vertices.reserve(layer.num_states() * k);
    for (std::size_t s = 0; s < layer.num_states(); ++s) {
        auto st = layer.state(s);
        state_vertices.insert(state_vertices.end(), st.begin(), st.end());
    }
    std::vector<StateGraph::Edge> edges;
    edges.reserve(layer.num_transitions());
    std::vector<Vertex> shifted(k);
    for (std::size_t s = 0; s < layer.num_states(); ++s) {
        auto st = layer.state(s);
        auto succ = layer.successors(s);
        auto counts = layer.successor_counts(s);
        std::copy(st.begin() + 1, st.end(), shifted.begin());
        for (std::size_t i = 0; i < succ.size(); ++i) {
            shifted[k - 1] = succ[i];
            auto target = layer.find_state(shifted);
            if (!target) throw AnalysisError("layer graph: shifted state missing from the layer");
            edges.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(*target),
                             static_cast<double>(counts[i]) / static_cast<double>(layer.history_total(s))});
        }
    }
    return StateGraph(layer.shared_index(), k, std::move(state_vertices), std::move(edges));
}

void write_layer_tsv(std::ostream& out, const LayerModel& layer) {
    const auto& index = layer.index();
    out << "history\tsuccessor\tcount\tprobability\n";
    out.precision(17);
    for (std::size_t s = 0; s < layer.num_states(); ++s) {
        std::string history;
        for (auto v : layer.state(s)) {
            if (!history.empty()) history += ',';
            history += index.label(v);
        }
        auto succ = layer.successors(s);
        auto counts = layer.successor_counts(s);
        for (std::size_t i = 0; i < succ.size(); ++i)
            out << history << '\t' << index.label(succ[i]) << '\t' << counts[i] << '\t'
                << static_cast<double>(counts[i]) / static_cast<double>(layer.history_total(s)) << '\n';
    }
}

} // namespace mog
