#ifndef MOG_LAYERS_HPP
#define MOG_LAYERS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mog/path_core.hpp"

namespace mog {

class WindowTrie;

// Maximum-likelihood Markov layer of order k.
//
// States are all observed windows of k vertices (for k = 0 the single empty
// history). A state is a history when at least one continuation was
// observed; its transition probabilities are the relative frequencies of the
// observed (k+1)-vertex windows that start with it. Unobserved histories are
// not stored.
class LayerModel {
public:
    static LayerModel from_trie(const WindowTrie& trie, std::size_t order,
                                std::shared_ptr<const VertexIndex> index);

    std::size_t order() const noexcept { return order_; }
    std::size_t num_states() const noexcept { return state_counts_.size(); }
    std::size_t num_histories() const noexcept { return num_histories_; }
    std::size_t num_transitions() const noexcept { return successors_.size(); }

    std::span<const Vertex> state(std::size_t s) const {
        return {state_vertices_.data() + s * order_, order_};
    }
    // Occurrences of the state as a window anywhere on a path.
    std::uint64_t state_count(std::size_t s) const { return state_counts_[s]; }
    // Observed continuations of the state.
    std::uint64_t history_total(std::size_t s) const { return history_totals_[s]; }
    std::span<const Vertex> successors(std::size_t s) const {
        return {successors_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
    }
    std::span<const std::uint64_t> successor_counts(std::size_t s) const {
        return {counts_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
    }

    std::optional<std::size_t> find_state(std::span<const Vertex> history) const;
    std::uint64_t count(std::span<const Vertex> history, Vertex next) const;
    // 0 for unobserved pairs.
    double probability(std::span<const Vertex> history, Vertex next) const;
    // Natural log of the transition probability from state `s`; -inf when the
    // continuation was never observed.
    double log_prob_from_state(std::size_t s, Vertex next) const;

    const VertexIndex& index() const noexcept { return *index_; }
    std::shared_ptr<const VertexIndex> shared_index() const noexcept { return index_; }

private:
    LayerModel() = default;

    std::size_t order_ = 0;
    std::shared_ptr<const VertexIndex> index_;
    std::vector<Vertex> state_vertices_;
    std::vector<std::uint64_t> state_counts_;
    std::vector<std::uint64_t> history_totals_;
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> successors_;
    std::vector<std::uint64_t> counts_;
    std::size_t num_histories_ = 0;
    std::unordered_map<std::vector<Vertex>, std::uint32_t, detail::SequenceHash,
                       detail::SequenceEqual>
        lookup_;
};

// Throws EmptyLayerError when no path has length >= k.
LayerModel fit_layer(const PathCollection& paths, std::size_t k);

// ln P(next | history), or -infinity for an unobserved transition. Throws
// ContractError if history.size() != layer.order().
double transition_log_prob(const LayerModel& layer, std::span<const Vertex> history, Vertex next);

// Directed graph whose nodes are sequences of `order` vertices. Edge weights
// carry transition probabilities when built from a layer, 1 otherwise.
class StateGraph {
public:
    struct Edge {
        std::uint32_t from;
        std::uint32_t to;
        double weight;
    };

    StateGraph(std::shared_ptr<const VertexIndex> index, std::size_t order,
               std::vector<Vertex> state_vertices, std::vector<Edge> edges);

    // Order-1 state graph of a first-order graph.
    static StateGraph from_graph(const DirectedGraph& graph);

    std::size_t order() const noexcept { return order_; }
    std::size_t num_states() const noexcept { return offsets_.size() - 1; }
    std::size_t num_edges() const noexcept { return targets_.size(); }
    std::span<const Vertex> state(std::size_t s) const {
        return {state_vertices_.data() + s * order_, order_};
    }
    std::span<const std::uint32_t> successors(std::size_t s) const {
        return {targets_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
    }
    std::span<const double> weights(std::size_t s) const {
        return {weights_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
    }
    std::optional<std::size_t> find_state(std::span<const Vertex> vertices) const;

    const VertexIndex& index() const noexcept { return *index_; }

private:
    std::shared_ptr<const VertexIndex> index_;
    std::size_t order_;
    std::vector<Vertex> state_vertices_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> targets_;
    std::vector<double> weights_;
};

// De Bruijn-style graph of a layer of order k >= 1: nodes are the observed
// k-vertex windows, and every observed (k+1)-vertex window links its prefix
// to its suffix.
StateGraph layer_graph(const LayerModel& layer);

// TSV export: history (comma-joined), successor, count, probability.
void write_layer_tsv(std::ostream& out, const LayerModel& layer);

} // namespace mog

#endif
