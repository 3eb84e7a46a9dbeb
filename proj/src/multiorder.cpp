#include "mog/multiorder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mog/chi_squared.hpp"
#include "mog/error.hpp"
#include "mog/window_trie.hpp"

namespace mog {

MultiOrderModel::MultiOrderModel(std::vector<std::shared_ptr<const LayerModel>> layers,
                                 DirectedGraph graph)
    : layers_(std::move(layers)), graph_(std::move(graph)) {
    if (layers_.empty()) throw ContractError("a multi-order model needs at least layer 0");
    for (std::size_t k = 0; k < layers_.size(); ++k)
        if (!layers_[k] || layers_[k]->order() != k)
            throw ContractError("layer " + std::to_string(k) + " has the wrong order");
}

MultiOrderModel fit_multi_order(const PathCollection& paths, std::size_t max_order,
                                const DirectedGraph& graph) {
    if (paths.empty()) throw AnalysisError("cannot fit a model to an empty path collection");
    if (max_order > paths.max_length())
        throw AnalysisError("maximum order " + std::to_string(max_order) +
                            " exceeds the longest path length " + std::to_string(paths.max_length()) +
                            "; lower the maximum order");
    WindowTrie trie(paths, max_order + 1);
    std::vector<std::shared_ptr<const LayerModel>> layers;
    for (std::size_t k = 0; k <= max_order; ++k)
        layers.push_back(std::make_shared<const LayerModel>(
            LayerModel::from_trie(trie, k, paths.shared_index())));
    return MultiOrderModel(std::move(layers), graph);
}

double path_log_prob(const MultiOrderModel& model, std::span<const Vertex> path) {
    const std::size_t top = model.max_order();
    double total = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const std::size_t order = std::min(i, top);
        const auto& layer = model.layer(order);
        auto state = layer.find_state(path.subspan(i - order, order));
        if (!state) return -std::numeric_limits<double>::infinity();
        double lp = layer.log_prob_from_state(*state, path[i]);
        if (std::isinf(lp)) return lp;
        total += lp;
    }
    return total;
}

double model_log_likelihood(const MultiOrderModel& model, const PathCollection& paths) {
    double total = 0.0;
    for (auto p : paths) {
        double lp = path_log_prob(model, p.vertices);
        if (std::isinf(lp))
            throw AnalysisError("in-sample path has zero probability under the fitted model");
        total += static_cast<double>(p.frequency) * lp;
    }
    return total;
}

namespace {

WideCount dof_from_counts(std::size_t num_vertices, std::span<const PathCounts> counts,
                          std::size_t max_order) {
    WideCount dof = num_vertices == 0 ? 0 : num_vertices - 1;
    for (std::size_t k = 1; k <= max_order; ++k) {
        const auto& c = counts[k - 1];
        WideCount next;
        if (__builtin_add_overflow(dof, c.total_paths - c.nonzero_rows, &next))
            throw OverflowError("degrees of freedom exceed 128 bits");
        dof = next;
    }
    return dof;
}

std::uint64_t narrow(WideCount value) {
    if (value > std::numeric_limits<std::uint64_t>::max())
        throw OverflowError("degrees of freedom exceed 64 bits");
    return static_cast<std::uint64_t>(value);
}

OrderTestRecord make_record(std::size_t null_order, double ll_null, std::uint64_t dof_null,
                            double ll_alt, std::uint64_t dof_alt, LrStatistic statistic) {
    if (dof_alt <= dof_null)
        throw AnalysisError("degenerate likelihood ratio test: orders " + std::to_string(null_order) +
                            " and " + std::to_string(null_order + 1) +
                            " have the same degrees of freedom");
    OrderTestRecord r;
    r.null_order = null_order;
    r.alt_order = null_order + 1;
    r.log_likelihood_null = ll_null;
    r.log_likelihood_alt = ll_alt;
    r.dof_null = dof_null;
    r.dof_alt = dof_alt;
    // Nested MLE fits cannot lose likelihood; negative values are rounding.
    double delta = std::max(0.0, ll_alt - ll_null);
    r.test_statistic = statistic == LrStatistic::wilks ? 2.0 * delta : delta;
    r.p_value = chi_squared_sf(r.test_statistic, dof_alt - dof_null);
    return r;
}

} // namespace

WideCount degrees_of_freedom(const DirectedGraph& graph, std::size_t max_order) {
    auto counts = path_counts_up_to(graph, max_order);
    return dof_from_counts(graph.num_vertices(), counts, max_order);
}

OrderTestRecord likelihood_ratio_test(const PathCollection& paths, const MultiOrderModel& null_model,
                                      const MultiOrderModel& alt_model, LrStatistic statistic) {
    if (alt_model.max_order() != null_model.max_order() + 1)
        throw ContractError("likelihood ratio test needs consecutive maximum orders");
    auto dof_null = narrow(degrees_of_freedom(null_model.graph(), null_model.max_order()));
    auto dof_alt = narrow(degrees_of_freedom(alt_model.graph(), alt_model.max_order()));
    return make_record(null_model.max_order(), model_log_likelihood(null_model, paths), dof_null,
                       model_log_likelihood(alt_model, paths), dof_alt, statistic);
}

OrderDetectionResult select_order(const PathCollection& paths, const DirectedGraph& graph,
                                  std::size_t max_order, double epsilon, const SelectOptions& options) {
    if (max_order < 1) throw ContractError("select_order requires a maximum order >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ContractError("epsilon must lie in (0, 1)");

    OrderDetectionResult result;
    result.epsilon = epsilon;
    if (paths.empty() || paths.max_length() < 1) {
        result.k_opt = 0;
        return result;
    }
    const std::size_t cap = std::min(max_order, paths.max_length());
    result.k_opt = 1;
    result.max_order_tested = 1;
    if (cap < 2) return result;

    const auto counts = path_counts_up_to(graph, cap);
    WindowTrie trie(paths, 2);
    std::vector<std::shared_ptr<const LayerModel>> layers;
    layers.push_back(std::make_shared<const LayerModel>(LayerModel::from_trie(trie, 0, paths.shared_index())));
    layers.push_back(std::make_shared<const LayerModel>(LayerModel::from_trie(trie, 1, paths.shared_index())));

    double ll_null = model_log_likelihood(MultiOrderModel(layers, graph), paths);
    std::uint64_t dof_null = narrow(dof_from_counts(graph.num_vertices(), counts, 1));
    for (std::size_t k = 1; k < cap; ++k) {
        trie.deepen(paths);
        layers.push_back(std::make_shared<const LayerModel>(
            LayerModel::from_trie(trie, k + 1, paths.shared_index())));
        double ll_alt = model_log_likelihood(MultiOrderModel(layers, graph), paths);
        std::uint64_t dof_alt = narrow(dof_from_counts(graph.num_vertices(), counts, k + 1));
        result.max_order_tested = k + 1;
        if (dof_alt <= dof_null) {
            // No branching is possible at this order: identical models.
            OrderTestRecord r;
            r.null_order = k;
            r.alt_order = k + 1;
            r.log_likelihood_null = ll_null;
            r.log_likelihood_alt = ll_alt;
            r.dof_null = dof_null;
            r.dof_alt = dof_alt;
            result.tests.push_back(r);
            break;
        }
        auto record = make_record(k, ll_null, dof_null, ll_alt, dof_alt, options.statistic);
        result.tests.push_back(record);
        if (!(record.p_value < epsilon)) break;
        result.k_opt = k + 1;
        ll_null = ll_alt;
        dof_null = dof_alt;
    }
    return result;
}

// ---------------------------------------------------------------------------

BaselineResult baseline_order_aic_bic(const PathCollection& paths, std::size_t max_order,
                                      const std::string& stop_token) {
    if (paths.index().find(stop_token))
        throw AnalysisError("stop token '" + stop_token + "' collides with a vertex label");
    if (paths.empty()) throw AnalysisError("cannot fit a baseline to an empty path collection");

    const auto stop = static_cast<Vertex>(paths.index().size());
    std::vector<Vertex> sequence;
    sequence.reserve(paths.total_traversals() + paths.total_observations());
    bool first = true;
    for (auto p : paths) {
        for (std::uint64_t rep = 0; rep < p.frequency; ++rep) {
            if (!first) sequence.push_back(stop);
            first = false;
            sequence.insert(sequence.end(), p.vertices.begin(), p.vertices.end());
        }
    }
    if (sequence.size() <= max_order)
        throw AnalysisError("concatenated sequence too short for baseline order " + std::to_string(max_order));

    BaselineResult result;
    result.alphabet_size = paths.observed_vertices().size() + 1;
    const double alphabet = static_cast<double>(result.alphabet_size);
    const std::size_t n = sequence.size() - max_order;
    result.scored_transitions = n;

    // history[i]: dense id of the length-k context preceding position
    // max_order + i, extended by one symbol per order.
    std::vector<std::uint32_t> history(n, 0);
    std::unordered_map<std::uint64_t, std::uint64_t> transition_counts;
    std::unordered_map<std::uint32_t, std::uint64_t> history_counts;
    std::unordered_map<std::uint64_t, std::uint32_t> extend;
    for (std::size_t k = 0; k <= max_order; ++k) {
        transition_counts.clear();
        history_counts.clear();
        for (std::size_t i = 0; i < n; ++i) {
            auto key = (static_cast<std::uint64_t>(history[i]) << 32) | sequence[max_order + i];
            ++transition_counts[key];
            ++history_counts[history[i]];
        }
        double ll = 0.0;
        for (auto [key, c] : transition_counts) {
            auto h = static_cast<std::uint32_t>(key >> 32);
            ll += static_cast<double>(c) *
                  (std::log(static_cast<double>(c)) - std::log(static_cast<double>(history_counts[h])));
        }
        const double params = std::pow(alphabet, static_cast<double>(k)) * (alphabet - 1.0);
        result.log_likelihood.push_back(ll);
        result.aic.push_back(-2.0 * ll + 2.0 * params);
        result.bic.push_back(-2.0 * ll + params * std::log(static_cast<double>(n)));

        if (k == max_order) break;
        extend.clear();
        for (std::size_t i = 0; i < n; ++i) {
            Vertex earlier = sequence[max_order + i - k - 1];
            auto key = (static_cast<std::uint64_t>(history[i]) << 32) | earlier;
            auto [it, inserted] = extend.try_emplace(key, static_cast<std::uint32_t>(extend.size()));
            history[i] = it->second;
        }
    }
    result.order_aic = static_cast<std::size_t>(
        std::min_element(result.aic.begin(), result.aic.end()) - result.aic.begin());
    result.order_bic = static_cast<std::size_t>(
        std::min_element(result.bic.begin(), result.bic.end()) - result.bic.begin());
    return result;
}

} // namespace mog
