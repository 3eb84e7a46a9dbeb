#ifndef MOG_MULTIORDER_HPP
#define MOG_MULTIORDER_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mog/layers.hpp"
#include "mog/path_core.hpp"

namespace mog {

// Stack of layers 0..K fitted to one path collection, plus the graph that
// constrains the degrees of freedom.
class MultiOrderModel {
public:
    MultiOrderModel(std::vector<std::shared_ptr<const LayerModel>> layers, DirectedGraph graph);

    std::size_t max_order() const noexcept { return layers_.size() - 1; }
    const LayerModel& layer(std::size_t k) const { return *layers_.at(k); }
    const std::vector<std::shared_ptr<const LayerModel>>& layers() const noexcept { return layers_; }
    const DirectedGraph& graph() const noexcept { return graph_; }

private:
    std::vector<std::shared_ptr<const LayerModel>> layers_;
    DirectedGraph graph_;
};

// Throws AnalysisError when `max_order` exceeds the longest path length.
MultiOrderModel fit_multi_order(const PathCollection& paths, std::size_t max_order,
                                const DirectedGraph& graph);

// Log-probability of a path under the multi-order model: prefix transitions
// scored by layers of increasing order, the remainder by the top layer.
// Paths shorter than the top order use only their prefix factors. Returns
// -infinity if any factor was never observed.
double path_log_prob(const MultiOrderModel& model, std::span<const Vertex> path);

// Frequency-weighted sum of path_log_prob over the collection. Throws
// AnalysisError if the result is -infinity (an in-sample path is unscorable).
double model_log_likelihood(const MultiOrderModel& model, const PathCollection& paths);

// (|V| - 1) + Σ_{k=1..K} [total_paths(k) - nonzero_rows(k)].
WideCount degrees_of_freedom(const DirectedGraph& graph, std::size_t max_order);

enum class LrStatistic {
    // 2 ln(L_alt / L_null), the Wilks form.
    wilks,
    // ln(L_alt / L_null), as a literal reading without the factor 2.
    no_factor2,
};

struct OrderTestRecord {
    std::size_t null_order = 0;
    std::size_t alt_order = 0;
    double log_likelihood_null = 0.0;
    double log_likelihood_alt = 0.0;
    std::uint64_t dof_null = 0;
    std::uint64_t dof_alt = 0;
    double test_statistic = 0.0;
    double p_value = 1.0;
};

// Throws AnalysisError when the two models have equal degrees of freedom.
OrderTestRecord likelihood_ratio_test(const PathCollection& paths, const MultiOrderModel& null_model,
                                      const MultiOrderModel& alt_model,
                                      LrStatistic statistic = LrStatistic::wilks);

struct OrderDetectionResult {
    std::size_t k_opt = 0;
    double epsilon = 0.001;
    std::size_t max_order_tested = 0;
    std::vector<OrderTestRecord> tests;
};

struct SelectOptions {
    LrStatistic statistic = LrStatistic::wilks;
};

inline constexpr std::size_t kDefaultMaxOrder = 10;
inline constexpr double kDefaultEpsilon = 0.001;

// Runs the nested tests (1,2), (2,3), ... until the first non-rejection at
// threshold epsilon. Orders above the longest path length are skipped.
OrderDetectionResult select_order(const PathCollection& paths, const DirectedGraph& graph,
                                  std::size_t max_order, double epsilon,
                                  const SelectOptions& options = {});

struct BaselineResult {
    std::size_t order_aic = 0;
    std::size_t order_bic = 0;
    std::vector<double> log_likelihood;
    std::vector<double> aic;
    std::vector<double> bic;
    std::uint64_t scored_transitions = 0;
    std::size_t alphabet_size = 0;
};

inline constexpr const char* kDefaultStopToken = "$";

// AIC/BIC order selection of plain Markov chains on the concatenation of all
// paths (frequency-expanded), separated by a stop token. Every order is
// scored on the same positions, those at index >= max_order.
BaselineResult baseline_order_aic_bic(const PathCollection& paths, std::size_t max_order,
                                      const std::string& stop_token = kDefaultStopToken);

} // namespace mog

#endif
