#ifndef MOG_TEMPORAL_HPP
#define MOG_TEMPORAL_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include "mog/path_core.hpp"

namespace mog {

struct TimeStampedEdge {
    Vertex source;
    Vertex target;
    std::int64_t time;
};

// Time-stamped edges, sorted by (time, source label, target label).
// Duplicate triplets are kept.
class TemporalNetwork {
public:
    TemporalNetwork() : index_(std::make_shared<const VertexIndex>()) {}
    TemporalNetwork(std::shared_ptr<const VertexIndex> index, std::vector<TimeStampedEdge> edges);

    const std::vector<TimeStampedEdge>& edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return edges_.empty(); }
    const VertexIndex& index() const noexcept { return *index_; }
    std::shared_ptr<const VertexIndex> shared_index() const noexcept { return index_; }

    // Edge-endpoint projection.
    DirectedGraph aggregate_graph() const;

private:
    std::shared_ptr<const VertexIndex> index_;
    std::vector<TimeStampedEdge> edges_;
};

struct TemporalParseOptions {
    bool allow_self_loops = false;
    // Add the reversed edge for every line.
    bool undirected = false;
};

// `source\ttarget\ttimestamp` per line; `#` comments and blank lines skipped.
TemporalNetwork parse_temporal(std::istream& in, const TemporalParseOptions& options = {});
TemporalNetwork parse_temporal_string(std::string_view text, const TemporalParseOptions& options = {});

void write_temporal(std::ostream& out, const TemporalNetwork& network);

enum class ExtractionMode {
    // Only time-respecting paths that no qualifying edge extends at either end.
    maximal,
    // Every time-respecting path, including all sub-paths.
    all_paths,
};

// Time-respecting paths whose consecutive edges satisfy 0 < t' - t <= delta.
// Each path's frequency is the number of distinct edge-instance sequences
// realizing it. Throws ContractError for delta < 1.
PathCollection extract_time_respecting_paths(const TemporalNetwork& network, std::int64_t delta,
                                             ExtractionMode mode = ExtractionMode::maximal);

// Uniformly random permutation of the timestamp multiset over the edges.
TemporalNetwork shuffle_timestamps(const TemporalNetwork& network, std::uint64_t seed);

// Lays every path observation out as edges at consecutive timestamps, one
// observation after another with `gap` time units between them. With
// gap > delta, extraction at delta returns the input paths of length >= 1.
TemporalNetwork serialize_paths(const PathCollection& paths, std::int64_t gap);

} // namespace mog

#endif
