#ifndef MOG_PATH_CORE_HPP
#define MOG_PATH_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mog {

// Dense vertex id assigned at ingestion.
using Vertex = std::uint32_t;

// Exact path counts on graphs. 128 bits wide, overflow is checked.
using WideCount = unsigned __int128;

namespace detail {

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

struct SequenceHash {
    using is_transparent = void;
    std::size_t operator()(std::span<const Vertex> s) const noexcept;
    std::size_t operator()(const std::vector<Vertex>& s) const noexcept {
        return (*this)(std::span<const Vertex>(s));
    }
};

struct SequenceEqual {
    using is_transparent = void;
    bool operator()(std::span<const Vertex> a, std::span<const Vertex> b) const noexcept;
    bool operator()(const std::vector<Vertex>& a, const std::vector<Vertex>& b) const noexcept {
        return a == b;
    }
    bool operator()(const std::vector<Vertex>& a, std::span<const Vertex> b) const noexcept {
        return (*this)(std::span<const Vertex>(a), b);
    }
    bool operator()(std::span<const Vertex> a, const std::vector<Vertex>& b) const noexcept {
        return (*this)(a, std::span<const Vertex>(b));
    }
};

} // namespace detail

// Bidirectional map between vertex labels and dense ids. Ids are assigned in
// order of first appearance.
class VertexIndex {
public:
    // Returns the id of `label`, adding it if unseen. Throws ContractError on
    // empty labels or labels containing tab, comma or newline characters.
    Vertex intern(std::string_view label);

    std::optional<Vertex> find(std::string_view label) const;
    const std::string& label(Vertex v) const { return labels_.at(v); }
    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    static bool valid_label(std::string_view label) noexcept;

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, Vertex, detail::StringHash, std::equal_to<>> ids_;
};

struct PathView {
    std::span<const Vertex> vertices;
    std::uint64_t frequency;

    // Number of edges traversed.
    std::size_t length() const noexcept { return vertices.size() - 1; }
};

// Frequency-weighted multiset of paths. Identical paths are merged on
// insertion, so iteration visits each distinct path once.
class PathCollection {
public:
    class Builder {
    public:
        Builder();
        explicit Builder(VertexIndex index);

        void add(std::span<const Vertex> vertices, std::uint64_t frequency = 1);
        void add_labels(std::span<const std::string_view> labels, std::uint64_t frequency = 1);

        VertexIndex& index() noexcept { return index_; }
        PathCollection build() &&;

    private:
        VertexIndex index_;
        std::vector<Vertex> flat_;
        std::vector<std::size_t> offsets_{0};
        std::vector<std::uint64_t> frequencies_;
        std::unordered_map<std::vector<Vertex>, std::size_t, detail::SequenceHash,
                           detail::SequenceEqual>
            lookup_;
    };

    PathCollection();

    std::size_t size() const noexcept { return frequencies_.size(); }
    bool empty() const noexcept { return frequencies_.empty(); }
    PathView path(std::size_t i) const;

    // N, the number of observations.
    std::uint64_t total_observations() const noexcept { return total_; }
    // Sum of frequency * (length + 1) over all paths.
    std::uint64_t total_traversals() const noexcept { return traversals_; }
    std::size_t min_length() const noexcept { return min_length_; }
    std::size_t max_length() const noexcept { return max_length_; }

    const VertexIndex& index() const noexcept { return *index_; }
    std::shared_ptr<const VertexIndex> shared_index() const noexcept { return index_; }

    // Ids that occur on at least one path, ascending.
    std::vector<Vertex> observed_vertices() const;

    // Frequency of an exact path, 0 if absent.
    std::uint64_t frequency_of(std::span<const Vertex> vertices) const;

    class Iterator;
    Iterator begin() const;
    Iterator end() const;

private:
    friend class Builder;

    std::shared_ptr<const VertexIndex> index_;
    std::vector<Vertex> flat_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint64_t> frequencies_;
    std::uint64_t total_ = 0;
    std::uint64_t traversals_ = 0;
    std::size_t min_length_ = 0;
    std::size_t max_length_ = 0;
};

class PathCollection::Iterator {
public:
    using value_type = PathView;
    using difference_type = std::ptrdiff_t;

    Iterator() = default;
    Iterator(const PathCollection* owner, std::size_t pos) : owner_(owner), pos_(pos) {}

    PathView operator*() const { return owner_->path(pos_); }
    Iterator& operator++() {
        ++pos_;
        return *this;
    }
    Iterator operator++(int) {
        Iterator tmp = *this;
        ++pos_;
        return tmp;
    }
    bool operator==(const Iterator& other) const noexcept { return pos_ == other.pos_; }

private:
    const PathCollection* owner_ = nullptr;
    std::size_t pos_ = 0;
};

inline PathCollection::Iterator PathCollection::begin() const { return {this, 0}; }
inline PathCollection::Iterator PathCollection::end() const { return {this, size()}; }

// Binary directed graph over a shared vertex index. The vertex set may be a
// subset of the index; ids outside the set have no edges.
class DirectedGraph {
public:
    DirectedGraph() : index_(std::make_shared<VertexIndex>()) {}
    DirectedGraph(std::shared_ptr<const VertexIndex> index, std::vector<Vertex> vertices,
                  std::vector<std::pair<Vertex, Vertex>> edges);

    std::size_t num_vertices() const noexcept { return vertices_.size(); }
    std::size_t num_edges() const noexcept { return targets_.size(); }
    // Size of the id space (index size), not the vertex count.
    std::size_t id_bound() const noexcept { return offsets_.size() - 1; }

    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    std::span<const Vertex> successors(Vertex v) const;
    std::size_t out_degree(Vertex v) const { return successors(v).size(); }
    bool has_edge(Vertex from, Vertex to) const;
    bool contains(Vertex v) const;

    // All edges in (source, target) ascending order.
    std::vector<std::pair<Vertex, Vertex>> edges() const;

    const VertexIndex& index() const noexcept { return *index_; }
    std::shared_ptr<const VertexIndex> shared_index() const noexcept { return index_; }

private:
    std::shared_ptr<const VertexIndex> index_;
    std::vector<Vertex> vertices_;
    std::vector<bool> member_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> targets_;
};

struct ParseOptions {
    char separator = ',';
};

// Reads the path file format: `v0,v1,...,vl[\t<frequency>]` per line, `#`
// comments, trailing whitespace stripped, blank lines skipped.
PathCollection parse_paths(std::istream& in, const ParseOptions& options = {});
PathCollection parse_paths_string(std::string_view text, const ParseOptions& options = {});

void write_paths(std::ostream& out, const PathCollection& paths, char separator = ',');

// Reads `source\ttarget` lines and returns the union of these edges with the
// edges traversed by `paths`. The resulting index extends the index of
// `paths`, so path vertex ids remain valid.
DirectedGraph read_edge_list(std::istream& in, const PathCollection& paths);

// Frequency-weighted counts of all windows of k+1 consecutive vertices.
std::map<std::vector<Vertex>, std::uint64_t> sub_path_counts(const PathCollection& paths,
                                                             std::size_t k);

// Graph induced by the observed vertices and traversed edges.
DirectedGraph derive_graph(const PathCollection& paths);

struct PathCounts {
    // Number of distinct walks of length k.
    WideCount total_paths = 0;
    // Number of distinct walks of length k-1 that can be extended by at least
    // one edge, i.e. the non-zero rows of the order-k transition matrix.
    WideCount nonzero_rows = 0;
};

// Exact walk counts from powers of the adjacency matrix. k >= 1. Throws
// OverflowError if any intermediate exceeds 128 bits.
PathCounts path_counts_matrix(const DirectedGraph& graph, std::size_t k);

// Same counts for k = 1..max_k in one sweep; element k-1 holds order k.
std::vector<PathCounts> path_counts_up_to(const DirectedGraph& graph, std::size_t max_k);

std::string to_string(WideCount value);

} // namespace mog

#endif
