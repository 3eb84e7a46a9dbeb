#include "mog/path_core.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "mog/error.hpp"
#include "mog/window_trie.hpp"

namespace mog {

namespace detail {

std::size_t SequenceHash::operator()(std::span<const Vertex> s) const noexcept {
    // FNV-1a over 32-bit words, finished with a 64-bit mix.
    std::uint64_t h = 1469598103934665603ull ^ s.size();
    for (Vertex v : s) {
        h ^= v;
        h *= 1099511628211ull;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
}

bool SequenceEqual::operator()(std::span<const Vertex> a, std::span<const Vertex> b) const noexcept {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace detail

bool VertexIndex::valid_label(std::string_view label) noexcept {
    return !label.empty() && label.find_first_of("\t,\n\r") == std::string_view::npos;
}

Vertex VertexIndex::intern(std::string_view label) {
    if (auto it = ids_.find(label); it != ids_.end()) return it->second;
    if (!valid_label(label))
        throw ContractError("invalid vertex label '" + std::string(label) + "'");
    auto id = static_cast<Vertex>(labels_.size());
    labels_.emplace_back(label);
    ids_.emplace(labels_.back(), id);
    return id;
}

std::optional<Vertex> VertexIndex::find(std::string_view label) const {
    if (auto it = ids_.find(label); it != ids_.end()) return it->second;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

PathCollection::Builder::Builder() = default;

PathCollection::Builder::Builder(VertexIndex index) : index_(std::move(index)) {}

void PathCollection::Builder::add(std::span<const Vertex> vertices, std::uint64_t frequency) {
    if (vertices.empty()) throw ContractError("a path needs at least one vertex");
    if (frequency == 0) throw ContractError("path frequency must be positive");
    for (Vertex v : vertices)
        if (v >= index_.size()) throw ContractError("vertex id outside the index");
    if (auto it = lookup_.find(vertices); it != lookup_.end()) {
        frequencies_[it->second] += frequency;
        return;
    }
    lookup_.emplace(std::vector<Vertex>(vertices.begin(), vertices.end()), frequencies_.size());
    flat_.insert(flat_.end(), vertices.begin(), vertices.end());
    offsets_.push_back(flat_.size());
    frequencies_.push_back(frequency);
}

void PathCollection::Builder::add_labels(std::span<const std::string_view> labels,
                                         std::uint64_t frequency) {
    std::vector<Vertex> ids;
    ids.reserve(labels.size());
    for (auto label : labels) ids.push_back(index_.intern(label));
    add(ids, frequency);
}

PathCollection PathCollection::Builder::build() && {
    PathCollection out;
    out.index_ = std::make_shared<const VertexIndex>(std::move(index_));
    out.flat_ = std::move(flat_);
    out.offsets_ = std::move(offsets_);
    out.frequencies_ = std::move(frequencies_);
    lookup_.clear();
    out.min_length_ = out.frequencies_.empty() ? 0 : static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < out.frequencies_.size(); ++i) {
        std::size_t len = out.offsets_[i + 1] - out.offsets_[i] - 1;
        out.total_ += out.frequencies_[i];
        out.traversals_ += out.frequencies_[i] * (len + 1);
        out.min_length_ = std::min(out.min_length_, len);
        out.max_length_ = std::max(out.max_length_, len);
    }
    return out;
}

PathCollection::PathCollection() : index_(std::make_shared<const VertexIndex>()), offsets_{0} {}

PathView PathCollection::path(std::size_t i) const {
    return {std::span<const Vertex>(flat_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]),
            frequencies_[i]};
}

std::vector<Vertex> PathCollection::observed_vertices() const {
    std::vector<bool> seen(index_->size(), false);
    for (Vertex v : flat_) seen[v] = true;
    std::vector<Vertex> out;
    for (Vertex v = 0; v < seen.size(); ++v)
        if (seen[v]) out.push_back(v);
    return out;
}

std::uint64_t PathCollection::frequency_of(std::span<const Vertex> vertices) const {
    std::uint64_t total = 0;
    for (auto p : *this)
        if (std::equal(p.vertices.begin(), p.vertices.end(), vertices.begin(), vertices.end()))
            total += p.frequency;
    return total;
}

// ---------------------------------------------------------------------------

DirectedGraph::DirectedGraph(std::shared_ptr<const VertexIndex> index, std::vector<Vertex> vertices,
                             std::vector<std::pair<Vertex, Vertex>> edges)
    : index_(std::move(index)) {
    const std::size_t n = index_->size();
    member_.assign(n, false);
    for (Vertex v : vertices) {
        if (v >= n) throw ContractError("graph vertex outside the index");
        member_[v] = true;
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto [s, t] : edges) {
        if (s >= n || t >= n) throw ContractError("graph edge outside the index");
        member_[s] = true;
        member_[t] = true;
    }
    for (Vertex v = 0; v < n; ++v)
        if (member_[v]) vertices_.push_back(v);
    offsets_.assign(n + 1, 0);
    for (auto [s, t] : edges) ++offsets_[s + 1];
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    targets_.reserve(edges.size());
    for (auto [s, t] : edges) targets_.push_back(t);
}

std::span<const Vertex> DirectedGraph::successors(Vertex v) const {
    if (v + 1 >= offsets_.size()) return {};
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool DirectedGraph::has_edge(Vertex from, Vertex to) const {
    auto succ = successors(from);
    return std::binary_search(succ.begin(), succ.end(), to);
}

bool DirectedGraph::contains(Vertex v) const { return v < member_.size() && member_[v]; }

std::vector<std::pair<Vertex, Vertex>> DirectedGraph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(targets_.size());
    for (Vertex s = 0; s + 1 < offsets_.size(); ++s)
        for (Vertex t : successors(s)) out.emplace_back(s, t);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string_view strip_trailing(std::string_view s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                          s.back() == '\n' || s.back() == '\v' || s.back() == '\f'))
        s.remove_suffix(1);
    return s;
}

bool parse_positive(std::string_view text, std::uint64_t& value) {
    if (text.empty() || text.front() == '+' || text.front() == '-') return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size() && value > 0;
}

} // namespace

PathCollection parse_paths(std::istream& in, const ParseOptions& options) {
    if (options.separator == '\t' || options.separator == '\n' || options.separator == '\r' ||
        options.separator == '#')
        throw ContractError("separator must not be a tab, newline or '#'");
    PathCollection::Builder builder;
    std::string line;
    std::vector<std::string_view> fields;
    std::vector<Vertex> ids;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = strip_trailing(line);
        if (view.empty() || view.front() == '#') continue;

        std::uint64_t frequency = 1;
        if (auto tab = view.find('\t'); tab != std::string_view::npos) {
            if (!parse_positive(view.substr(tab + 1), frequency))
                throw ParseError(line_no, "frequency must be a positive integer, got '" +
                                              std::string(view.substr(tab + 1)) + "'");
            view = view.substr(0, tab);
        }

        ids.clear();
        std::size_t start = 0;
        while (true) {
            auto sep = view.find(options.separator, start);
            auto label = view.substr(start, sep == std::string_view::npos ? sep : sep - start);
            if (label.empty()) throw ParseError(line_no, "empty vertex label");
            if (!VertexIndex::valid_label(label))
                throw ParseError(line_no, "invalid vertex label '" + std::string(label) + "'");
            ids.push_back(builder.index().intern(label));
            if (sep == std::string_view::npos) break;
            start = sep + 1;
        }
        builder.add(ids, frequency);
    }
    if (in.bad()) throw ParseError(line_no, "read failure");
    return std::move(builder).build();
}

PathCollection parse_paths_string(std::string_view text, const ParseOptions& options) {
    std::istringstream in{std::string(text)};
    return parse_paths(in, options);
}

void write_paths(std::ostream& out, const PathCollection& paths, char separator) {
    const auto& index = paths.index();
    std::string line;
    for (auto p : paths) {
        line.clear();
        for (std::size_t i = 0; i < p.vertices.size(); ++i) {
            if (i) line += separator;
            line += index.label(p.vertices[i]);
        }
        line += '\t';
        line += std::to_string(p.frequency);
        line += '\n';
        out << line;
    }
}

DirectedGraph read_edge_list(std::istream& in, const PathCollection& paths) {
    VertexIndex index = paths.index();
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = strip_trailing(line);
        if (view.empty() || view.front() == '#') continue;
        auto tab = view.find('\t');
        if (tab == std::string_view::npos || view.find('\t', tab + 1) != std::string_view::npos)
            throw ParseError(line_no, "expected 'source<TAB>target'");
        auto source = view.substr(0, tab);
        auto target = view.substr(tab + 1);
        if (!VertexIndex::valid_label(source) || !VertexIndex::valid_label(target))
            throw ParseError(line_no, "invalid vertex label");
        edges.emplace_back(index.intern(source), index.intern(target));
    }
    if (in.bad()) throw ParseError(line_no, "read failure");

    auto observed = derive_graph(paths);
    auto path_edges = observed.edges();
    edges.insert(edges.end(), path_edges.begin(), path_edges.end());
    return DirectedGraph(std::make_shared<const VertexIndex>(std::move(index)),
                         observed.vertices(), std::move(edges));
}

std::map<std::vector<Vertex>, std::uint64_t> sub_path_counts(const PathCollection& paths,
                                                             std::size_t k) {
    std::map<std::vector<Vertex>, std::uint64_t> out;
    if (paths.empty() || k > paths.max_length()) return out;
    WindowTrie trie(paths, k + 1);
    std::vector<Vertex> window;
    for (auto node : trie.level(k + 1)) {
        trie.window(node, window);
        out.emplace(window, trie.count(node));
    }
    return out;
}

DirectedGraph derive_graph(const PathCollection& paths) {
    std::set<std::pair<Vertex, Vertex>> edges;
    for (auto p : paths)
        for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i)
            edges.emplace(p.vertices[i], p.vertices[i + 1]);
    return DirectedGraph(paths.shared_index(), paths.observed_vertices(),
                         std::vector<std::pair<Vertex, Vertex>>(edges.begin(), edges.end()));
}

namespace {

WideCount checked_add(WideCount a, WideCount b) {
    WideCount r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("path count exceeds 128 bits; the maximum order is too large");
    return r;
}

} // namespace

std::vector<PathCounts> path_counts_up_to(const DirectedGraph& graph, std::size_t max_k) {
    const std::size_t n = graph.id_bound();
    // walks[j]: number of distinct walks of the current length ending at j.
    std::vector<WideCount> walks(n, 0), next(n, 0);
    for (Vertex v : graph.vertices()) walks[v] = 1;

    std::vector<PathCounts> out;
    out.reserve(max_k);
    for (std::size_t k = 1; k <= max_k; ++k) {
        PathCounts counts;
        std::fill(next.begin(), next.end(), WideCount{0});
        for (Vertex i = 0; i < n; ++i) {
            if (walks[i] == 0) continue;
            auto succ = graph.successors(i);
            if (succ.empty()) continue;
            counts.nonzero_rows = checked_add(counts.nonzero_rows, walks[i]);
            for (Vertex j : succ) next[j] = checked_add(next[j], walks[i]);
        }
        for (Vertex j = 0; j < n; ++j) counts.total_paths = checked_add(counts.total_paths, next[j]);
        out.push_back(counts);
        walks.swap(next);
    }
    return out;
}

PathCounts path_counts_matrix(const DirectedGraph& graph, std::size_t k) {
    if (k == 0) throw ContractError("path_counts_matrix requires k >= 1");
    return path_counts_up_to(graph, k).back();
}

std::string to_string(WideCount value) {
    if (value == 0) return "0";
    std::string out;
    while (value > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

} // namespace mog
