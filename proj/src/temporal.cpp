#include "mog/temporal.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "mog/error.hpp"

namespace mog {

TemporalNetwork::TemporalNetwork(std::shared_ptr<const VertexIndex> index, std::vector<TimeStampedEdge> edges)
    : index_(std::move(index)), edges_(std::move(edges)) {
    const auto& idx = *index_;
    for (const auto& e : edges_)
        if (e.source >= idx.size() || e.target >= idx.size())
            throw ContractError("temporal edge vertex outside the index");
    std::stable_sort(edges_.begin(), edges_.end(), [&idx](const TimeStampedEdge& a, const TimeStampedEdge& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.source != b.source) return idx.label(a.source) < idx.label(b.source);
        return idx.label(a.target) < idx.label(b.target);
    });
}

DirectedGraph TemporalNetwork::aggregate_graph() const {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    pairs.reserve(edges_.size());
    for (const auto& e : edges_) pairs.emplace_back(e.source, e.target);
    return DirectedGraph(index_, {}, std::move(pairs));
}

namespace {

std::string_view strip_trailing(std::string_view s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

} // namespace

TemporalNetwork parse_temporal(std::istream& in, const TemporalParseOptions& options) {
    VertexIndex index;
    std::vector<TimeStampedEdge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = strip_trailing(line);
        if (view.empty() || view.front() == '#') continue;
        auto first = view.find('\t');
        auto second = first == std::string_view::npos ? first : view.find('\t', first + 1);
        if (second == std::string_view::npos || view.find('\t', second + 1) != std::string_view::npos)
            throw ParseError(line_no, "expected 'source<TAB>target<TAB>timestamp'");
        auto source = view.substr(0, first);
        auto target = view.substr(first + 1, second - first - 1);
        auto stamp = view.substr(second + 1);
        if (!VertexIndex::valid_label(source) || !VertexIndex::valid_label(target))
            throw ParseError(line_no, "invalid vertex label");
        std::int64_t time = 0;
        auto [ptr, ec] = std::from_chars(stamp.data(), stamp.data() + stamp.size(), time);
        if (stamp.empty() || ec != std::errc() || ptr != stamp.data() + stamp.size())
            throw ParseError(line_no, "timestamp must be an integer, got '" + std::string(stamp) + "'");
        Vertex s = index.intern(source);
        Vertex t = index.intern(target);
        if (s == t && !options.allow_self_loops)
            throw ParseError(line_no, "self-loop on '" + std::string(source) + "' (self-loops are disabled)");
        edges.push_back({s, t, time});
        if (options.undirected && s != t) edges.push_back({t, s, time});
    }
    if (in.bad()) throw ParseError(line_no, "read failure");
    return TemporalNetwork(std::make_shared<const VertexIndex>(std::move(index)), std::move(edges));
}

TemporalNetwork parse_temporal_string(std::string_view text, const TemporalParseOptions& options) {
    std::istringstream in{std::string(text)};
    return parse_temporal(in, options);
}

void write_temporal(std::ostream& out, const TemporalNetwork& network) {
    const auto& index = network.index();
    for (const auto& e : network.edges())
        out << index.label(e.source) << '\t' << index.label(e.target) << '\t' << e.time << '\n';
}

PathCollection extract_time_respecting_paths(const TemporalNetwork& network, std::int64_t delta,
                                             ExtractionMode mode) {
    if (delta < 1) throw ContractError("delta must be a positive integer");
    const auto& edges = network.edges();
    const std::size_t m = edges.size();
    PathCollection::Builder builder(network.index());

    // arrivals[v]: indices of edges ending in v, in time order.
    std::vector<std::vector<std::size_t>> arrivals(network.index().size());
    // Paths ending with edge instance e (maximal mode: starting at a source
    // instance), keyed by vertex sequence with realization counts.
    std::vector<std::map<std::vector<Vertex>, std::uint64_t>> ending(m);
    std::vector<bool> extended(m, false);

    std::size_t released = 0;
    auto release = [&](std::size_t e) {
        if (mode == ExtractionMode::all_paths || !extended[e])
            for (const auto& [seq, count] : ending[e]) builder.add(seq, count);
        std::map<std::vector<Vertex>, std::uint64_t>().swap(ending[e]);
    };

    for (std::size_t e = 0; e < m; ++e) {
        const auto& edge = edges[e];
        // Edges older than t - delta can no longer be extended.
        while (released < e && edges[released].time < edge.time - delta) release(released++);

        auto& paths = ending[e];
        const auto& incoming = arrivals[edge.source];
        auto lo = std::lower_bound(incoming.begin(), incoming.end(), edge.time - delta,
                                   [&](std::size_t i, std::int64_t t) { return edges[i].time < t; });
        auto hi = std::lower_bound(lo, incoming.end(), edge.time,
                                   [&](std::size_t i, std::int64_t t) { return edges[i].time < t; });
        bool has_predecessor = lo != hi;
        for (auto it = lo; it != hi; ++it) {
            extended[*it] = true;
            for (const auto& [seq, count] : ending[*it]) {
                auto next = seq;
                next.push_back(edge.target);
                paths[std::move(next)] += count;
            }
        }
        if (!has_predecessor || mode == ExtractionMode::all_paths)
            paths[{edge.source, edge.target}] += 1;
        arrivals[edge.target].push_back(e);
    }
    while (released < m) release(released++);
    return std::move(builder).build();
}

TemporalNetwork shuffle_timestamps(const TemporalNetwork& network, std::uint64_t seed) {
    auto edges = network.edges();
    std::vector<std::int64_t> times;
    times.reserve(edges.size());
    for (const auto& e : edges) times.push_back(e.time);
    std::mt19937_64 rng(seed);
    std::shuffle(times.begin(), times.end(), rng);
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].time = times[i];
    return TemporalNetwork(network.shared_index(), std::move(edges));
}

TemporalNetwork serialize_paths(const PathCollection& paths, std::int64_t gap) {
    if (gap < 1) throw ContractError("gap must be a positive integer");
    std::vector<TimeStampedEdge> edges;
    std::int64_t t = 0;
    for (auto p : paths) {
        if (p.length() == 0) continue;
        for (std::uint64_t copy = 0; copy < p.frequency; ++copy) {
            for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) edges.push_back({p.vertices[i], p.vertices[i + 1], t++});
            t += gap;
        }
    }
    return TemporalNetwork(paths.shared_index(), std::move(edges));
}

} // namespace mog
