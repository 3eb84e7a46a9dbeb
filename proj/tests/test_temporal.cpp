#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "mog/error.hpp"
#include "mog/temporal.hpp"
#include "support.hpp"

using namespace mog;
using testing::ids;

namespace {

std::uint64_t freq(const PathCollection& s, const std::vector<std::string>& labels) {
    for (const auto& l : labels)
        if (!s.index().find(l)) return 0;
    return s.frequency_of(ids(s.index(), labels));
}

std::vector<std::tuple<std::string, std::string, std::int64_t>> rows(const TemporalNetwork& n) {
    std::vector<std::tuple<std::string, std::string, std::int64_t>> out;
    for (const auto& e : n.edges()) out.emplace_back(n.index().label(e.source), n.index().label(e.target), e.time);
    return out;
}

} // namespace

TEST_CASE("parsing sorts by time") {
    auto a = parse_temporal_string("A\tB\t1\nB\tC\t2\n");
    auto b = parse_temporal_string("B\tC\t2\nA\tB\t1\n");
    CHECK(a.size() == 2);
    CHECK(rows(a) == rows(b));
    CHECK(a.edges().front().time == 1);
}

TEST_CASE("parse errors") {
    try {
        parse_temporal_string("A\tB\t1\nA\tB\tx\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_temporal_string("A\tB"), ParseError);
    CHECK_THROWS_AS(parse_temporal_string("A\tB\t1\t4"), ParseError);
    CHECK_THROWS_AS(parse_temporal_string("A\tA\t3"), ParseError);
    TemporalParseOptions loops;
    loops.allow_self_loops = true;
    CHECK(parse_temporal_string("A\tA\t3", loops).size() == 1);
}

TEST_CASE("undirected ingestion doubles edges") {
    TemporalParseOptions opt;
    opt.undirected = true;
    auto n = parse_temporal_string("A\tB\t4\n", opt);
    CHECK(n.size() == 2);
    CHECK(n.aggregate_graph().num_edges() == 2);
}

TEST_CASE("write and re-read") {
    auto n = parse_temporal_string("A\tB\t10\nB\tC\t-3\n");
    std::ostringstream out;
    write_temporal(out, n);
    CHECK(rows(parse_temporal_string(out.str())) == rows(n));
}

TEST_CASE("transitive path within delta") {
    auto paths = extract_time_respecting_paths(parse_temporal_string("A\tB\t1\nB\tC\t2\n"), 1);
    CHECK(paths.size() == 1);
    CHECK(freq(paths, {"A", "B", "C"}) == 1);
}

TEST_CASE("wrong order breaks transitivity") {
    auto paths = extract_time_respecting_paths(parse_temporal_string("A\tB\t2\nB\tC\t1\n"), 5);
    CHECK(paths.size() == 2);
    CHECK(freq(paths, {"A", "B"}) == 1);
    CHECK(freq(paths, {"B", "C"}) == 1);
}

TEST_CASE("gap beyond delta breaks transitivity") {
    auto paths = extract_time_respecting_paths(parse_temporal_string("A\tB\t1\nB\tC\t5\n"), 2);
    CHECK(paths.size() == 2);
    CHECK(freq(paths, {"A", "B"}) == 1);
    CHECK(freq(paths, {"B", "C"}) == 1);
}

TEST_CASE("equal timestamps do not chain") {
    auto paths = extract_time_respecting_paths(parse_temporal_string("A\tB\t3\nB\tC\t3\n"), 4);
    CHECK(freq(paths, {"A", "B", "C"}) == 0);
    CHECK(paths.total_observations() == 2);
}

TEST_CASE("branching counts every extension") {
    auto net = parse_temporal_string("A\tB\t1\nB\tC\t2\nB\tD\t3\nC\tE\t3\n");
    auto maximal = extract_time_respecting_paths(net, 2);
    CHECK(freq(maximal, {"A", "B", "C", "E"}) == 1);
    CHECK(freq(maximal, {"A", "B", "D"}) == 1);
    CHECK(maximal.total_observations() == 2);

    auto all = extract_time_respecting_paths(net, 2, ExtractionMode::all_paths);
    CHECK(freq(all, {"A", "B"}) == 1);
    CHECK(freq(all, {"B", "C", "E"}) == 1);
    CHECK(freq(all, {"A", "B", "C"}) == 1);
    CHECK(freq(all, {"C", "E"}) == 1);
    // 4 single edges, 3 two-edge paths, 1 three-edge path.
    CHECK(all.total_observations() == 8);
}

TEST_CASE("delta must be positive") {
    auto net = parse_temporal_string("A\tB\t1\n");
    CHECK_THROWS_AS(extract_time_respecting_paths(net, 0), ContractError);
}

TEST_CASE("maximal paths agree with brute force enumeration") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const int n_vertices = 3 + static_cast<int>(rng() % 3);
        std::ostringstream text;
        const int m = 2 + static_cast<int>(rng() % 10);
        for (int i = 0; i < m; ++i) {
            int s = static_cast<int>(rng() % n_vertices), t = static_cast<int>(rng() % n_vertices);
            if (s == t) t = (t + 1) % n_vertices;
            text << "v" << s << "\tv" << t << "\t" << rng() % 8 << "\n";
        }
        auto net = parse_temporal_string(text.str());
        const std::int64_t delta = 1 + static_cast<std::int64_t>(rng() % 3);
        const auto& e = net.edges();
        auto follows = [&](std::size_t a, std::size_t b) {
            return e[a].target == e[b].source && e[b].time - e[a].time > 0 && e[b].time - e[a].time <= delta;
        };
        // Depth-first enumeration from every edge with no predecessor.
        std::map<std::vector<Vertex>, std::uint64_t> expected;
        std::vector<std::size_t> stack;
        std::function<void(std::size_t)> walk = [&](std::size_t last) {
            bool extended = false;
            for (std::size_t b = 0; b < e.size(); ++b)
                if (follows(last, b)) {
                    extended = true;
                    stack.push_back(b);
                    walk(b);
                    stack.pop_back();
                }
            if (!extended) {
                std::vector<Vertex> path{e[stack.front()].source};
                for (auto i : stack) path.push_back(e[i].target);
                ++expected[path];
            }
        };
        for (std::size_t a = 0; a < e.size(); ++a) {
            bool has_pred = false;
            for (std::size_t b = 0; b < e.size(); ++b) has_pred = has_pred || follows(b, a);
            if (has_pred) continue;
            stack = {a};
            walk(a);
        }
        auto got = extract_time_respecting_paths(net, delta);
        std::map<std::vector<Vertex>, std::uint64_t> actual;
        for (auto p : got) {
            std::vector<Vertex> mapped;
            for (auto v : p.vertices) mapped.push_back(*net.index().find(got.index().label(v)));
            actual[mapped] = p.frequency;
        }
        CHECK(actual == expected);
    }
}

TEST_CASE("shuffling conserves edges and timestamps") {
    auto net = parse_temporal_string("A\tB\t1\nB\tC\t2\nC\tA\t4\nA\tC\t4\nB\tA\t9\n");
    auto s1 = shuffle_timestamps(net, 42);
    auto s2 = shuffle_timestamps(net, 42);
    CHECK(rows(s1) == rows(s2));

    auto multiset = [](const TemporalNetwork& n) {
        std::vector<std::pair<std::string, std::string>> ends;
        std::vector<std::int64_t> times;
        for (const auto& e : n.edges()) {
            ends.emplace_back(n.index().label(e.source), n.index().label(e.target));
            times.push_back(e.time);
        }
        std::sort(ends.begin(), ends.end());
        std::sort(times.begin(), times.end());
        return std::make_pair(ends, times);
    };
    CHECK(multiset(s1) == multiset(net));
    CHECK(s1.aggregate_graph().num_vertices() == net.aggregate_graph().num_vertices());

    auto single = parse_temporal_string("A\tB\t7\n");
    CHECK(rows(shuffle_timestamps(single, 3)) == rows(single));
}
