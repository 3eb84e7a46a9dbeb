#include <doctest.h>

#include <random>
#include <sstream>

#include "mog/error.hpp"
#include "mog/path_core.hpp"
#include "mog/window_trie.hpp"
#include "support.hpp"

using namespace mog;
using testing::ids;
using testing::toy;

namespace {

DirectedGraph complete_with_loops(std::size_t n) {
    auto index = std::make_shared<VertexIndex>();
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(index->intern("v" + std::to_string(i)));
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (auto a : vs)
        for (auto b : vs) edges.emplace_back(a, b);
    return DirectedGraph(index, vs, edges);
}

// Dense matrix power, small graphs only.
std::vector<std::vector<std::uint64_t>> adjacency_power(const DirectedGraph& g, std::size_t k) {
    const std::size_t n = g.id_bound();
    std::vector<std::vector<std::uint64_t>> a(n, std::vector<std::uint64_t>(n, 0));
    for (auto [s, t] : g.edges()) a[s][t] = 1;
    auto r = a;
    for (std::size_t step = 1; step < k; ++step) {
        std::vector<std::vector<std::uint64_t>> next(n, std::vector<std::uint64_t>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t m = 0; m < n; ++m)
                if (r[i][m])
                    for (std::size_t j = 0; j < n; ++j) next[i][j] += r[i][m] * a[m][j];
        r = std::move(next);
    }
    return r;
}

} // namespace

TEST_CASE("parse_paths reads labels and frequencies") {
    auto s = parse_paths_string("A,B,C\t2\nA,B,A\n");
    CHECK(s.size() == 2);
    CHECK(s.total_observations() == 3);
    const auto& idx = s.index();
    CHECK(s.frequency_of(ids(idx, {"A", "B", "C"})) == 2);
    CHECK(s.frequency_of(ids(idx, {"A", "B", "A"})) == 1);
    CHECK(s.min_length() == 2);
    CHECK(s.max_length() == 2);
}

TEST_CASE("single vertex line is a path of length zero") {
    auto s = parse_paths_string("A");
    REQUIRE(s.size() == 1);
    CHECK(s.path(0).length() == 0);
    CHECK(s.path(0).frequency == 1);
    CHECK(s.max_length() == 0);
}

TEST_CASE("non-positive frequency names the line") {
    try {
        parse_paths_string("# comment\nA,B\t0\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_paths_string("A,B\t-3"), ParseError);
    CHECK_THROWS_AS(parse_paths_string("A,B\tx"), ParseError);
    CHECK_THROWS_AS(parse_paths_string("A,,B"), ParseError);
    CHECK_THROWS_AS(parse_paths_string("A,B,"), ParseError);
}

TEST_CASE("duplicate lines accumulate and order does not matter") {
    auto a = parse_paths_string("A,B\t2\nB,C\nA,B\t3\n");
    auto b = parse_paths_string("B,C\nA,B\t5\n");
    CHECK(a.size() == 2);
    CHECK(a.frequency_of(ids(a.index(), {"A", "B"})) == 5);
    CHECK(sub_path_counts(a, 1).size() == sub_path_counts(b, 1).size());
    CHECK(a.total_observations() == b.total_observations());
}

TEST_CASE("custom separator and comments") {
    auto s = parse_paths_string("# header\n\nA;B;C\t4\n", {';'});
    CHECK(s.size() == 1);
    CHECK(s.path(0).length() == 2);
    CHECK_THROWS_AS(parse_paths_string("A\tB", {'\t'}), ContractError);
}

TEST_CASE("write_paths round trip") {
    auto s = toy();
    std::ostringstream out;
    write_paths(out, s);
    auto back = parse_paths_string(out.str());
    CHECK(back.size() == s.size());
    CHECK(back.frequency_of(ids(back.index(), {"A", "B", "C"})) == 2);
    CHECK(back.frequency_of(ids(back.index(), {"A", "B", "A"})) == 1);
}

TEST_CASE("sub_path_counts on the toy collection") {
    auto s = toy();
    const auto& idx = s.index();
    auto c0 = sub_path_counts(s, 0);
    CHECK(c0.at(ids(idx, {"A"})) == 4);
    CHECK(c0.at(ids(idx, {"B"})) == 3);
    CHECK(c0.at(ids(idx, {"C"})) == 2);
    auto c1 = sub_path_counts(s, 1);
    CHECK(c1.size() == 3);
    CHECK(c1.at(ids(idx, {"A", "B"})) == 3);
    CHECK(c1.at(ids(idx, {"B", "C"})) == 2);
    CHECK(c1.at(ids(idx, {"B", "A"})) == 1);
    auto c2 = sub_path_counts(s, 2);
    CHECK(c2.size() == 2);
    CHECK(sub_path_counts(s, 3).empty());
}

TEST_CASE("window count conservation on random collections") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        PathCollection::Builder b;
        for (int v = 0; v < 5; ++v) b.index().intern("v" + std::to_string(v));
        const int n_paths = 1 + static_cast<int>(rng() % 20);
        for (int p = 0; p < n_paths; ++p) {
            std::vector<Vertex> path(1 + rng() % 7);
            for (auto& v : path) v = static_cast<Vertex>(rng() % 5);
            b.add(path, 1 + rng() % 4);
        }
        auto s = std::move(b).build();
        auto g = derive_graph(s);
        for (std::size_t k = 0; k <= 7; ++k) {
            std::uint64_t expected = 0;
            for (auto p : s)
                if (p.length() >= k) expected += p.frequency * (p.length() - k + 1);
            std::uint64_t total = 0;
            for (const auto& [key, count] : sub_path_counts(s, k)) {
                total += count;
                CHECK(key.size() == k + 1);
                for (std::size_t i = 0; i + 1 < key.size(); ++i) CHECK(g.has_edge(key[i], key[i + 1]));
            }
            CHECK(total == expected);
            if (k == 0) CHECK(total == s.total_traversals());
        }
    }
}

TEST_CASE("window trie deepening matches a fresh build") {
    auto s = parse_paths_string("A,B,C,D,A,B\t3\nB,C,D\nD,A\t2\nC\n");
    WindowTrie lazy(s, 1);
    lazy.deepen(s);
    lazy.deepen(s);
    WindowTrie full(s, 3);
    for (std::size_t d = 0; d <= 3; ++d) {
        REQUIRE(lazy.level(d).size() == full.level(d).size());
        std::vector<Vertex> w;
        for (auto node : lazy.level(d)) {
            lazy.window(node, w);
            auto other = full.find(w);
            REQUIRE(other != WindowTrie::npos);
            CHECK(full.count(other) == lazy.count(node));
        }
    }
    CHECK(full.count(WindowTrie::root) == s.total_traversals());
}

TEST_CASE("derive_graph examples") {
    auto s = toy();
    auto g = derive_graph(s);
    const auto& idx = s.index();
    CHECK(g.num_vertices() == 3);
    CHECK(g.num_edges() == 3);
    auto v = ids(idx, {"A", "B", "C"});
    CHECK(g.has_edge(v[0], v[1]));
    CHECK(g.has_edge(v[1], v[2]));
    CHECK(g.has_edge(v[1], v[0]));
    CHECK_FALSE(g.has_edge(v[2], v[0]));

    auto single = derive_graph(parse_paths_string("A\t5"));
    CHECK(single.num_vertices() == 1);
    CHECK(single.num_edges() == 0);

    auto loop = derive_graph(parse_paths_string("A,A"));
    CHECK(loop.num_edges() == 1);
    CHECK(loop.has_edge(0, 0));
}

TEST_CASE("external edge list extends the observed graph") {
    auto s = toy();
    std::istringstream edges("# extra\nC\tA\nA\tD\n");
    auto g = read_edge_list(edges, s);
    CHECK(g.num_vertices() == 4);
    CHECK(g.num_edges() == 5);
    CHECK(g.has_edge(*g.index().find("C"), *g.index().find("A")));
    CHECK(g.has_edge(*g.index().find("A"), *g.index().find("B")));
    std::istringstream bad("A B\n");
    CHECK_THROWS_AS(read_edge_list(bad, s), ParseError);
}

TEST_CASE("path_counts_matrix examples") {
    auto g = derive_graph(toy());
    auto c1 = path_counts_matrix(g, 1);
    CHECK(c1.total_paths == 3);
    CHECK(c1.nonzero_rows == 2);
    auto c2 = path_counts_matrix(g, 2);
    CHECK(c2.total_paths == 3);
    CHECK(c2.nonzero_rows == 2);

    auto k3 = complete_with_loops(3);
    auto c = path_counts_matrix(k3, 2);
    CHECK(c.total_paths == 27);
    CHECK(c.nonzero_rows == 9);
    CHECK_THROWS_AS(path_counts_matrix(g, 0), ContractError);
}

TEST_CASE("path counts agree with dense adjacency powers") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        auto index = std::make_shared<VertexIndex>();
        std::vector<Vertex> vs;
        for (std::size_t i = 0; i < n; ++i) vs.push_back(index->intern(std::to_string(i)));
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (auto a : vs)
            for (auto b : vs)
                if (rng() % 3 == 0) edges.emplace_back(a, b);
        DirectedGraph g(index, vs, edges);
        for (std::size_t k = 1; k <= 4; ++k) {
            auto m = adjacency_power(g, k);
            std::uint64_t total = 0;
            for (const auto& row : m)
                for (auto x : row) total += x;
            CHECK(path_counts_matrix(g, k).total_paths == total);
            // Rows of the order-k transition matrix: walks of length k-1
            // whose last vertex can continue.
            auto prev = k == 1 ? std::vector<std::vector<std::uint64_t>>{} : adjacency_power(g, k - 1);
            std::uint64_t rows = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (g.out_degree(j) == 0) continue;
                if (k == 1) {
                    rows += 1;
                } else {
                    for (std::size_t i = 0; i < n; ++i) rows += prev[i][j];
                }
            }
            CHECK(path_counts_matrix(g, k).nonzero_rows == rows);
        }
    }
}

TEST_CASE("complete graph with self-loops counts") {
    for (std::size_t n = 1; n <= 5; ++n) {
        auto g = complete_with_loops(n);
        WideCount power = n;
        for (std::size_t k = 1; k <= 4; ++k) {
            auto c = path_counts_matrix(g, k);
            CHECK(c.nonzero_rows == power);
            power *= n;
            CHECK(c.total_paths == power);
        }
    }
}

TEST_CASE("path counts overflow is reported") {
    auto g = complete_with_loops(5);
    CHECK_THROWS_AS(path_counts_matrix(g, 60), OverflowError);
}

TEST_CASE("wide integers print in decimal") {
    CHECK(to_string(WideCount{0}) == "0");
    WideCount big = static_cast<WideCount>(1) << 100;
    CHECK(to_string(big) == "1267650600228229401496703205376");
}
