#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "mog/error.hpp"
#include "mog/multiorder.hpp"
#include "mog/synthgen.hpp"

using namespace mog;

TEST_CASE("random graphs respect the requested size") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto g = random_graph(10, 30, seed);
        CHECK(g.num_vertices() == 10);
        CHECK(g.num_edges() == 30);
        for (auto v : g.vertices()) {
            CHECK(g.out_degree(v) >= 1);
            CHECK_FALSE(g.has_edge(v, v));
        }
    }
    auto f = random_graph(3, 3, 5);
    for (auto v : f.vertices()) CHECK(f.out_degree(v) == 1);
    auto dense = random_graph(4, 12, 1);
    CHECK(dense.num_edges() == 12);
    CHECK_THROWS_AS(random_graph(3, 9, 0), ContractError);
    CHECK_THROWS_AS(random_graph(3, 2, 0), ContractError);
}

TEST_CASE("random graphs are deterministic per seed") {
    CHECK(random_graph(30, 100, 4).edges() == random_graph(30, 100, 4).edges());
    CHECK(random_graph(30, 100, 4).edges() != random_graph(30, 100, 5).edges());
}

TEST_CASE("chain rows are distributions over out-neighbors") {
    auto g = random_graph(10, 30, 2);
    for (std::size_t k = 1; k <= 3; ++k) {
        auto chain = random_chain(g, k, 0.1, 7);
        CHECK(chain.order() == k);
        CHECK(chain.num_rows() > 0);
        for (const auto& [history, row] : chain.rows()) {
            REQUIRE(history.size() == k);
            for (std::size_t i = 0; i + 1 < history.size(); ++i) CHECK(g.has_edge(history[i], history[i + 1]));
            CHECK(row.size() == g.out_degree(history.back()));
            double total = 0.0;
            for (double p : row) {
                CHECK(p >= 0.0);
                total += p;
            }
            CHECK(std::fabs(total - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("second-order chains separate histories sharing a final vertex") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto g = random_graph(10, 30, seed);
        auto chain = random_chain(g, 2, 0.1, seed);
        std::map<Vertex, std::vector<const std::vector<double>*>> by_last;
        for (const auto& [h, row] : chain.rows()) by_last[h.back()].push_back(&row);
        double best = 0.0;
        for (const auto& [v, rows] : by_last)
            for (std::size_t a = 0; a < rows.size(); ++a)
                for (std::size_t b = a + 1; b < rows.size(); ++b) {
                    double tv = 0.0;
                    for (std::size_t i = 0; i < rows[a]->size(); ++i) tv += std::fabs((*rows[a])[i] - (*rows[b])[i]);
                    best = std::max(best, 0.5 * tv);
                }
        CHECK(best > kOrderSeparation);
    }
}

TEST_CASE("undetectable orders are rejected") {
    auto functional = random_graph(4, 4, 1);
    CHECK_THROWS_AS(random_chain(functional, 2, 0.1, 0), AnalysisError);
    CHECK_THROWS_AS(random_chain(random_graph(5, 10, 0), 2, 0.0, 0), ContractError);
}

TEST_CASE("generated paths are walks of the requested length") {
    auto g = random_graph(10, 30, 3);
    auto chain = random_chain(g, 2, 0.1, 3);
    CHECK(generate_paths(chain, g, {0, 10}, 1).empty());
    auto paths = generate_paths(chain, g, {500, 10}, 1);
    CHECK(paths.total_observations() == 500);
    CHECK(paths.min_length() == 10);
    CHECK(paths.max_length() == 10);
    for (auto p : paths)
        for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) CHECK(g.has_edge(p.vertices[i], p.vertices[i + 1]));
}

TEST_CASE("geometric lengths have the requested mean") {
    auto g = random_graph(10, 30, 3);
    auto chain = random_chain(g, 2, 0.1, 3);
    PathSpec spec{20000, 8, LengthDistribution::geometric};
    auto paths = generate_paths(chain, g, spec, 9);
    double total = 0.0;
    for (auto p : paths) total += static_cast<double>(p.frequency * p.length());
    CHECK(paths.min_length() >= 2);
    CHECK(std::fabs(total / 20000.0 - 8.0) < 0.15);
}

TEST_CASE("generation is deterministic per seed") {
    GeneratorSpec spec;
    spec.seed = 77;
    auto write = [](const PathCollection& p) {
        std::ostringstream out;
        write_paths(out, p);
        return out.str();
    };
    CHECK(write(generate(spec).paths) == write(generate(spec).paths));
    auto other = spec;
    other.seed = 78;
    CHECK(write(generate(spec).paths) != write(generate(other).paths));
}

TEST_CASE("order identifiability gate") {
    // Second order on 10 vertices / 30 edges with N >= 50 times the added
    // parameter count.
    int recovered = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GeneratorSpec spec;
        spec.order = 2;
        spec.concentration = 0.2;
        spec.seed = seed;
        auto graph = random_graph(spec.n_vertices, spec.n_edges, mix_seed(seed, 1));
        auto added = degrees_of_freedom(graph, 2) - degrees_of_freedom(graph, 1);
        spec.n_paths = static_cast<std::size_t>(50 * added);
        auto d = generate(spec);
        if (select_order(d.paths, d.graph, 6, 0.001).k_opt == 2) ++recovered;
    }
    CHECK(recovered >= 18);
}
