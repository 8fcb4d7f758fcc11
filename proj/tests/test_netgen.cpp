#include "ici/netgen.h"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace ici;

namespace
{

std::size_t expected_edges(std::size_t n, std::size_t m)
{
    // Core of m+1 users, then m links per later user.
    return m * (m + 1) / 2 + (n - m - 1) * m;
}

std::size_t close_edges(const SocialGraph& g)
{
    std::size_t n = 0;
    for (const Edge& e : g.edges()) {
        n += e.tie == TieStrength::CloseTrusted;
    }
    return n;
}

} // namespace

TEST_CASE("three users and two links give a triangle")
{
    const SocialGraph g = generate_network({3, 2, 0.0}, 1);
    CHECK(g.edge_count() == 3);
    CHECK(g.has_edge(user(0), user(1)));
    CHECK(g.has_edge(user(0), user(2)));
    CHECK(g.has_edge(user(1), user(2)));
}

TEST_CASE("default network size")
{
    CHECK(expected_edges(100, 2) == 197);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SocialGraph g = generate_network({}, seed);
        CHECK(g.nodes().size() == 100);
        CHECK(g.edge_count() == 197);
        CHECK(close_edges(g) == 20);
        CHECK(component_count(g) == 1);
    }
    const SocialGraph dense = generate_network({60, 5, 0.25}, 3);
    CHECK(dense.edge_count() == expected_edges(60, 5));
    CHECK(close_edges(dense) == static_cast<std::size_t>(std::llround(0.25 * expected_edges(60, 5))));
}

TEST_CASE("ratio extremes")
{
    CHECK(close_edges(generate_network({50, 2, 0.0}, 4)) == 0);
    CHECK(close_edges(generate_network({50, 2, 1.0}, 4)) == expected_edges(50, 2));
}

TEST_CASE("generation is deterministic")
{
    CHECK(generate_network({}, 77) == generate_network({}, 77));
    CHECK_FALSE(generate_network({}, 77) == generate_network({}, 78));
}

TEST_CASE("invalid configurations")
{
    CHECK_THROWS_AS(generate_network({10, 0, 0.1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_network({10, 10, 0.1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_network({10, 2, 1.5}, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_network({10, 2, -0.1}, 1), std::invalid_argument);
}
