#include "ici/graph.h"

#include <doctest.h>

#include <sstream>
#include <stdexcept>

using namespace ici;

TEST_CASE("edges are undirected and unique")
{
    SocialGraph g(4);
    CHECK(g.add_edge(user(0), user(1)));
    CHECK_FALSE(g.add_edge(user(1), user(0)));
    CHECK(g.add_edge(user(2), user(1), TieStrength::CloseTrusted));
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(user(1), user(0)));
    CHECK(g.is_close(user(1), user(2)));
    CHECK(g.is_trusted(user(2), user(1)));
    CHECK_FALSE(g.is_close(user(0), user(1)));
    CHECK(g.friends(user(1)) == std::vector<UserId>{user(0), user(2)});
    CHECK(g.degree(user(3)) == 0);

    g.set_tie(user(0), user(1), TieStrength::CloseTrusted);
    CHECK(g.is_close(user(1), user(0)));

    CHECK(g.remove_edge(user(0), user(1)));
    CHECK_FALSE(g.remove_edge(user(0), user(1)));
    CHECK(g.edge_count() == 1);
    CHECK_FALSE(g.has_edge(user(0), user(1)));
}

TEST_CASE("invalid edges are rejected")
{
    SocialGraph g(3);
    CHECK_THROWS_AS(g.add_edge(user(1), user(1)), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(user(1), user(7)), std::invalid_argument);

    SocialGraph partial(5, {user(1), user(3)});
    CHECK(partial.has_node(user(3)));
    CHECK_FALSE(partial.has_node(user(2)));
    CHECK_THROWS_AS(partial.add_edge(user(1), user(2)), std::invalid_argument);
    CHECK_THROWS_AS(SocialGraph(2, {user(4)}), std::invalid_argument);
}

TEST_CASE("edges come out ordered")
{
    SocialGraph g(4);
    g.add_edge(user(3), user(1));
    g.add_edge(user(2), user(0), TieStrength::CloseTrusted);
    g.add_edge(user(0), user(1));
    const auto edges = g.edges();
    REQUIRE(edges.size() == 3);
    CHECK(edges[0] == Edge{user(0), user(1), TieStrength::Weak});
    CHECK(edges[1] == Edge{user(0), user(2), TieStrength::CloseTrusted});
    CHECK(edges[2] == Edge{user(1), user(3), TieStrength::Weak});
}

TEST_CASE("ego network keeps friends and the edges among them")
{
    // 0 is the ego; 1, 2, 3 are friends; 4 is a friend of a friend.
    SocialGraph g(5);
    g.add_edge(user(0), user(1));
    g.add_edge(user(0), user(2));
    g.add_edge(user(0), user(3), TieStrength::CloseTrusted);
    g.add_edge(user(1), user(2));
    g.add_edge(user(3), user(4));

    const SocialGraph ego = ego_network(g, user(0));
    CHECK(ego.nodes() == std::vector<UserId>{user(1), user(2), user(3)});
    CHECK(ego.universe() == 5);
    CHECK(ego.edge_count() == 1);
    CHECK(ego.has_edge(user(1), user(2)));
    CHECK_FALSE(ego.has_node(user(0)));
    CHECK_FALSE(ego.has_node(user(4)));

    CHECK(ego_network(g, user(4)).nodes() == std::vector<UserId>{user(3)});
}

TEST_CASE("component count")
{
    SocialGraph g(5);
    CHECK(component_count(g) == 5);
    g.add_edge(user(0), user(1));
    g.add_edge(user(2), user(3));
    CHECK(component_count(g) == 3);
    g.add_edge(user(1), user(2));
    CHECK(component_count(g) == 2);
}

TEST_CASE("edge list round trip")
{
    SocialGraph g(6);
    g.add_edge(user(0), user(1));
    g.add_edge(user(1), user(4), TieStrength::CloseTrusted);
    g.add_edge(user(2), user(5));

    std::stringstream text;
    write_edge_list(text, g);
    const SocialGraph back = read_edge_list(text);
    CHECK(back == g);
}

TEST_CASE("edge list parsing")
{
    std::istringstream in("# a comment\n\n0 2\n2 1 ct\n");
    const SocialGraph g = read_edge_list(in);
    CHECK(g.universe() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.is_close(user(1), user(2)));

    std::istringstream header("# users 10\n0 1\n");
    CHECK(read_edge_list(header).universe() == 10);

    for (const char* bad : {"0\n", "0 x\n", "0 1 weak\n", "1 1\n", "0 1 ct extra\n", "-1 2\n"}) {
        std::istringstream s(bad);
        CHECK_THROWS_AS(read_edge_list(s), std::runtime_error);
    }
}
