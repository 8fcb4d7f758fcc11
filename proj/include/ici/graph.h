#ifndef ICI_GRAPH_H
#define ICI_GRAPH_H

#include "ici/types.h"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace ici
{

enum class TieStrength
{
    Weak,
    CloseTrusted,
};

struct Neighbor {
    UserId id{};
    TieStrength tie = TieStrength::Weak;
    bool operator==(const Neighbor&) const = default;
};

struct Edge {
    UserId u{};
    UserId v{};
    TieStrength tie = TieStrength::Weak;
    bool operator==(const Edge&) const = default;
};

/**
 * Undirected friendship graph over a subset of a user universe.
 *
 * Node ids always refer to the full universe so that views such as ego
 * networks keep the ids of the graph they were cut from.
 */
class SocialGraph
{
public:
    SocialGraph() = default;
    /// Graph containing every user in [0, users).
    explicit SocialGraph(std::size_t users);
    /// Graph over the given nodes of a universe of `universe` users.
    SocialGraph(std::size_t universe, std::vector<UserId> nodes);

    std::size_t universe() const
    {
        return m_adjacency.size();
    }
    const std::vector<UserId>& nodes() const
    {
        return m_nodes;
    }
    bool has_node(UserId u) const
    {
        return index(u) < m_present.size() && m_present[index(u)];
    }
    std::size_t edge_count() const
    {
        return m_edges;
    }

    /// Adds an undirected edge. Returns false if it already existed. Throws on self-loops or absent nodes.
    bool add_edge(UserId u, UserId v, TieStrength tie = TieStrength::Weak);
    /// Removes an edge if present.
    bool remove_edge(UserId u, UserId v);
    void set_tie(UserId u, UserId v, TieStrength tie);

    bool has_edge(UserId u, UserId v) const;
    TieStrength tie(UserId u, UserId v) const;
    bool is_close(UserId u, UserId v) const;
    bool is_trusted(UserId u, UserId v) const;

    /// Neighbors sorted by id.
    std::span<const Neighbor> neighbors(UserId u) const;
    std::size_t degree(UserId u) const
    {
        return neighbors(u).size();
    }
    std::vector<UserId> friends(UserId u) const;

    /// All edges with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    bool operator==(const SocialGraph&) const = default;

private:
    const Neighbor* find(UserId u, UserId v) const;

    std::vector<UserId> m_nodes;
    std::vector<bool> m_present;
    std::vector<std::vector<Neighbor>> m_adjacency;
    std::size_t m_edges = 0;
};

/// The friends of u and all edges among them; u itself is not a node of the result.
SocialGraph ego_network(const SocialGraph& g, UserId u);

/// Number of connected components (isolated nodes count as components).
std::size_t component_count(const SocialGraph& g);

/**
 * Edge-list text format: an optional "# users N" header, then one "u v" pair
 * per line with an optional third token "ct" for close/trusted ties. Blank
 * lines and other '#' lines are ignored.
 */
void write_edge_list(std::ostream& out, const SocialGraph& g);
/// Throws std::runtime_error on malformed input.
SocialGraph read_edge_list(std::istream& in);

} // namespace ici

#endif
