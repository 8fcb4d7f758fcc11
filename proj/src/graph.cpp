#include "ici/graph.h"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace ici
{

SocialGraph::SocialGraph(std::size_t users)
    : m_present(users, true)
    , m_adjacency(users)
{
    m_nodes.reserve(users);
    for (std::size_t i = 0; i < users; ++i) {
        m_nodes.push_back(user(static_cast<std::uint32_t>(i)));
    }
}

SocialGraph::SocialGraph(std::size_t universe, std::vector<UserId> nodes)
    : m_nodes(std::move(nodes))
    , m_present(universe, false)
    , m_adjacency(universe)
{
    canonicalize(m_nodes);
    for (UserId u : m_nodes) {
        if (index(u) >= universe) {
            throw std::invalid_argument("social graph: node outside the user universe");
        }
        m_present[index(u)] = true;
    }
}

const Neighbor* SocialGraph::find(UserId u, UserId v) const
{
    if (!has_node(u)) {
        return nullptr;
    }
    const auto& adj = m_adjacency[index(u)];
    auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const Neighbor& n, UserId id) { return n.id < id; });
    return it != adj.end() && it->id == v ? &*it : nullptr;
}

bool SocialGraph::add_edge(UserId u, UserId v, TieStrength tie)
{
    if (u == v) {
        throw std::invalid_argument("social graph: self-loop on user " + std::to_string(index(u)));
    }
    if (!has_node(u) || !has_node(v)) {
        throw std::invalid_argument("social graph: edge endpoint is not a node");
    }
    if (find(u, v)) {
        return false;
    }
    auto insert = [this](UserId from, UserId to, TieStrength strength) {
        auto& adj = m_adjacency[index(from)];
        auto it =
            std::lower_bound(adj.begin(), adj.end(), to, [](const Neighbor& n, UserId id) { return n.id < id; });
        adj.insert(it, Neighbor{to, strength});
    };
    insert(u, v, tie);
    insert(v, u, tie);
    ++m_edges;
    return true;
}

bool SocialGraph::remove_edge(UserId u, UserId v)
{
    if (!find(u, v)) {
        return false;
    }
    auto erase = [this](UserId from, UserId to) {
        auto& adj = m_adjacency[index(from)];
        std::erase_if(adj, [to](const Neighbor& n) { return n.id == to; });
    };
    erase(u, v);
    erase(v, u);
    --m_edges;
    return true;
}

void SocialGraph::set_tie(UserId u, UserId v, TieStrength tie)
{
    if (!find(u, v)) {
        throw std::invalid_argument("social graph: no such edge");
    }
    for (auto [from, to] : {std::pair{u, v}, std::pair{v, u}}) {
        for (Neighbor& n : m_adjacency[index(from)]) {
            if (n.id == to) {
                n.tie = tie;
            }
        }
    }
}

bool SocialGraph::has_edge(UserId u, UserId v) const
{
    return find(u, v) != nullptr;
}

TieStrength SocialGraph::tie(UserId u, UserId v) const
{
    const Neighbor* n = find(u, v);
    if (!n) {
        throw std::invalid_argument("social graph: no such edge");
    }
    return n->tie;
}

bool SocialGraph::is_close(UserId u, UserId v) const
{
    const Neighbor* n = find(u, v);
    return n && n->tie == TieStrength::CloseTrusted;
}

bool SocialGraph::is_trusted(UserId u, UserId v) const
{
    // Close and trusted ties share one flag for now.
    return is_close(u, v);
}

std::span<const Neighbor> SocialGraph::neighbors(UserId u) const
{
    if (!has_node(u)) {
        return {};
    }
    return m_adjacency[index(u)];
}

std::vector<UserId> SocialGraph::friends(UserId u) const
{
    std::vector<UserId> out;
    for (const Neighbor& n : neighbors(u)) {
        out.push_back(n.id);
    }
    return out;
}

std::vector<Edge> SocialGraph::edges() const
{
    std::vector<Edge> out;
    out.reserve(m_edges);
    for (UserId u : m_nodes) {
        for (const Neighbor& n : m_adjacency[index(u)]) {
            if (u < n.id) {
                out.push_back(Edge{u, n.id, n.tie});
            }
        }
    }
    return out;
}

SocialGraph ego_network(const SocialGraph& g, UserId u)
{
    if (!g.has_node(u)) {
        throw std::invalid_argument("ego_network: user is not in the graph");
    }
    SocialGraph ego(g.universe(), g.friends(u));
    for (UserId f : ego.nodes()) {
        for (const Neighbor& n : g.neighbors(f)) {
            if (f < n.id && ego.has_node(n.id)) {
                ego.add_edge(f, n.id, n.tie);
            }
        }
    }
    return ego;
}

std::size_t component_count(const SocialGraph& g)
{
    std::vector<bool> seen(g.universe(), false);
    std::vector<UserId> stack;
    std::size_t components = 0;
    for (UserId start : g.nodes()) {
        if (seen[index(start)]) {
            continue;
        }
        ++components;
        seen[index(start)] = true;
        stack.push_back(start);
        while (!stack.empty()) {
            UserId u = stack.back();
            stack.pop_back();
            for (const Neighbor& n : g.neighbors(u)) {
                if (!seen[index(n.id)]) {
                    seen[index(n.id)] = true;
                    stack.push_back(n.id);
                }
            }
        }
    }
    return components;
}

void write_edge_list(std::ostream& out, const SocialGraph& g)
{
    out << "# users " << g.universe() << '\n';
    for (const Edge& e : g.edges()) {
        out << index(e.u) << ' ' << index(e.v);
        if (e.tie == TieStrength::CloseTrusted) {
            out << " ct";
        }
        out << '\n';
    }
}

SocialGraph read_edge_list(std::istream& in)
{
    struct Row {
        std::uint32_t u, v;
        TieStrength tie;
    };
    std::vector<Row> rows;
    std::size_t declared = 0;
    std::uint32_t max_id = 0;
    bool any = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) {
            continue;
        }
        if (first[0] == '#') {
            std::string key;
            std::size_t n = 0;
            if (fields >> key >> n && key == "users") {
                declared = n;
            }
            continue;
        }
        auto fail = [&](const std::string& why) {
            throw std::runtime_error("edge list line " + std::to_string(line_no) + ": " + why);
        };
        auto parse_id = [&](const std::string& token) {
            std::uint32_t id = 0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
            if (ec != std::errc{} || ptr != token.data() + token.size()) {
                fail("bad node id '" + token + "'");
            }
            return id;
        };
        std::string second;
        if (!(fields >> second)) {
            fail("expected two node ids");
        }
        const std::uint32_t u = parse_id(first);
        const std::uint32_t v = parse_id(second);
        TieStrength tie = TieStrength::Weak;
        std::string flag;
        if (fields >> flag) {
            if (flag != "ct") {
                fail("unknown tie flag '" + flag + "'");
            }
            tie = TieStrength::CloseTrusted;
        }
        if (std::string extra; fields >> extra) {
            fail("trailing tokens");
        }
        if (u == v) {
            fail("self-loop");
        }
        rows.push_back({u, v, tie});
        max_id = std::max({max_id, u, v});
        any = true;
    }
    const std::size_t users = std::max<std::size_t>(declared, any ? max_id + 1 : 0);
    SocialGraph g(users);
    for (const Row& r : rows) {
        g.add_edge(user(r.u), user(r.v), r.tie);
    }
    return g;
}

} // namespace ici
