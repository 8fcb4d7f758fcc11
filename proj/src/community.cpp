#include "ici/community.h"
#include "ici/rng.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ici
{

namespace
{

double plogp(double x)
{
    return x > 0.0 ? x * std::log2(x) : 0.0;
}

/// Module index of every node; throws unless p partitions exactly the nodes of g.
std::vector<int> module_index(const SocialGraph& g, const Partition& p)
{
    std::vector<int> module(g.universe(), -1);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < p.communities.size(); ++i) {
        if (p.communities[i].empty()) {
            throw std::invalid_argument("partition: empty community");
        }
        for (UserId u : p.communities[i]) {
            if (!g.has_node(u) || module[index(u)] != -1) {
                throw std::invalid_argument("partition: member missing from graph or assigned twice");
            }
            module[index(u)] = static_cast<int>(i);
            ++assigned;
        }
    }
    if (assigned != g.nodes().size()) {
        throw std::invalid_argument("partition: does not cover every node");
    }
    return module;
}

} // namespace

void Partition::canonicalize()
{
    for (auto& c : communities) {
        ici::canonicalize(c);
    }
    std::erase_if(communities, [](const auto& c) { return c.empty(); });
    std::sort(communities.begin(), communities.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

double map_equation(const SocialGraph& g, const Partition& p)
{
    if (g.edge_count() == 0) {
        throw std::invalid_argument("map_equation: graph has no edges");
    }
    const std::vector<int> module = module_index(g, p);
    const double two_m = 2.0 * static_cast<double>(g.edge_count());

    std::vector<double> visit(p.size(), 0.0);
    std::vector<double> exit(p.size(), 0.0);
    double node_term = 0.0;
    for (UserId u : g.nodes()) {
        const double rate = static_cast<double>(g.degree(u)) / two_m;
        node_term += plogp(rate);
        const int m = module[index(u)];
        visit[m] += rate;
        for (const Neighbor& n : g.neighbors(u)) {
            if (module[index(n.id)] != m) {
                exit[m] += 1.0 / two_m;
            }
        }
    }
    double exit_total = 0.0;
    double exit_term = 0.0;
    double module_term = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        exit_total += exit[i];
        exit_term += plogp(exit[i]);
        module_term += plogp(exit[i] + visit[i]);
    }
    return plogp(exit_total) - 2.0 * exit_term - node_term + module_term;
}

namespace
{

Partition greedy_merge(const SocialGraph& g, std::uint64_t seed)
{
    struct Module {
        std::vector<UserId> members;
        double visit = 0.0;
        double exit = 0.0;
        std::map<std::size_t, double> links; // neighbor module -> edge count
        bool alive = true;
    };

    std::vector<Module> modules;
    std::vector<std::size_t> module_of(g.universe(), 0);
    for (UserId u : g.nodes()) {
        module_of[index(u)] = modules.size();
        modules.emplace_back().members.push_back(u);
    }
    if (g.edge_count() == 0) {
        Partition out;
        for (auto& m : modules) {
            out.communities.push_back(std::move(m.members));
        }
        out.canonicalize();
        return out;
    }

    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    for (UserId u : g.nodes()) {
        Module& m = modules[module_of[index(u)]];
        m.visit = static_cast<double>(g.degree(u)) / two_m;
        m.exit = m.visit;
        for (const Neighbor& n : g.neighbors(u)) {
            m.links[module_of[index(n.id)]] += 1.0;
        }
    }

    double exit_total = 0.0;
    double exit_term = 0.0;
    double module_term = 0.0;
    for (const Module& m : modules) {
        exit_total += m.exit;
        exit_term += plogp(m.exit);
        module_term += plogp(m.exit + m.visit);
    }

    Rng rng(seed);
    constexpr double tolerance = 1e-12;
    while (true) {
        const double current = plogp(exit_total) - 2.0 * exit_term + module_term;
        double best_delta = 0.0;
        std::size_t best_a = 0;
        std::size_t best_b = 0;
        std::size_t ties = 0;
        for (std::size_t a = 0; a < modules.size(); ++a) {
            if (!modules[a].alive) {
                continue;
            }
            const Module& ma = modules[a];
            for (const auto& [b, edges] : ma.links) {
                if (b <= a) {
                    continue;
                }
                const Module& mb = modules[b];
                const double merged_exit = ma.exit + mb.exit - 2.0 * edges / two_m;
                const double merged_visit = ma.visit + mb.visit;
                const double new_total = exit_total - ma.exit - mb.exit + merged_exit;
                const double new_exit_term = exit_term - plogp(ma.exit) - plogp(mb.exit) + plogp(merged_exit);
                const double new_module_term = module_term - plogp(ma.exit + ma.visit) -
                                               plogp(mb.exit + mb.visit) + plogp(merged_exit + merged_visit);
                const double delta = plogp(new_total) - 2.0 * new_exit_term + new_module_term - current;
                if (delta < best_delta - tolerance) {
                    best_delta = delta;
                    best_a = a;
                    best_b = b;
                    ties = 1;
                }
                else if (ties > 0 && std::abs(delta - best_delta) <= tolerance) {
                    ++ties;
                    if (rng.below(ties) == 0) {
                        best_a = a;
                        best_b = b;
                    }
                }
            }
        }
        if (ties == 0) {
            break;
        }

        Module& keep = modules[best_a];
        Module& gone = modules[best_b];
        const double edges = keep.links[best_b];
        const double merged_exit = keep.exit + gone.exit - 2.0 * edges / two_m;
        exit_total += merged_exit - keep.exit - gone.exit;
        exit_term += plogp(merged_exit) - plogp(keep.exit) - plogp(gone.exit);
        module_term += plogp(merged_exit + keep.visit + gone.visit) - plogp(keep.exit + keep.visit) -
                       plogp(gone.exit + gone.visit);
        keep.exit = merged_exit;
        keep.visit += gone.visit;
        keep.members.insert(keep.members.end(), gone.members.begin(), gone.members.end());
        keep.links.erase(best_b);
        gone.links.erase(best_a);
        for (const auto& [other, count] : gone.links) {
            keep.links[other] += count;
            auto& back = modules[other].links;
            back.erase(best_b);
            back[best_a] += count;
        }
        gone.links.clear();
        gone.members.clear();
        gone.alive = false;
    }

    Partition out;
    for (auto& m : modules) {
        if (m.alive) {
            out.communities.push_back(std::move(m.members));
        }
    }
    out.canonicalize();
    return out;
}


/// Undirected weighted graph over dense indices; self holds edge weight inside a node.
struct Weighted {
    std::vector<double> vol;
    std::vector<double> self;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;
    double two_m = 0.0;
};

struct Codelength {
    double total = 0.0;
    double exit = 0.0;
    double module = 0.0;
    double value() const { return plogp(total) - 2.0 * exit + module; }
};

/// Single-node moves between modules until no move shortens the description. Returns whether anything moved.
bool local_moves(const Weighted& w, std::vector<std::size_t>& assign, Rng& rng)
{
    const std::size_t n = w.vol.size();
    std::vector<double> vol(n, 0.0);
    std::vector<double> inner(n, 0.0);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
        vol[assign[x]] += w.vol[x];
        inner[assign[x]] += w.self[x];
        ++count[assign[x]];
        for (const auto& [y, wt] : w.adj[x]) {
            if (y > x && assign[y] == assign[x]) {
                inner[assign[x]] += wt;
            }
        }
    }
    Codelength c;
    for (std::size_t m = 0; m < n; ++m) {
        const double e = (vol[m] - 2.0 * inner[m]) / w.two_m;
        c.total += e;
        c.exit += plogp(e);
        c.module += plogp(e + vol[m] / w.two_m);
    }

    std::vector<std::size_t> order(n);
    for (std::size_t x = 0; x < n; ++x) {
        order[x] = x;
    }
    constexpr double tolerance = 1e-12;
    bool moved = false;
    std::map<std::size_t, double> links;
    for (int sweep = 0; sweep < 100; ++sweep) {
        rng.shuffle(std::span<std::size_t>(order));
        bool changed = false;
        for (std::size_t x : order) {
            const std::size_t from = assign[x];
            links.clear();
            for (const auto& [y, wt] : w.adj[x]) {
                links[assign[y]] += wt;
            }
            if (count[from] > 1) {
                // An empty module lets x leave on its own.
                for (std::size_t m = 0; m < n; ++m) {
                    if (count[m] == 0) {
                        links.emplace(m, 0.0);
                        break;
                    }
                }
            }
            const double k_from = links.count(from) ? links[from] : 0.0;
            const double vol_a = vol[from] - w.vol[x];
            const double inner_a = inner[from] - w.self[x] - k_from;
            const double ea_old = (vol[from] - 2.0 * inner[from]) / w.two_m;
            const double ea_new = (vol_a - 2.0 * inner_a) / w.two_m;

            double best = 0.0;
            std::size_t target = from;
            std::size_t ties = 0;
            for (const auto& [to, k_to] : links) {
                if (to == from) {
                    continue;
                }
                const double vol_b = vol[to] + w.vol[x];
                const double inner_b = inner[to] + w.self[x] + k_to;
                const double eb_old = (vol[to] - 2.0 * inner[to]) / w.two_m;
                const double eb_new = (vol_b - 2.0 * inner_b) / w.two_m;
                Codelength next = c;
                next.total += ea_new + eb_new - ea_old - eb_old;
                next.exit += plogp(ea_new) + plogp(eb_new) - plogp(ea_old) - plogp(eb_old);
                next.module += plogp(ea_new + vol_a / w.two_m) + plogp(eb_new + vol_b / w.two_m) -
                               plogp(ea_old + vol[from] / w.two_m) - plogp(eb_old + vol[to] / w.two_m);
                const double delta = next.value() - c.value();
                if (delta < best - tolerance) {
                    best = delta;
                    target = to;
                    ties = 1;
                }
                else if (ties > 0 && std::abs(delta - best) <= tolerance && rng.below(++ties) == 0) {
                    target = to;
                }
            }
            if (target == from) {
                continue;
            }
            const double k_to = links[target];
            const double eb_old = (vol[target] - 2.0 * inner[target]) / w.two_m;
            const double mb_old = plogp(eb_old + vol[target] / w.two_m);
            const double ma_old = plogp(ea_old + vol[from] / w.two_m);
            vol[from] = vol_a;
            inner[from] = inner_a;
            --count[from];
            vol[target] += w.vol[x];
            inner[target] += w.self[x] + k_to;
            ++count[target];
            const double eb_new = (vol[target] - 2.0 * inner[target]) / w.two_m;
            c.total += ea_new + eb_new - ea_old - eb_old;
            c.exit += plogp(ea_new) + plogp(eb_new) - plogp(ea_old) - plogp(eb_old);
            c.module += plogp(ea_new + vol[from] / w.two_m) + plogp(eb_new + vol[target] / w.two_m) - ma_old - mb_old;
            assign[x] = target;
            changed = true;
        }
        if (!changed) {
            break;
        }
        moved = true;
    }
    return moved;
}

/// Collapses every module into one node; assign is relabelled to the new node indices.
Weighted collapse(const Weighted& w, std::vector<std::size_t>& assign)
{
    std::map<std::size_t, std::size_t> label;
    for (std::size_t m : assign) {
        label.emplace(m, label.size());
    }
    for (std::size_t& m : assign) {
        m = label[m];
    }
    Weighted out;
    out.two_m = w.two_m;
    out.vol.assign(label.size(), 0.0);
    out.self.assign(label.size(), 0.0);
    out.adj.resize(label.size());
    std::vector<std::map<std::size_t, double>> links(label.size());
    for (std::size_t x = 0; x < w.vol.size(); ++x) {
        const std::size_t a = assign[x];
        out.vol[a] += w.vol[x];
        out.self[a] += w.self[x];
        for (const auto& [y, wt] : w.adj[x]) {
            if (y <= x) {
                continue;
            }
            if (assign[y] == a) {
                out.self[a] += wt;
            }
            else {
                links[a][assign[y]] += wt;
                links[assign[y]][a] += wt;
            }
        }
    }
    for (std::size_t a = 0; a < links.size(); ++a) {
        out.adj[a].assign(links[a].begin(), links[a].end());
    }
    return out;
}

Weighted weighted(const SocialGraph& g, const std::vector<std::size_t>& dense)
{
    Weighted w;
    const auto& nodes = g.nodes();
    w.two_m = 2.0 * static_cast<double>(g.edge_count());
    w.vol.resize(nodes.size());
    w.self.assign(nodes.size(), 0.0);
    w.adj.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        w.vol[i] = static_cast<double>(g.degree(nodes[i]));
        for (const Neighbor& n : g.neighbors(nodes[i])) {
            w.adj[i].emplace_back(dense[index(n.id)], 1.0);
        }
    }
    return w;
}

Partition to_partition(const SocialGraph& g, const std::vector<std::size_t>& assign)
{
    std::map<std::size_t, std::vector<UserId>> groups;
    for (std::size_t i = 0; i < assign.size(); ++i) {
        groups[assign[i]].push_back(g.nodes()[i]);
    }
    Partition out;
    for (auto& [m, members] : groups) {
        out.communities.push_back(std::move(members));
    }
    out.canonicalize();
    return out;
}

} // namespace

Partition MapEquationDetector::detect(const SocialGraph& g, std::uint64_t seed) const
{
    if (g.edge_count() == 0) {
        return greedy_merge(g, seed);
    }
    const auto& nodes = g.nodes();
    std::vector<std::size_t> dense(g.universe(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        dense[index(nodes[i])] = i;
    }
    const Weighted base = weighted(g, dense);
    Rng rng(mix_seed(seed, 1));

    // Candidate one: pairwise merges, then node moves.
    const Partition merged = greedy_merge(g, seed);
    std::vector<std::size_t> first(nodes.size());
    for (std::size_t m = 0; m < merged.communities.size(); ++m) {
        for (UserId u : merged.communities[m]) {
            first[dense[index(u)]] = m;
        }
    }
    local_moves(base, first, rng);

    // Candidate two: multilevel node moves from singletons.
    std::vector<std::size_t> second(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        second[i] = i;
    }
    Weighted level = base;
    while (level.vol.size() > 1) {
        std::vector<std::size_t> assign(level.vol.size());
        for (std::size_t i = 0; i < assign.size(); ++i) {
            assign[i] = i;
        }
        if (!local_moves(level, assign, rng)) {
            break;
        }
        level = collapse(level, assign);
        for (std::size_t& m : second) {
            m = assign[m];
        }
    }
    local_moves(base, second, rng);

    Partition a = to_partition(g, first);
    Partition b = to_partition(g, second);
    return map_equation(g, b) < map_equation(g, a) - 1e-12 ? b : a;
}

Partition LabelPropagationDetector::detect(const SocialGraph& g, std::uint64_t seed) const
{
    std::vector<std::uint32_t> label(g.universe(), 0);
    for (UserId u : g.nodes()) {
        label[index(u)] = index(u);
    }
    Rng rng(seed);
    std::vector<UserId> order = g.nodes();
    std::map<std::uint32_t, int> votes;
    for (int sweep = 0; sweep < m_max_sweeps; ++sweep) {
        rng.shuffle(std::span<UserId>(order));
        bool changed = false;
        for (UserId u : order) {
            if (g.degree(u) == 0) {
                continue;
            }
            votes.clear();
            for (const Neighbor& n : g.neighbors(u)) {
                ++votes[label[index(n.id)]];
            }
            int best = 0;
            for (const auto& [l, count] : votes) {
                best = std::max(best, count);
            }
            // Keep the current label when it is among the most frequent.
            if (votes.count(label[index(u)]) && votes[label[index(u)]] == best) {
                continue;
            }
            std::vector<std::uint32_t> candidates;
            for (const auto& [l, count] : votes) {
                if (count == best) {
                    candidates.push_back(l);
                }
            }
            label[index(u)] = candidates[rng.below(candidates.size())];
            changed = true;
        }
        if (!changed) {
            break;
        }
    }
    std::map<std::uint32_t, std::vector<UserId>> groups;
    for (UserId u : g.nodes()) {
        groups[label[index(u)]].push_back(u);
    }
    Partition out;
    for (auto& [l, members] : groups) {
        out.communities.push_back(std::move(members));
    }
    out.canonicalize();
    return out;
}

Partition detect(const SocialGraph& g, std::uint64_t seed)
{
    return MapEquationDetector{}.detect(g, seed);
}

std::vector<Context> to_contexts(const Partition& p)
{
    std::vector<Context> out;
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.emplace_back(static_cast<int>(i), p.communities[i]);
    }
    return out;
}

} // namespace ici
