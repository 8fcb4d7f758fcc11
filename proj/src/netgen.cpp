#include "ici/netgen.h"
#include "ici/rng.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ici
{

void NetGenConfig::validate() const
{
    if (edges_per_node < 1 || edges_per_node >= users) {
        throw std::invalid_argument("netgen: need 1 <= edges per node < users (got m=" +
                                    std::to_string(edges_per_node) + ", n=" + std::to_string(users) + ")");
    }
    if (!(close_trusted_ratio >= 0.0 && close_trusted_ratio <= 1.0)) {
        throw std::invalid_argument("netgen: close/trusted ratio must lie in [0,1]");
    }
}

SocialGraph generate_network(const NetGenConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    Rng rng(seed);
    SocialGraph g(cfg.users);
    const std::size_t m = cfg.edges_per_node;

    // Every edge endpoint is listed once, so a uniform pick is degree-proportional.
    std::vector<UserId> endpoints;
    endpoints.reserve(2 * (m * (m + 1) / 2 + (cfg.users - m - 1) * m));
    for (std::uint32_t a = 0; a <= m; ++a) {
        for (std::uint32_t b = a + 1; b <= m; ++b) {
            g.add_edge(user(a), user(b));
            endpoints.push_back(user(a));
            endpoints.push_back(user(b));
        }
    }
    std::vector<UserId> targets;
    for (std::size_t i = m + 1; i < cfg.users; ++i) {
        const UserId fresh = user(static_cast<std::uint32_t>(i));
        targets.clear();
        while (targets.size() < m) {
            const UserId pick = endpoints[rng.below(endpoints.size())];
            if (!contains_sorted(targets, pick)) {
                targets.insert(std::lower_bound(targets.begin(), targets.end(), pick), pick);
            }
        }
        for (UserId t : targets) {
            g.add_edge(fresh, t);
            endpoints.push_back(fresh);
            endpoints.push_back(t);
        }
    }

    std::vector<Edge> edges = g.edges();
    const auto flagged = static_cast<std::size_t>(std::llround(cfg.close_trusted_ratio * edges.size()));
    // Partial Fisher-Yates: the first `flagged` slots become a uniform sample.
    for (std::size_t i = 0; i < flagged; ++i) {
        std::swap(edges[i], edges[i + rng.below(edges.size() - i)]);
        g.set_tie(edges[i].u, edges[i].v, TieStrength::CloseTrusted);
    }
    return g;
}

} // namespace ici
