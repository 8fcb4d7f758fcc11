#ifndef ICI_NETGEN_H
#define ICI_NETGEN_H

#include "ici/graph.h"

#include <cstddef>
#include <cstdint>

namespace ici
{

struct NetGenConfig {
    std::size_t users = 100;
    std::size_t edges_per_node = 2;
    double close_trusted_ratio = 0.10;

    /// Throws std::invalid_argument unless 1 <= edges_per_node < users and the ratio is in [0,1].
    void validate() const;
};

/**
 * Preferential-attachment graph: a fully connected core of m+1 users, then
 * each new user links to m distinct existing users with probability
 * proportional to degree. round(ratio * |E|) edges, drawn uniformly, are
 * flagged close/trusted.
 */
SocialGraph generate_network(const NetGenConfig& cfg, std::uint64_t seed);

} // namespace ici

#endif
