#ifndef ICI_COMMUNITY_H
#define ICI_COMMUNITY_H

#include "ici/graph.h"
#include "ici/types.h"

#include <cstdint>
#include <vector>

namespace ici
{

/// Disjoint non-empty communities. Canonical form: members sorted, communities ordered by first member.
struct Partition {
    std::vector<std::vector<UserId>> communities;

    void canonicalize();
    std::size_t size() const
    {
        return communities.size();
    }
    bool operator==(const Partition&) const = default;
};

/// Two-level map equation (bits) of a partition of g. Throws std::invalid_argument if g has no edges
/// or p does not partition g's nodes.
double map_equation(const SocialGraph& g, const Partition& p);

class CommunityDetector
{
public:
    virtual ~CommunityDetector() = default;
    virtual Partition detect(const SocialGraph& g, std::uint64_t seed) const = 0;
};

/**
 * Map-equation minimizer. Two candidates are built: greedy pairwise merging of
 * adjacent modules from singletons, and multilevel single-node moves with
 * module collapsing. Both are polished by node moves and the one with the
 * shorter description wins. Ties between equal moves are broken by the seed.
 */
class MapEquationDetector : public CommunityDetector
{
public:
    Partition detect(const SocialGraph& g, std::uint64_t seed) const override;
};

/// Asynchronous label propagation with seeded visiting order and tie-breaking.
class LabelPropagationDetector : public CommunityDetector
{
public:
    explicit LabelPropagationDetector(int max_sweeps = 100)
        : m_max_sweeps(max_sweeps)
    {
    }
    Partition detect(const SocialGraph& g, std::uint64_t seed) const override;

private:
    int m_max_sweeps;
};

/// Default detection (map equation).
Partition detect(const SocialGraph& g, std::uint64_t seed);

/// Contexts with ids 0..n-1 in partition order.
std::vector<Context> to_contexts(const Partition& p);

} // namespace ici

#endif
