#ifndef ICI_RNG_H
#define ICI_RNG_H

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ici
{

/// SplitMix64 finalizer; a good 64-bit mixing function.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a tag.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag)
{
    return splitmix64(base ^ splitmix64(tag + 0x632BE59BD9B4E019ULL));
}

/// Maps 64 random bits to [0,1).
constexpr double unit_interval(std::uint64_t bits)
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/**
 * Seeded random source. The engine output is fixed by the standard, and the
 * range reductions below are written out so sequences are identical across
 * standard library implementations.
 */
class Rng
{
public:
    explicit Rng(std::uint64_t seed)
        : m_engine(seed)
    {
    }

    std::uint64_t next()
    {
        return m_engine();
    }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform integer in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi)
    {
        return lo + below(hi - lo + 1);
    }

    double uniform()
    {
        return unit_interval(next());
    }

    template <class T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

private:
    std::mt19937_64 m_engine;
};

} // namespace ici

#endif
