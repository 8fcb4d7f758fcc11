#ifndef ICI_LIKELIHOOD_H
#define ICI_LIKELIHOOD_H

#include "ici/types.h"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace ici
{

/// Constant increase/decay amounts applied to every likelihood value.
struct UpdateRule {
    double delta = 0.1;
    double nabla = 0.01;

    /// Throws std::invalid_argument unless delta in (0,1], nabla in [0,1) and delta >= 5 * nabla.
    void validate() const;

    bool operator==(const UpdateRule&) const = default;
};

double likelihood_increase(double v, const UpdateRule& rule);
double likelihood_decay(double v, const UpdateRule& rule);

/// Strategy that folds a non-empty set of likelihoods into one value in [0,1].
using CombineFn = double (*)(std::span<const double>);

/// Harmonic mean; 0 if any value is 0. Throws std::invalid_argument on empty input.
double harmonic_mean(std::span<const double> values);

/// Minimum of the values, for extremely cautious users. Throws on empty input.
double minimum(std::span<const double> values);

/// Mean weighted by 1-based position, so later entries count more. Empty input yields 0.5.
double aggregate(std::span<const double> history);

/**
 * Value given to a likelihood that has never been written.
 *
 * Uniform mode hashes (seed, owner, cell) so a cell always reads the same
 * value no matter when or how often it is inspected.
 */
struct DefaultRule {
    enum class Mode
    {
        Constant,
        Uniform,
    };
    Mode mode = Mode::Constant;
    double constant = 0.5;
    std::uint64_t seed = 0;

    static DefaultRule fixed(double value = 0.5)
    {
        return {Mode::Constant, value, 0};
    }
    static DefaultRule uniform(std::uint64_t seed)
    {
        return {Mode::Uniform, 0.5, seed};
    }

    double appropriateness(UserId owner, UserId who, TopicId t) const;
    double knowledge(UserId owner, UserId knower, UserId subject, TopicId t) const;

    bool operator==(const DefaultRule&) const = default;
};

/**
 * The appropriateness (a) and knowledge (k) likelihoods held by one assistant.
 *
 * Every cell exists conceptually from construction at its default value and
 * loses rule.nabla per tick, floored at 0. Decay is applied in closed form
 * when a cell is read or written, so tick() is O(1). Rows are allocated the
 * first time a user's cell is written; unwritten cells cost no memory.
 */
class LikelihoodStore
{
public:
    LikelihoodStore(UserId owner, std::size_t user_count, std::size_t topic_count, UpdateRule rule = {},
                    DefaultRule defaults = DefaultRule::fixed());

    UserId owner() const
    {
        return m_owner;
    }
    std::size_t user_count() const
    {
        return m_users;
    }
    std::size_t topic_count() const
    {
        return m_topics;
    }
    const UpdateRule& rule() const
    {
        return m_rule;
    }
    std::uint32_t clock() const
    {
        return m_clock;
    }

    /// a_who^t: likelihood that `who` approves exchanging information about t.
    double a(UserId who, TopicId t) const;
    /// k_knower^{subject,t}: likelihood that `knower` knows subject's association with t.
    double k(UserId knower, UserId subject, TopicId t) const;

    void increase_a(UserId who, TopicId t);
    void increase_k(UserId knower, UserId subject, TopicId t);
    void set_a(UserId who, TopicId t, double value);
    void set_k(UserId knower, UserId subject, TopicId t, double value);

    /// One step of passing time: every a and k cell decays by rule.nabla.
    void tick()
    {
        ++m_clock;
    }

    bool operator==(const LikelihoodStore&) const = default;

private:
    struct Cell {
        double value = -1.0; // < 0 marks a cell still at its default
        std::uint32_t stamp = 0;
        bool operator==(const Cell&) const = default;
    };

    double current(const Cell& c, double fallback) const;
    void store(Cell& c, double value);
    Cell& a_cell(UserId who, TopicId t);
    Cell& k_cell(UserId knower, UserId subject, TopicId t);
    void check(UserId u, TopicId t) const;

    UserId m_owner;
    std::size_t m_users;
    std::size_t m_topics;
    UpdateRule m_rule;
    DefaultRule m_defaults;
    std::uint32_t m_clock = 0;
    std::vector<std::int32_t> m_a_slot; // user -> row in m_a or -1
    std::vector<std::int32_t> m_k_slot;
    std::vector<std::vector<Cell>> m_a; // row: topics
    std::vector<std::vector<Cell>> m_k; // row: subjects x topics
};

/// Append-only history of message values exchanged with one peer.
class ExchangeList
{
public:
    void append(double v);
    /// Same value as ici::aggregate(values()), maintained incrementally.
    double aggregate() const;
    const std::vector<double>& values() const
    {
        return m_values;
    }
    bool operator==(const ExchangeList&) const = default;

private:
    std::vector<double> m_values;
    double m_weighted_sum = 0.0;
};

/// Per-peer appropriateness and knowledge exchange histories.
struct ExchangeLists {
    std::map<UserId, ExchangeList> appropriateness;
    std::map<UserId, ExchangeList> knowledge;

    double appropriateness_aggregate(UserId peer) const;
    double knowledge_aggregate(UserId peer) const;

    bool operator==(const ExchangeLists&) const = default;
};

} // namespace ici

#endif
