#include "ici/likelihood.h"
#include "ici/rng.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ici
{

void UpdateRule::validate() const
{
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("update rule: delta must lie in (0,1], got " + std::to_string(delta));
    }
    if (!(nabla >= 0.0 && nabla < 1.0)) {
        throw std::invalid_argument("update rule: nabla must lie in [0,1), got " + std::to_string(nabla));
    }
    if (delta < 5.0 * nabla) {
        throw std::invalid_argument("update rule: delta must be at least 5 * nabla");
    }
}

double likelihood_increase(double v, const UpdateRule& rule)
{
    return std::min(1.0, v + rule.delta);
}

double likelihood_decay(double v, const UpdateRule& rule)
{
    return std::max(0.0, v - rule.nabla);
}

double harmonic_mean(std::span<const double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("harmonic_mean: empty input");
    }
    double inverse_sum = 0.0;
    for (double v : values) {
        if (v <= 0.0) {
            return 0.0;
        }
        inverse_sum += 1.0 / v;
    }
    return std::min(1.0, static_cast<double>(values.size()) / inverse_sum);
}

double minimum(std::span<const double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("minimum: empty input");
    }
    return *std::min_element(values.begin(), values.end());
}

double aggregate(std::span<const double> history)
{
    if (history.empty()) {
        return 0.5;
    }
    double weighted = 0.0;
    double weights = 0.0;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const double w = static_cast<double>(i + 1);
        weighted += w * history[i];
        weights += w;
    }
    return weighted / weights;
}

namespace
{

constexpr std::uint64_t cell_hash(std::uint64_t seed, std::uint64_t kind, std::uint64_t a, std::uint64_t b,
                                  std::uint64_t c, std::uint64_t d)
{
    std::uint64_t h = splitmix64(seed ^ (kind << 56));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return splitmix64(h ^ d);
}

} // namespace

double DefaultRule::appropriateness(UserId owner, UserId who, TopicId t) const
{
    if (mode == Mode::Constant) {
        return constant;
    }
    return unit_interval(cell_hash(seed, 1, index(owner), index(who), index(t), 0));
}

double DefaultRule::knowledge(UserId owner, UserId knower, UserId subject, TopicId t) const
{
    if (mode == Mode::Constant) {
        return constant;
    }
    return unit_interval(cell_hash(seed, 2, index(owner), index(knower), index(subject), index(t)));
}

LikelihoodStore::LikelihoodStore(UserId owner, std::size_t user_count, std::size_t topic_count, UpdateRule rule,
                                 DefaultRule defaults)
    : m_owner(owner)
    , m_users(user_count)
    , m_topics(topic_count)
    , m_rule(rule)
    , m_defaults(defaults)
    , m_a_slot(user_count, -1)
    , m_k_slot(user_count, -1)
{
    m_rule.validate();
    if (defaults.mode == DefaultRule::Mode::Constant && !(defaults.constant >= 0.0 && defaults.constant <= 1.0)) {
        throw std::invalid_argument("likelihood store: default value outside [0,1]");
    }
}

void LikelihoodStore::check(UserId u, TopicId t) const
{
    if (index(u) >= m_users || index(t) >= m_topics) {
        throw std::out_of_range("likelihood store: user or topic out of range");
    }
}

double LikelihoodStore::current(const Cell& c, double fallback) const
{
    const double start = c.value < 0.0 ? fallback : c.value;
    const double elapsed = static_cast<double>(m_clock - c.stamp);
    return std::max(0.0, start - m_rule.nabla * elapsed);
}

void LikelihoodStore::store(Cell& c, double value)
{
    c.value = value;
    c.stamp = m_clock;
}

double LikelihoodStore::a(UserId who, TopicId t) const
{
    check(who, t);
    const double fallback = m_defaults.appropriateness(m_owner, who, t);
    const auto slot = m_a_slot[index(who)];
    if (slot < 0) {
        return current(Cell{}, fallback);
    }
    return current(m_a[slot][index(t)], fallback);
}

double LikelihoodStore::k(UserId knower, UserId subject, TopicId t) const
{
    check(knower, t);
    check(subject, t);
    if (knower == subject) {
        throw std::invalid_argument("likelihood store: knowledge of a user about itself is undefined");
    }
    const double fallback = m_defaults.knowledge(m_owner, knower, subject, t);
    const auto slot = m_k_slot[index(knower)];
    if (slot < 0) {
        return current(Cell{}, fallback);
    }
    return current(m_k[slot][index(subject) * m_topics + index(t)], fallback);
}

LikelihoodStore::Cell& LikelihoodStore::a_cell(UserId who, TopicId t)
{
    check(who, t);
    auto& slot = m_a_slot[index(who)];
    if (slot < 0) {
        slot = static_cast<std::int32_t>(m_a.size());
        m_a.emplace_back(m_topics);
    }
    return m_a[slot][index(t)];
}

LikelihoodStore::Cell& LikelihoodStore::k_cell(UserId knower, UserId subject, TopicId t)
{
    check(knower, t);
    check(subject, t);
    if (knower == subject) {
        throw std::invalid_argument("likelihood store: knowledge of a user about itself is undefined");
    }
    auto& slot = m_k_slot[index(knower)];
    if (slot < 0) {
        slot = static_cast<std::int32_t>(m_k.size());
        m_k.emplace_back(m_users * m_topics);
    }
    return m_k[slot][index(subject) * m_topics + index(t)];
}

void LikelihoodStore::increase_a(UserId who, TopicId t)
{
    Cell& c = a_cell(who, t);
    store(c, likelihood_increase(current(c, m_defaults.appropriateness(m_owner, who, t)), m_rule));
}

void LikelihoodStore::increase_k(UserId knower, UserId subject, TopicId t)
{
    Cell& c = k_cell(knower, subject, t);
    store(c, likelihood_increase(current(c, m_defaults.knowledge(m_owner, knower, subject, t)), m_rule));
}

void LikelihoodStore::set_a(UserId who, TopicId t, double value)
{
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument("likelihood store: value outside [0,1]");
    }
    store(a_cell(who, t), value);
}

void LikelihoodStore::set_k(UserId knower, UserId subject, TopicId t, double value)
{
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument("likelihood store: value outside [0,1]");
    }
    store(k_cell(knower, subject, t), value);
}

void ExchangeList::append(double v)
{
    m_values.push_back(v);
    m_weighted_sum += static_cast<double>(m_values.size()) * v;
}

double ExchangeList::aggregate() const
{
    if (m_values.empty()) {
        return 0.5;
    }
    const double n = static_cast<double>(m_values.size());
    return m_weighted_sum / (n * (n + 1.0) / 2.0);
}

namespace
{

double list_aggregate(const std::map<UserId, ExchangeList>& lists, UserId peer)
{
    const auto it = lists.find(peer);
    return it == lists.end() ? 0.5 : it->second.aggregate();
}

} // namespace

double ExchangeLists::appropriateness_aggregate(UserId peer) const
{
    return list_aggregate(appropriateness, peer);
}

double ExchangeLists::knowledge_aggregate(UserId peer) const
{
    return list_aggregate(knowledge, peer);
}

} // namespace ici
