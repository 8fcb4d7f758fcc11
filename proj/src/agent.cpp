#include "ici/agent.h"
#include "ici/model.h"

#include <stdexcept>
#include <utility>

namespace ici
{

Agent::Agent(UserId owner, std::size_t user_count, std::size_t topic_count, UpdateRule rule, DefaultRule defaults,
             CombineFn combine)
    : m_store(owner, user_count, topic_count, rule, defaults)
    , m_combine(combine)
{
    if (!combine) {
        throw std::invalid_argument("agent: combine function is required");
    }
}

void Agent::set_view(std::vector<UserId> friends, std::vector<Context> contexts)
{
    canonicalize(friends);
    std::erase(friends, owner());
    for (Context& c : contexts) {
        std::erase(c.members, owner());
    }
    std::erase_if(contexts, [](const Context& c) { return c.members.empty(); });
    m_friends = std::move(friends);
    m_contexts = std::move(contexts);
}

void Agent::refresh_contexts(const SocialGraph& ego, const CommunityDetector& detector, std::uint64_t seed)
{
    std::vector<UserId> friends = ego.nodes();
    std::vector<Context> contexts;
    if (!friends.empty()) {
        contexts = to_contexts(detector.detect(ego, seed));
    }
    set_view(std::move(friends), std::move(contexts));
    m_last_ego = ego;
    m_observed = true;
}

bool Agent::observe(const SocialGraph& g, const CommunityDetector& detector, std::uint64_t seed)
{
    SocialGraph ego = ego_network(g, owner());
    if (m_observed && ego == m_last_ego) {
        return false;
    }
    refresh_contexts(ego, detector, seed);
    return true;
}

void Agent::receive(const Message& msg)
{
    const UserId self = owner();
    if (msg.sender == self || !contains_sorted(msg.receivers, self)) {
        throw std::logic_error("agent: received a message not addressed to its owner");
    }
    const UserId from = msg.sender;

    // Lists take the values computed before this message updates any likelihood.
    m_lists.appropriateness[from].append(message_appropriateness(m_store, msg, m_contexts, m_combine));
    m_lists.knowledge[from].append(message_knowledge(m_store, msg, m_contexts, m_combine));

    const bool sender_in_view = in_view(from);
    for (TopicId t : msg.topics) {
        m_store.increase_a(from, t);
        for (UserId s : msg.tagged) {
            if (sender_in_view && s != from) {
                m_store.increase_k(from, s, t);
            }
            for (UserId r : msg.receivers) {
                if (r != self && r != s && in_view(r)) {
                    m_store.increase_k(r, s, t);
                }
            }
        }
    }
}

void Agent::enqueue(Message msg)
{
    m_inbox.push_back(std::move(msg));
}

void Agent::process_inbox()
{
    while (!m_inbox.empty()) {
        Message msg = std::move(m_inbox.front());
        m_inbox.pop_front();
        receive(msg);
    }
}

SendOutcome Agent::request_send(const Message& msg, const DecisionCallback& decide)
{
    if (msg.sender != owner()) {
        throw std::logic_error("agent: asked to send a message on behalf of another user");
    }
    SendOutcome outcome;
    const double appropriateness = message_appropriateness(m_store, msg, m_contexts, m_combine);
    const double knowledge = message_knowledge(m_store, msg, m_contexts, m_combine);

    auto check = [&](AlertKind kind, double value, auto&& history) {
        for (UserId r : msg.receivers) {
            if (value < history(r)) {
                outcome.alerts.push_back(kind);
                return decide(kind, msg);
            }
        }
        return true;
    };
    if (!check(AlertKind::Inappropriate, appropriateness,
               [this](UserId r) { return m_lists.appropriateness_aggregate(r); }) ||
        !check(AlertKind::Dissemination, knowledge, [this](UserId r) { return m_lists.knowledge_aggregate(r); })) {
        outcome.sent = false;
        return outcome;
    }

    for (UserId r : msg.receivers) {
        m_lists.appropriateness[r].append(appropriateness);
        m_lists.knowledge[r].append(knowledge);
        if (!in_view(r)) {
            continue;
        }
        for (TopicId t : msg.topics) {
            for (UserId s : msg.tagged) {
                if (s != r) {
                    m_store.increase_k(r, s, t);
                }
            }
        }
    }
    return outcome;
}

} // namespace ici
