#ifndef ICI_AGENT_H
#define ICI_AGENT_H

#include "ici/community.h"
#include "ici/graph.h"
#include "ici/likelihood.h"
#include "ici/types.h"

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

namespace ici
{

struct SendOutcome {
    bool sent = true;
    std::vector<AlertKind> alerts;

    /// True when an alert was raised and the message went out anyway.
    bool overridden() const
    {
        return sent && !alerts.empty();
    }
};

/// Asks the user whether to continue after an alert. Must not modify the agent.
using DecisionCallback = std::function<bool(AlertKind, const Message&)>;

/**
 * Information assistant for one user: learns appropriateness and knowledge
 * likelihoods from the traffic it sees and checks outgoing messages.
 *
 * Knowledge likelihoods are only kept for users in the owner's view (its
 * friends); updates about anybody else are dropped.
 */
class Agent
{
public:
    Agent(UserId owner, std::size_t user_count, std::size_t topic_count, UpdateRule rule = {},
          DefaultRule defaults = DefaultRule::fixed(), CombineFn combine = harmonic_mean);

    UserId owner() const
    {
        return m_store.owner();
    }
    const LikelihoodStore& store() const
    {
        return m_store;
    }
    LikelihoodStore& store()
    {
        return m_store;
    }
    const ExchangeLists& lists() const
    {
        return m_lists;
    }
    const std::vector<Context>& contexts() const
    {
        return m_contexts;
    }
    const std::vector<UserId>& friends() const
    {
        return m_friends;
    }
    bool in_view(UserId u) const
    {
        return contains_sorted(m_friends, u);
    }

    /// Sets the friend list and contexts directly (owner is dropped from both).
    void set_view(std::vector<UserId> friends, std::vector<Context> contexts);

    /// Replaces the contexts with the communities of the owner's ego network.
    void refresh_contexts(const SocialGraph& ego, const CommunityDetector& detector, std::uint64_t seed);

    /// Re-extracts the ego network from g and refreshes contexts if it changed. Returns true on refresh.
    bool observe(const SocialGraph& g, const CommunityDetector& detector, std::uint64_t seed);

    /// Passing of time: decays every likelihood once.
    void tick()
    {
        m_store.tick();
    }

    /// Processes one received message. Throws std::logic_error unless the owner is a receiver and not the sender.
    void receive(const Message& msg);

    void enqueue(Message msg);
    /// Receives every queued message in FIFO order.
    void process_inbox();
    std::size_t inbox_size() const
    {
        return m_inbox.size();
    }

    /**
     * Checks an outgoing message. At most one alert of each kind is raised,
     * appropriateness first. If the callback declines, nothing changes.
     * Throws std::logic_error if the owner is not the sender.
     */
    SendOutcome request_send(const Message& msg, const DecisionCallback& decide);

    bool operator==(const Agent&) const = default;

private:
    LikelihoodStore m_store;
    ExchangeLists m_lists;
    std::vector<UserId> m_friends;
    std::vector<Context> m_contexts;
    std::deque<Message> m_inbox;
    SocialGraph m_last_ego;
    bool m_observed = false;
    CombineFn m_combine;
};

} // namespace ici

#endif
