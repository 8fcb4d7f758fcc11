#include "ici/model.h"

#include <algorithm>
#include <stdexcept>

namespace ici
{

namespace
{

std::vector<double>& scratch()
{
    thread_local std::vector<double> buffer;
    buffer.clear();
    return buffer;
}

std::size_t overlap(const std::vector<UserId>& a, const std::vector<UserId>& b)
{
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        }
        else if (*j < *i) {
            ++j;
        }
        else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

} // namespace

std::vector<std::size_t> shared_contexts(std::span<const Context> contexts, UserId u)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (contexts[i].contains(u)) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> message_context(const Message& msg, std::span<const Context> contexts)
{
    std::vector<UserId> involved = msg.receivers;
    involved.insert(involved.end(), msg.tagged.begin(), msg.tagged.end());
    canonicalize(involved);

    std::vector<std::size_t> best;
    std::size_t best_overlap = 0;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        const std::size_t n = overlap(contexts[i].members, involved);
        if (n > best_overlap) {
            best_overlap = n;
            best.clear();
        }
        if (n == best_overlap) {
            best.push_back(i);
        }
    }
    return best;
}

double context_appropriateness(const LikelihoodStore& store, const Context& context, std::span<const TopicId> topics,
                               CombineFn combine)
{
    if (topics.empty()) {
        throw std::invalid_argument("context_appropriateness: empty topic set");
    }
    auto& values = scratch();
    for (UserId member : context.members) {
        if (member == store.owner()) {
            continue;
        }
        for (TopicId t : topics) {
            values.push_back(store.a(member, t));
        }
    }
    return values.empty() ? 1.0 : combine(values);
}

double message_appropriateness(const LikelihoodStore& store, const Message& msg, std::span<const Context> contexts,
                               CombineFn combine)
{
    double lowest = 1.0;
    for (std::size_t i : message_context(msg, contexts)) {
        lowest = std::min(lowest, context_appropriateness(store, contexts[i], msg.topics, combine));
    }
    return lowest;
}

double context_knowledge(const LikelihoodStore& store, const Context& context, UserId subject,
                         std::span<const TopicId> topics, CombineFn combine)
{
    if (topics.empty()) {
        throw std::invalid_argument("context_knowledge: empty topic set");
    }
    auto& values = scratch();
    for (UserId member : context.members) {
        if (member == subject || member == store.owner()) {
            continue;
        }
        for (TopicId t : topics) {
            values.push_back(store.k(member, subject, t));
        }
    }
    return values.empty() ? 1.0 : combine(values);
}

double message_knowledge(const LikelihoodStore& store, const Message& msg, std::span<const Context> contexts,
                         CombineFn combine)
{
    double lowest = 1.0;
    for (UserId s : msg.tagged) {
        for (const Context& c : contexts) {
            if (!c.contains(s)) {
                continue;
            }
            const bool shared_with_receiver = std::any_of(msg.receivers.begin(), msg.receivers.end(),
                                                          [&](UserId r) { return c.contains(r); });
            if (shared_with_receiver) {
                lowest = std::min(lowest, context_knowledge(store, c, s, msg.topics, combine));
            }
        }
    }
    return lowest;
}

} // namespace ici
