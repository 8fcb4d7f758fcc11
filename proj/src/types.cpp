#include "ici/types.h"

#include <stdexcept>
#include <utility>

namespace ici
{

Message::Message(UserId from, std::vector<UserId> to, std::vector<TopicId> about, std::vector<UserId> tags)
    : sender(from)
    , receivers(std::move(to))
    , topics(std::move(about))
    , tagged(std::move(tags))
{
    canonicalize(receivers);
    canonicalize(topics);
    canonicalize(tagged);
}

void validate(const Message& msg)
{
    if (msg.receivers.empty()) {
        throw std::invalid_argument("message has no receivers");
    }
    if (msg.topics.empty()) {
        throw std::invalid_argument("message has no topics");
    }
    if (contains_sorted(msg.receivers, msg.sender)) {
        throw std::invalid_argument("message sender is also a receiver");
    }
}

Context::Context(int context_id, std::vector<UserId> users)
    : id(context_id)
    , members(std::move(users))
{
    canonicalize(members);
}

} // namespace ici
