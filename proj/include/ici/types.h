#ifndef ICI_TYPES_H
#define ICI_TYPES_H

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <vector>

namespace ici
{

/// Index of a user in the simulated network (0-based).
enum class UserId : std::uint32_t
{
};

/// Index of a topic in [0, topic count).
enum class TopicId : std::uint32_t
{
};

constexpr std::uint32_t index(UserId u)
{
    return static_cast<std::uint32_t>(u);
}

constexpr std::uint32_t index(TopicId t)
{
    return static_cast<std::uint32_t>(t);
}

constexpr UserId user(std::uint32_t i)
{
    return static_cast<UserId>(i);
}

constexpr TopicId topic(std::uint32_t i)
{
    return static_cast<TopicId>(i);
}

/// Sorts and deduplicates a vector in place.
template <class T>
void canonicalize(std::vector<T>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <class T>
bool contains_sorted(const std::vector<T>& v, T x)
{
    return std::binary_search(v.begin(), v.end(), x);
}

/**
 * An information exchange <sender, receivers, topics, tagged users>.
 * All member sets are kept sorted and free of duplicates.
 */
struct Message {
    UserId sender{};
    std::vector<UserId> receivers;
    std::vector<TopicId> topics;
    std::vector<UserId> tagged;

    Message() = default;
    Message(UserId from, std::vector<UserId> to, std::vector<TopicId> about, std::vector<UserId> tags = {});

    bool operator==(const Message&) const = default;
};

/// Throws std::invalid_argument unless receivers and topics are non-empty and the sender is not a receiver.
void validate(const Message& msg);

/// A group of users interacting in one setting. Members are sorted.
struct Context {
    int id = 0;
    std::vector<UserId> members;

    Context() = default;
    Context(int context_id, std::vector<UserId> users);

    bool contains(UserId u) const
    {
        return contains_sorted(members, u);
    }

    bool operator==(const Context&) const = default;
};

enum class AlertKind
{
    Inappropriate,
    Dissemination,
};

/// Alert text shown to the user. The first string keeps its historical spelling.
constexpr std::string_view alert_text(AlertKind kind)
{
    return kind == AlertKind::Inappropriate ? "This may be inappropiate"
                                            : "This may disseminate sensitive information";
}

} // namespace ici

#endif
