#ifndef ICI_SIM_H
#define ICI_SIM_H

#include "ici/agent.h"
#include "ici/graph.h"
#include "ici/likelihood.h"
#include "ici/netgen.h"
#include "ici/rng.h"
#include "ici/types.h"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

namespace ici
{

enum class UserType
{
    Compliant,
    Random,
    Obedient,
    RelationshipBased,
    Malicious,
};

inline constexpr std::size_t user_type_count = 5;
inline constexpr std::array<UserType, user_type_count> all_user_types = {
    UserType::Compliant, UserType::Random, UserType::Obedient, UserType::RelationshipBased, UserType::Malicious};

std::string_view name(UserType type);
/// Throws std::invalid_argument for unknown names.
UserType parse_user_type(std::string_view text);

/// Users of these types run an assistant.
constexpr bool uses_assistant(UserType type)
{
    return type == UserType::Obedient || type == UserType::RelationshipBased;
}

/// A piece of information a user can share: subject's association with a topic.
struct Fact {
    UserId subject{};
    TopicId topic{};
    bool operator==(const Fact&) const = default;
};

class KnowledgeBase
{
public:
    KnowledgeBase(std::size_t user_count, std::size_t topic_count);

    /// Returns true if the fact was new.
    bool learn(Fact f);
    bool knows(Fact f) const;
    /// Facts in the order they were learned.
    std::span<const Fact> facts() const
    {
        return m_facts;
    }
    std::size_t size() const
    {
        return m_facts.size();
    }

private:
    std::size_t m_topics;
    std::vector<bool> m_known;
    std::vector<Fact> m_facts;
};

/// Ground-truth sharing norms. Never visible to assistants.
class NormSet
{
public:
    NormSet() = default;
    NormSet(std::size_t context_count, std::size_t user_count, std::size_t topic_count);

    void add_inappropriate(TopicId t, int context);
    void add_sensitive(UserId u, TopicId t, int context);

    bool inappropriate(TopicId t, int context) const;
    bool sensitive(UserId u, TopicId t, int context) const;

    std::vector<std::pair<TopicId, int>> inappropriate_norms() const;
    const std::vector<std::tuple<UserId, TopicId, int>>& sensitive_norms() const
    {
        return m_sensitive_list;
    }
    std::size_t inappropriate_count(int context) const;
    std::size_t sensitive_count(int context) const;

private:
    std::size_t m_contexts = 0;
    std::size_t m_topics = 0;
    std::vector<bool> m_inappropriate;           // context x topic
    std::vector<std::vector<int>> m_sensitive;   // user x topic -> context ids
    std::vector<std::tuple<UserId, TopicId, int>> m_sensitive_list;
};

/// Upper bound of the per-context inappropriate-topic count: max(1, ceil(ratio * topics)).
std::size_t inappropriate_cap(double ratio, std::size_t topics);
/// Upper bound of the per-context sensitive-association count: max(1, ceil(ratio * topics * users)).
std::size_t sensitive_cap(double ratio, std::size_t topics, std::size_t users);

/**
 * Per context: a uniform count in [1, inappropriate_cap] of distinct
 * inappropriate topics and a uniform count in [1, sensitive_cap] of distinct
 * sensitive (member, topic) pairs, capped by the number of such pairs.
 */
NormSet generate_norms(std::span<const Context> contexts, std::size_t topics, std::size_t users,
                       double inappropriate_ratio, double sensitive_ratio, std::uint64_t seed);

/// True iff some topic of msg is inappropriate in one of its (ground-truth) message contexts.
bool violates_appropriateness(const Message& msg, const NormSet& norms, std::span<const Context> contexts);
/// True iff some tagged s, receiver r and topic t have a common context c with (s, t, c) sensitive.
bool violates_sensitiveness(const Message& msg, const NormSet& norms, std::span<const Context> contexts);

/// Whether a user continues after an alert. Throws std::logic_error for types without an assistant.
bool decide(UserType type, AlertKind alert, const Message& msg, const SocialGraph& g);

struct TypeMix {
    std::array<double, user_type_count> ratio{};

    double& operator[](UserType t)
    {
        return ratio[static_cast<std::size_t>(t)];
    }
    double operator[](UserType t) const
    {
        return ratio[static_cast<std::size_t>(t)];
    }
    /// Throws std::invalid_argument unless ratios are non-negative and sum to 1.
    void validate() const;
    /// Largest-remainder apportionment of n users.
    std::array<std::size_t, user_type_count> counts(std::size_t n) const;

    static TypeMix only(UserType t)
    {
        TypeMix m;
        m[t] = 1.0;
        return m;
    }
};

struct SimConfig {
    NetGenConfig netgen;
    std::size_t topics = 36;
    std::size_t max_topics_per_msg = 36;
    double max_inappropriate_ratio = 0.10;
    double max_sensitive_ratio = 0.01;
    std::size_t steps = 2000;
    std::size_t runs = 100;
    TypeMix type_mix = TypeMix::only(UserType::Random);
    std::optional<TopicId> malicious_topic;
    std::uint64_t seed = 1;
    UpdateRule rule;
    /// Share of topics each user initially knows about itself.
    double initial_topic_ratio = 0.25;
    /// Rejection-sampling budget of compliant users.
    std::size_t compose_attempts = 50;

    /// Throws std::invalid_argument on inconsistent values.
    void validate() const;
};

/// Ground truth shared by the composer and the judge.
struct GroundTruth {
    std::vector<Context> contexts;
    std::vector<int> context_of; // user -> index into contexts, -1 if none
    NormSet norms;
    TopicId malicious_topic{};
};

/// Partition-based judges; same verdicts as the overloads above for the ground-truth partition.
bool violates_appropriateness(const Message& msg, const GroundTruth& truth);
bool violates_sensitiveness(const Message& msg, const GroundTruth& truth);

struct Draft {
    Message message;
    std::vector<Fact> facts;
};

/**
 * Composes the message `sender` would like to send this step, or nothing.
 * Compliant users resample until the message breaks no norm; malicious users
 * always mention the malicious topic.
 */
std::optional<Draft> compose_message(UserId sender, UserType type, const KnowledgeBase& kb, const SocialGraph& g,
                                     const GroundTruth& truth, const SimConfig& cfg, Rng& rng);

struct Counters {
    std::uint64_t attempted = 0;
    std::uint64_t sent = 0;
    std::uint64_t inappropriate = 0;
    std::uint64_t disseminations = 0;
    std::uint64_t alerts_raised = 0;
    std::uint64_t alerts_not_followed = 0;

    Counters& operator+=(const Counters& o);
    bool operator==(const Counters&) const = default;
};

/// Per-step, per-user-type counters of one run.
struct Metrics {
    std::array<std::size_t, user_type_count> users{};
    std::vector<std::array<Counters, user_type_count>> per_step;

    const Counters& at(std::size_t step, UserType t) const
    {
        return per_step[step][static_cast<std::size_t>(t)];
    }
    /// Sum over steps [from, to).
    Counters window(UserType t, std::size_t from, std::size_t to) const;
    Counters total(UserType t) const
    {
        return window(t, 0, per_step.size());
    }
    bool operator==(const Metrics&) const = default;
};

/// One simulated network with its users, assistants and ground truth.
class Simulation
{
public:
    explicit Simulation(const SimConfig& cfg);
    ~Simulation();
    Simulation(Simulation&&) noexcept;
    Simulation& operator=(Simulation&&) noexcept;

    /// One step: every user (shuffled) sends at most one message, then every assistant ticks.
    void step();
    void run();

    const SimConfig& config() const;
    const SocialGraph& graph() const;
    const GroundTruth& truth() const;
    const Metrics& metrics() const;
    UserType type_of(UserId u) const;
    const KnowledgeBase& knowledge(UserId u) const;
    /// The user's assistant, or nullptr.
    const Agent* agent(UserId u) const;

    /// Called for every delivered message.
    using SentHook = std::function<void(const Draft&, UserType)>;
    void on_sent(SentHook hook);

private:
    struct World;
    std::unique_ptr<World> m_world;
};

/// Runs one simulation to completion.
Metrics run_simulation(const SimConfig& cfg);

} // namespace ici

#endif
