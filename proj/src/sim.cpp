#include "ici/sim.h"
#include "ici/community.h"
#include "ici/model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ici
{

namespace
{

constexpr std::array<std::string_view, user_type_count> type_names = {"compliant", "random", "obedient",
                                                                        "relationship-based", "malicious"};

enum SeedStream : std::uint64_t
{
    graph_stream = 1,
    truth_stream,
    norm_stream,
    type_stream,
    kb_stream,
    agent_default_stream,
    agent_context_stream,
    step_stream,
};

} // namespace

std::string_view name(UserType type)
{
    return type_names[static_cast<std::size_t>(type)];
}

UserType parse_user_type(std::string_view text)
{
    for (std::size_t i = 0; i < type_names.size(); ++i) {
        if (type_names[i] == text) {
            return all_user_types[i];
        }
    }
    if (text == "relationship" || text == "relationship_based") {
        return UserType::RelationshipBased;
    }
    throw std::invalid_argument("unknown user type '" + std::string(text) + "'");
}

KnowledgeBase::KnowledgeBase(std::size_t user_count, std::size_t topic_count)
    : m_topics(topic_count)
    , m_known(user_count * topic_count, false)
{
}

bool KnowledgeBase::learn(Fact f)
{
    const std::size_t slot = index(f.subject) * m_topics + index(f.topic);
    if (m_known.at(slot)) {
        return false;
    }
    m_known[slot] = true;
    m_facts.push_back(f);
    return true;
}

bool KnowledgeBase::knows(Fact f) const
{
    return m_known.at(index(f.subject) * m_topics + index(f.topic));
}

NormSet::NormSet(std::size_t context_count, std::size_t user_count, std::size_t topic_count)
    : m_contexts(context_count)
    , m_topics(topic_count)
    , m_inappropriate(context_count * topic_count, false)
    , m_sensitive(user_count * topic_count)
{
}

void NormSet::add_inappropriate(TopicId t, int context)
{
    m_inappropriate.at(static_cast<std::size_t>(context) * m_topics + index(t)) = true;
}

void NormSet::add_sensitive(UserId u, TopicId t, int context)
{
    auto& contexts = m_sensitive.at(index(u) * m_topics + index(t));
    if (!contains_sorted(contexts, context)) {
        contexts.insert(std::lower_bound(contexts.begin(), contexts.end(), context), context);
        m_sensitive_list.emplace_back(u, t, context);
    }
}

bool NormSet::inappropriate(TopicId t, int context) const
{
    if (context < 0 || static_cast<std::size_t>(context) >= m_contexts || index(t) >= m_topics) {
        return false;
    }
    return m_inappropriate[static_cast<std::size_t>(context) * m_topics + index(t)];
}

bool NormSet::sensitive(UserId u, TopicId t, int context) const
{
    const std::size_t slot = index(u) * m_topics + index(t);
    return slot < m_sensitive.size() && contains_sorted(m_sensitive[slot], context);
}

std::vector<std::pair<TopicId, int>> NormSet::inappropriate_norms() const
{
    std::vector<std::pair<TopicId, int>> out;
    for (std::size_t c = 0; c < m_contexts; ++c) {
        for (std::size_t t = 0; t < m_topics; ++t) {
            if (m_inappropriate[c * m_topics + t]) {
                out.emplace_back(topic(static_cast<std::uint32_t>(t)), static_cast<int>(c));
            }
        }
    }
    return out;
}

std::size_t NormSet::inappropriate_count(int context) const
{
    std::size_t n = 0;
    for (std::size_t t = 0; t < m_topics; ++t) {
        n += inappropriate(topic(static_cast<std::uint32_t>(t)), context);
    }
    return n;
}

std::size_t NormSet::sensitive_count(int context) const
{
    return static_cast<std::size_t>(std::count_if(m_sensitive_list.begin(), m_sensitive_list.end(),
                                                  [context](const auto& n) { return std::get<2>(n) == context; }));
}

namespace
{

std::size_t ceil_cap(double x)
{
    // Tolerate products such as 0.01 * 36 * 100 landing just above an integer.
    const double c = std::ceil(x - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(0.0, c)));
}

/// k distinct values from [0, n) (Floyd's algorithm).
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, Rng& rng)
{
    thread_local std::vector<char> taken;
    if (taken.size() < n) {
        taken.resize(n, 0);
    }
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    for (std::size_t j = n - k; j < n; ++j) {
        const std::size_t t = rng.below(j + 1);
        const std::size_t pick = taken[t] ? j : t;
        taken[pick] = 1;
        chosen.push_back(pick);
    }
    for (std::size_t c : chosen) {
        taken[c] = 0;
    }
    return chosen;
}

} // namespace

std::size_t inappropriate_cap(double ratio, std::size_t topics)
{
    return ceil_cap(ratio * static_cast<double>(topics));
}

std::size_t sensitive_cap(double ratio, std::size_t topics, std::size_t users)
{
    return ceil_cap(ratio * static_cast<double>(topics) * static_cast<double>(users));
}

NormSet generate_norms(std::span<const Context> contexts, std::size_t topics, std::size_t users,
                       double inappropriate_ratio, double sensitive_ratio, std::uint64_t seed)
{
    Rng rng(seed);
    NormSet norms(contexts.size(), users, topics);
    const std::size_t topic_cap = std::min(topics, inappropriate_cap(inappropriate_ratio, topics));
    const std::size_t pair_cap = sensitive_cap(sensitive_ratio, topics, users);
    for (std::size_t c = 0; c < contexts.size(); ++c) {
        const int id = static_cast<int>(c);
        const std::size_t n_topics = rng.between(1, topic_cap);
        for (std::size_t t : sample_distinct(topics, n_topics, rng)) {
            norms.add_inappropriate(topic(static_cast<std::uint32_t>(t)), id);
        }
        const auto& members = contexts[c].members;
        const std::size_t pairs = members.size() * topics;
        const std::size_t n_pairs = std::min(pairs, rng.between(1, pair_cap));
        for (std::size_t p : sample_distinct(pairs, n_pairs, rng)) {
            norms.add_sensitive(members[p / topics], topic(static_cast<std::uint32_t>(p % topics)), id);
        }
    }
    return norms;
}

bool violates_appropriateness(const Message& msg, const NormSet& norms, std::span<const Context> contexts)
{
    for (std::size_t c : message_context(msg, contexts)) {
        for (TopicId t : msg.topics) {
            if (norms.inappropriate(t, contexts[c].id)) {
                return true;
            }
        }
    }
    return false;
}

bool violates_sensitiveness(const Message& msg, const NormSet& norms, std::span<const Context> contexts)
{
    for (UserId s : msg.tagged) {
        for (const Context& c : contexts) {
            if (!c.contains(s)) {
                continue;
            }
            const bool reaches = std::any_of(msg.receivers.begin(), msg.receivers.end(),
                                             [&](UserId r) { return c.contains(r); });
            if (!reaches) {
                continue;
            }
            for (TopicId t : msg.topics) {
                if (norms.sensitive(s, t, c.id)) {
                    return true;
                }
            }
        }
    }
    return false;
}

bool violates_appropriateness(const Message& msg, const GroundTruth& truth)
{
    // Ground-truth contexts partition the users, so overlaps are counted per user.
    thread_local std::vector<std::size_t> hits;
    hits.assign(truth.contexts.size(), 0);
    std::size_t best = 0;
    auto count = [&](UserId u) {
        const int c = truth.context_of[index(u)];
        if (c >= 0) {
            best = std::max(best, ++hits[static_cast<std::size_t>(c)]);
        }
    };
    for (UserId r : msg.receivers) {
        count(r);
    }
    for (UserId s : msg.tagged) {
        if (!contains_sorted(msg.receivers, s)) {
            count(s);
        }
    }
    for (std::size_t c = 0; c < hits.size(); ++c) {
        if (hits[c] != best) {
            continue;
        }
        for (TopicId t : msg.topics) {
            if (truth.norms.inappropriate(t, truth.contexts[c].id)) {
                return true;
            }
        }
    }
    return false;
}

bool violates_sensitiveness(const Message& msg, const GroundTruth& truth)
{
    for (UserId s : msg.tagged) {
        const int c = truth.context_of[index(s)];
        if (c < 0) {
            continue;
        }
        const bool reaches = std::any_of(msg.receivers.begin(), msg.receivers.end(),
                                         [&](UserId r) { return truth.context_of[index(r)] == c; });
        if (!reaches) {
            continue;
        }
        const int id = truth.contexts[static_cast<std::size_t>(c)].id;
        for (TopicId t : msg.topics) {
            if (truth.norms.sensitive(s, t, id)) {
                return true;
            }
        }
    }
    return false;
}

bool decide(UserType type, AlertKind, const Message& msg, const SocialGraph& g)
{
    switch (type) {
    case UserType::Obedient:
        return false;
    case UserType::RelationshipBased:
        return std::all_of(msg.receivers.begin(), msg.receivers.end(),
                           [&](UserId r) { return g.is_close(msg.sender, r) && g.is_trusted(msg.sender, r); });
    default:
        throw std::logic_error("decide: user type " + std::string(name(type)) + " has no assistant");
    }
}

void TypeMix::validate() const
{
    double sum = 0.0;
    for (double r : ratio) {
        if (!(r >= 0.0)) {
            throw std::invalid_argument("type mix: ratios must be non-negative");
        }
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("type mix: ratios must sum to 1 (got " + std::to_string(sum) + ")");
    }
}

std::array<std::size_t, user_type_count> TypeMix::counts(std::size_t n) const
{
    std::array<std::size_t, user_type_count> out{};
    std::array<double, user_type_count> remainder{};
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < user_type_count; ++i) {
        const double exact = ratio[i] * static_cast<double>(n);
        out[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
        remainder[i] = exact - static_cast<double>(out[i]);
        assigned += out[i];
    }
    while (assigned < n) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < user_type_count; ++i) {
            if (remainder[i] > remainder[best] + 1e-12) {
                best = i;
            }
        }
        ++out[best];
        remainder[best] = -1.0;
        ++assigned;
    }
    return out;
}

void SimConfig::validate() const
{
    netgen.validate();
    if (topics < 1) {
        throw std::invalid_argument("config: need at least one topic");
    }
    if (max_topics_per_msg < 1) {
        throw std::invalid_argument("config: max topics per message must be >= 1");
    }
    auto unit = [](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument(std::string("config: ") + what + " must lie in [0,1]");
        }
    };
    unit(max_inappropriate_ratio, "max_inappropriate_ratio");
    unit(max_sensitive_ratio, "max_sensitive_ratio");
    unit(initial_topic_ratio, "initial_topic_ratio");
    rule.validate();
    type_mix.validate();
    if (malicious_topic && index(*malicious_topic) >= topics) {
        throw std::invalid_argument("config: malicious topic out of range");
    }
    if (compose_attempts < 1) {
        throw std::invalid_argument("config: compose attempts must be >= 1");
    }
}

std::optional<Draft> compose_message(UserId sender, UserType type, const KnowledgeBase& kb, const SocialGraph& g,
                                     const GroundTruth& truth, const SimConfig& cfg, Rng& rng)
{
    const auto friends = g.neighbors(sender);
    if (friends.empty() || kb.size() == 0) {
        return std::nullopt;
    }
    const auto known = kb.facts();
    const std::size_t attempts = type == UserType::Compliant ? cfg.compose_attempts : 1;
    thread_local std::vector<char> topic_seen;
    topic_seen.assign(cfg.topics, 0);
    Draft draft;
    Message& msg = draft.message;
    msg.sender = sender;
    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
        const std::size_t k = std::min<std::size_t>(rng.between(1, cfg.max_topics_per_msg), known.size());
        draft.facts.clear();
        msg.topics.clear();
        msg.tagged.clear();
        msg.receivers.clear();
        for (std::size_t i : sample_distinct(known.size(), k, rng)) {
            const Fact f = known[i];
            draft.facts.push_back(f);
            topic_seen[index(f.topic)] = 1;
            if (f.subject != sender) {
                msg.tagged.push_back(f.subject);
            }
        }
        if (type == UserType::Malicious) {
            topic_seen[index(truth.malicious_topic)] = 1;
            draft.facts.push_back(Fact{sender, truth.malicious_topic});
        }
        // Fields are filled in sorted order directly; scanning the topic flags also resets them.
        for (std::uint32_t t = 0; t < cfg.topics; ++t) {
            if (topic_seen[t]) {
                msg.topics.push_back(topic(t));
                topic_seen[t] = 0;
            }
        }
        canonicalize(msg.tagged);

        for (const Neighbor& n : friends) {
            msg.receivers.push_back(n.id);
        }
        const std::size_t receivers = rng.between(1, msg.receivers.size());
        for (std::size_t i = 0; i < receivers; ++i) {
            std::swap(msg.receivers[i], msg.receivers[i + rng.below(msg.receivers.size() - i)]);
        }
        msg.receivers.resize(receivers);
        std::sort(msg.receivers.begin(), msg.receivers.end());

        if (type == UserType::Compliant && (violates_appropriateness(msg, truth) || violates_sensitiveness(msg, truth))) {
            continue;
        }
        return draft;
    }
    return std::nullopt;
}

Counters& Counters::operator+=(const Counters& o)
{
    attempted += o.attempted;
    sent += o.sent;
    inappropriate += o.inappropriate;
    disseminations += o.disseminations;
    alerts_raised += o.alerts_raised;
    alerts_not_followed += o.alerts_not_followed;
    return *this;
}

Counters Metrics::window(UserType t, std::size_t from, std::size_t to) const
{
    Counters sum;
    to = std::min(to, per_step.size());
    for (std::size_t s = from; s < to; ++s) {
        sum += at(s, t);
    }
    return sum;
}

struct Simulation::World {
    SimConfig cfg;
    SocialGraph graph;
    GroundTruth truth;
    std::vector<UserType> types;
    std::vector<KnowledgeBase> kbs;
    std::vector<std::unique_ptr<Agent>> agents;
    std::vector<UserId> order;
    Rng rng;
    Metrics metrics;
    std::size_t step = 0;
    SentHook hook;

    explicit World(const SimConfig& config)
        : cfg(config)
        , rng(mix_seed(config.seed, step_stream))
    {
    }
};

namespace
{

/// Spreads types evenly along a sequence (smooth weighted round-robin).
std::vector<UserType> spread_types(const std::array<std::size_t, user_type_count>& counts, std::size_t n)
{
    std::vector<UserType> out;
    out.reserve(n);
    std::array<long long, user_type_count> credit{};
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = user_type_count;
        for (std::size_t t = 0; t < user_type_count; ++t) {
            credit[t] += static_cast<long long>(counts[t]);
            if (counts[t] > 0 && (best == user_type_count || credit[t] > credit[best])) {
                best = t;
            }
        }
        credit[best] -= static_cast<long long>(n);
        out.push_back(all_user_types[best]);
    }
    return out;
}

} // namespace

Simulation::Simulation(const SimConfig& cfg)
    : m_world(std::make_unique<World>(cfg))
{
    cfg.validate();
    World& w = *m_world;
    const std::size_t n = cfg.netgen.users;
    const std::uint64_t seed = cfg.seed;

    w.graph = generate_network(cfg.netgen, mix_seed(seed, graph_stream));
    const MapEquationDetector detector;
    w.truth.contexts = to_contexts(detector.detect(w.graph, mix_seed(seed, truth_stream)));
    w.truth.context_of.assign(n, -1);
    for (std::size_t c = 0; c < w.truth.contexts.size(); ++c) {
        for (UserId u : w.truth.contexts[c].members) {
            w.truth.context_of[index(u)] = static_cast<int>(c);
        }
    }
    w.truth.norms = generate_norms(w.truth.contexts, cfg.topics, n, cfg.max_inappropriate_ratio,
                                   cfg.max_sensitive_ratio, mix_seed(seed, norm_stream));
    if (cfg.malicious_topic) {
        w.truth.malicious_topic = *cfg.malicious_topic;
    }
    else {
        // The topic that is inappropriate in the most contexts.
        std::size_t best = 0;
        std::size_t best_count = 0;
        for (std::size_t t = 0; t < cfg.topics; ++t) {
            std::size_t count = 0;
            for (const Context& c : w.truth.contexts) {
                count += w.truth.norms.inappropriate(topic(static_cast<std::uint32_t>(t)), c.id);
            }
            if (count > best_count) {
                best = t;
                best_count = count;
            }
        }
        w.truth.malicious_topic = topic(static_cast<std::uint32_t>(best));
    }

    // Types are dealt along users grouped by context so every context gets close to the configured mix.
    Rng type_rng(mix_seed(seed, type_stream));
    std::vector<std::size_t> context_order(w.truth.contexts.size());
    for (std::size_t i = 0; i < context_order.size(); ++i) {
        context_order[i] = i;
    }
    type_rng.shuffle(std::span<std::size_t>(context_order));
    std::vector<UserId> dealing;
    for (std::size_t c : context_order) {
        std::vector<UserId> members = w.truth.contexts[c].members;
        type_rng.shuffle(std::span<UserId>(members));
        dealing.insert(dealing.end(), members.begin(), members.end());
    }
    const auto sequence = spread_types(cfg.type_mix.counts(n), n);
    w.types.assign(n, UserType::Random);
    for (std::size_t i = 0; i < dealing.size(); ++i) {
        w.types[index(dealing[i])] = sequence[i];
    }
    for (UserId u : w.graph.nodes()) {
        ++w.metrics.users[static_cast<std::size_t>(w.types[index(u)])];
    }

    Rng kb_rng(mix_seed(seed, kb_stream));
    const auto own_topics = static_cast<std::size_t>(std::llround(cfg.initial_topic_ratio * cfg.topics));
    w.kbs.assign(n, KnowledgeBase(n, cfg.topics));
    for (std::uint32_t u = 0; u < n; ++u) {
        for (std::size_t t : sample_distinct(cfg.topics, own_topics, kb_rng)) {
            w.kbs[u].learn(Fact{user(u), topic(static_cast<std::uint32_t>(t))});
        }
    }
    for (const auto& [u, t, c] : w.truth.norms.sensitive_norms()) {
        w.kbs[index(u)].learn(Fact{u, t});
        std::vector<UserId> insiders;
        for (const Neighbor& f : w.graph.neighbors(u)) {
            if (w.truth.contexts[static_cast<std::size_t>(c)].contains(f.id)) {
                insiders.push_back(f.id);
            }
        }
        if (!insiders.empty()) {
            w.kbs[index(insiders[kb_rng.below(insiders.size())])].learn(Fact{u, t});
        }
    }

    w.agents.resize(n);
    for (std::uint32_t u = 0; u < n; ++u) {
        if (!uses_assistant(w.types[u])) {
            continue;
        }
        auto agent = std::make_unique<Agent>(user(u), n, cfg.topics, cfg.rule,
                                             DefaultRule::uniform(mix_seed(mix_seed(seed, agent_default_stream), u)));
        agent->refresh_contexts(ego_network(w.graph, user(u)), detector,
                                mix_seed(mix_seed(seed, agent_context_stream), u));
        w.agents[u] = std::move(agent);
    }
    w.order = w.graph.nodes();
    w.metrics.per_step.reserve(cfg.steps);
}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

void Simulation::step()
{
    World& w = *m_world;
    w.metrics.per_step.emplace_back();
    auto& counters = w.metrics.per_step.back();
    w.rng.shuffle(std::span<UserId>(w.order));

    for (UserId u : w.order) {
        const UserType type = w.types[index(u)];
        const auto draft = compose_message(u, type, w.kbs[index(u)], w.graph, w.truth, w.cfg, w.rng);
        if (!draft) {
            continue;
        }
        Counters& c = counters[static_cast<std::size_t>(type)];
        ++c.attempted;
        if (Agent* agent = w.agents[index(u)].get()) {
            const SendOutcome outcome = agent->request_send(
                draft->message, [&](AlertKind kind, const Message& m) { return decide(type, kind, m, w.graph); });
            c.alerts_raised += outcome.alerts.empty() ? 0 : 1;
            c.alerts_not_followed += outcome.overridden() ? 1 : 0;
            if (!outcome.sent) {
                continue;
            }
        }
        ++c.sent;
        c.inappropriate += violates_appropriateness(draft->message, w.truth);
        c.disseminations += violates_sensitiveness(draft->message, w.truth);
        for (UserId r : draft->message.receivers) {
            for (const Fact& f : draft->facts) {
                w.kbs[index(r)].learn(f);
            }
            if (Agent* receiver = w.agents[index(r)].get()) {
                receiver->receive(draft->message);
            }
        }
        if (w.hook) {
            w.hook(*draft, type);
        }
    }
    for (auto& agent : w.agents) {
        if (agent) {
            agent->tick();
        }
    }
    ++w.step;
}

void Simulation::run()
{
    while (m_world->step < m_world->cfg.steps) {
        step();
    }
}

const SimConfig& Simulation::config() const
{
    return m_world->cfg;
}
const SocialGraph& Simulation::graph() const
{
    return m_world->graph;
}
const GroundTruth& Simulation::truth() const
{
    return m_world->truth;
}
const Metrics& Simulation::metrics() const
{
    return m_world->metrics;
}
UserType Simulation::type_of(UserId u) const
{
    return m_world->types.at(index(u));
}
const KnowledgeBase& Simulation::knowledge(UserId u) const
{
    return m_world->kbs.at(index(u));
}
const Agent* Simulation::agent(UserId u) const
{
    return m_world->agents.at(index(u)).get();
}
void Simulation::on_sent(SentHook hook)
{
    m_world->hook = std::move(hook);
}

Metrics run_simulation(const SimConfig& cfg)
{
    Simulation sim(cfg);
    sim.run();
    return sim.metrics();
}

} // namespace ici
