#include "ici/agent.h"
#include "ici/community.h"
#include "ici/model.h"

#include <doctest.h>

using namespace ici;

namespace
{

constexpr UserId alpha = user(0);
constexpr UserId beta = user(1);
constexpr UserId gamma_ = user(2);
constexpr UserId delta = user(3);
constexpr UserId epsilon = user(4);
constexpr UserId zeta = user(5);
constexpr UserId eta = user(6);

constexpr TopicId work = topic(0);
constexpr TopicId sport = topic(1);
constexpr TopicId marriage = topic(2);
constexpr TopicId obscene = topic(3);
constexpr std::size_t topic_count = 6;

const std::vector<UserId> workmates{beta, gamma_, delta};

const DecisionCallback send_anyway = [](AlertKind, const Message&) { return true; };

/// alpha's assistant with the work context and every likelihood at 0.5.
Agent new_colleague()
{
    Agent a(alpha, 7, topic_count, {}, DefaultRule::fixed(0.5));
    a.set_view(workmates, {Context(0, workmates)});
    return a;
}

std::vector<UserId> everyone_but(UserId sender)
{
    std::vector<UserId> out{alpha};
    for (UserId u : workmates) {
        if (u != sender) {
            out.push_back(u);
        }
    }
    return out;
}

/// A day passes, then each workmate posts about work to the whole group.
void work_routine(Agent& a, int steps)
{
    for (int s = 0; s < steps; ++s) {
        a.tick();
        for (UserId u : workmates) {
            a.receive(Message(u, everyone_but(u), {work}));
        }
    }
}

bool alerts(Agent a, const Message& m, AlertKind kind = AlertKind::Inappropriate)
{
    // Probed on a copy with a declining user, so nothing is recorded.
    const SendOutcome out = a.request_send(m, [](AlertKind, const Message&) { return false; });
    return !out.alerts.empty() && out.alerts.front() == kind;
}

SocialGraph ego_graph(std::initializer_list<std::pair<UserId, UserId>> edges)
{
    SocialGraph g(7);
    for (auto [u, v] : edges) {
        g.add_edge(u, v);
    }
    return g;
}

} // namespace

TEST_SUITE("scenarios")
{

TEST_CASE("evolving relationship: a shared interest silences the sport alert until the tone changes")
{
    Agent a = new_colleague();
    work_routine(a, 60);

    // Work is the group's topic, everything else has faded.
    CHECK(a.store().a(beta, work) == doctest::Approx(1.0));
    CHECK(a.store().a(gamma_, sport) == 0.0);
    const auto& history = a.lists().appropriateness.at(beta).values();
    CHECK(history.front() == doctest::Approx(0.49));
    CHECK(history.back() == doctest::Approx(0.99));
    CHECK(std::is_sorted(history.begin(), history.end()));

    const Message sport_to_beta(alpha, {beta}, {sport});
    const Message sport_to_gamma(alpha, {gamma_}, {sport});
    CHECK(context_appropriateness(a.store(), a.contexts()[0], std::vector<TopicId>{sport}) == 0.0);
    CHECK(alerts(a, sport_to_beta));

    // alpha and beta trade football clips; gamma and delta only touch on sport now and then.
    bool silenced = false;
    for (int s = 0; s < 120 && !silenced; ++s) {
        a.tick();
        a.receive(Message(beta, {alpha}, {sport}));
        a.request_send(sport_to_beta, send_anyway);
        for (UserId u : {gamma_, delta}) {
            a.receive(Message(u, everyone_but(u), s % 8 == 0 ? std::vector<TopicId>{work, sport}
                                                             : std::vector<TopicId>{work}));
        }
        silenced = !alerts(a, sport_to_beta);
    }
    REQUIRE(silenced);
    CHECK(a.store().a(beta, sport) == doctest::Approx(1.0));
    CHECK(context_appropriateness(a.store(), a.contexts()[0], std::vector<TopicId>{sport}) < 0.5);
    // Only the relationship with beta changed.
    CHECK(alerts(a, sport_to_gamma));
    CHECK(a.lists().appropriateness_aggregate(beta) < a.lists().appropriateness_aggregate(gamma_));

    // beta becomes the boss and keeps to work topics.
    bool alert_back = false;
    for (int s = 0; s < 60 && !alert_back; ++s) {
        work_routine(a, 1);
        alert_back = alerts(a, sport_to_beta);
    }
    CHECK(alert_back);
    CHECK(a.lists().appropriateness.at(beta).values().back() > 0.5);
}

TEST_CASE("evolving contexts: the photography class becomes its own context")
{
    Agent a(alpha, 7, topic_count);
    const MapEquationDetector detector;

    // Initial situation: three workmates who all know each other.
    const SocialGraph initial =
        ego_graph({{alpha, beta}, {alpha, gamma_}, {alpha, delta}, {beta, gamma_}, {beta, delta}, {gamma_, delta}});
    CHECK(a.observe(initial, detector, 1));
    REQUIRE(a.contexts().size() == 1);
    CHECK(a.contexts()[0].members == std::vector<UserId>{beta, gamma_, delta});

    // First class: alpha and delta befriend epsilon.
    SocialGraph first = initial;
    first.add_edge(alpha, epsilon);
    first.add_edge(delta, epsilon);
    CHECK(a.observe(first, detector, 1));
    REQUIRE(a.contexts().size() == 1);
    CHECK(a.contexts()[0].members == std::vector<UserId>{beta, gamma_, delta, epsilon});

    // Second class without delta: zeta and eta join alpha and epsilon.
    SocialGraph second = first;
    for (UserId u : {zeta, eta}) {
        second.add_edge(alpha, u);
        second.add_edge(epsilon, u);
    }
    second.add_edge(zeta, eta);
    CHECK(a.observe(second, detector, 1));
    REQUIRE(a.contexts().size() == 2);
    CHECK(a.contexts()[0].members == std::vector<UserId>{beta, gamma_, delta});
    CHECK(a.contexts()[1].members == std::vector<UserId>{epsilon, zeta, eta});

    // Nothing changed around alpha: no recomputation.
    CHECK_FALSE(a.observe(second, detector, 1));
    for (std::uint64_t seed = 2; seed <= 10; ++seed) {
        Agent other(alpha, 7, topic_count);
        other.observe(second, detector, seed);
        CHECK(other.contexts() == a.contexts());
    }
}

TEST_CASE("unusual versus inappropriate: replies end the wedding alerts, silence keeps the joke alerts")
{
    Agent office = new_colleague();
    work_routine(office, 60);
    const Message work_news(alpha, workmates, {work});
    CHECK_FALSE(alerts(office, work_news));

    SUBCASE("wedding invitation")
    {
        Agent a = office;
        const Message invitation(alpha, workmates, {marriage});
        CHECK(context_appropriateness(a.store(), a.contexts()[0], std::vector<TopicId>{marriage}) == 0.0);
        const SendOutcome first = a.request_send(invitation, send_anyway);
        CHECK(first.sent);
        CHECK(first.alerts == std::vector<AlertKind>{AlertKind::Inappropriate});

        // Likes and comments on the post.
        for (int round = 0; round < 10; ++round) {
            a.tick();
            for (UserId u : workmates) {
                a.receive(Message(u, everyone_but(u), {marriage}));
            }
        }
        CHECK(context_appropriateness(a.store(), a.contexts()[0], std::vector<TopicId>{marriage}) > 0.5);
        const SendOutcome details = a.request_send(Message(alpha, workmates, {marriage}), send_anyway);
        CHECK(details.alerts.empty());
    }

    SUBCASE("obscene joke")
    {
        Agent a = office;
        const Message joke(alpha, workmates, {obscene});
        const SendOutcome first = a.request_send(joke, send_anyway);
        CHECK(first.sent);
        CHECK(first.alerts == std::vector<AlertKind>{AlertKind::Inappropriate});

        // Nobody reacts; the office carries on with work.
        work_routine(a, 10);
        CHECK(context_appropriateness(a.store(), a.contexts()[0], std::vector<TopicId>{obscene}) == 0.0);
        const SendOutcome second = a.request_send(joke, send_anyway);
        CHECK(second.alerts == std::vector<AlertKind>{AlertKind::Inappropriate});
    }
}

} // TEST_SUITE
