#include "ici/harness.h"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ici;
using namespace ici::harness;

namespace
{

std::string write_temp(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / ("ici_harness_" + name + ".ini");
    std::ofstream(path) << text;
    return path.string();
}

std::string csv_of(const std::vector<ResultRow>& rows)
{
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
}

Settings tiny()
{
    Settings s;
    s.profile = Profile::Desk;
    s.runs = 2;
    s.steps = 20;
    s.sim["users"] = "20";
    return s;
}

} // namespace

TEST_CASE("sample statistics")
{
    const Stat one = summarize({7.0});
    CHECK(one.mean == 7.0);
    CHECK(one.sd == 0.0);

    const Stat two = summarize({10.0, 20.0});
    CHECK(two.mean == doctest::Approx(15.0));
    CHECK(two.sd == doctest::Approx(std::sqrt(50.0)));

    const Stat a = summarize({0.1, 0.7, 0.2, 1e9, 3.0});
    const Stat b = summarize({3.0, 1e9, 0.2, 0.1, 0.7});
    CHECK(a.mean == b.mean);
    CHECK(a.sd == b.sd);
    CHECK(summarize({}).mean == 0.0);
}

TEST_CASE("aggregated rows and percentages")
{
    const std::vector<Counters> runs{{10, 8, 2, 1, 4, 1}, {12, 12, 0, 0, 2, 2}};
    const ResultRow row = aggregate("E9", 0.5, UserType::Obedient, 7, runs);
    CHECK(row.runs == 2);
    CHECK(row.users == 7);
    CHECK(row.sent.mean == doctest::Approx(10.0));
    CHECK(row.sent.sd == doctest::Approx(std::sqrt(8.0)));
    CHECK(row.inappropriate_pct() == doctest::Approx(10.0));
    CHECK(row.dissemination_pct() == doctest::Approx(5.0));
    CHECK(row.alerts_pct() == doctest::Approx(100.0 * 6 / 22));
    CHECK(row.unfollowed_pct() == doctest::Approx(100.0 * 3 / 22));

    const std::vector<Counters> reversed{runs[1], runs[0]};
    CHECK(csv_of({aggregate("E9", 0.5, UserType::Obedient, 7, reversed)}) == csv_of({row}));

    const std::vector<Counters> silent{{}, {}};
    const ResultRow empty = aggregate("E9", 0, UserType::Random, 1, silent);
    CHECK(empty.inappropriate_pct() == 0.0);
    CHECK(empty.dissemination_pct() == 0.0);
    CHECK(empty.alerts_pct() == 0.0);
    CHECK(empty.unfollowed_pct() == 0.0);
}

TEST_CASE("csv layout")
{
    const std::vector<Counters> runs{{4, 4, 1, 0, 0, 0}};
    const std::string text = csv_of({aggregate("E1-maintenance/iaa", 0.3, UserType::RelationshipBased, 5, runs)});
    CHECK(text == std::string(csv_header) + "\nE1-maintenance/iaa,0.3,relationship-based,1,4,0,1,0,25,0,0,0,0,0\n");
}

TEST_CASE("preset lookup")
{
    const Settings s;
    CHECK(preset_ids().size() == 7);
    CHECK(make_preset("E1", s).id == "E1-maintenance");
    CHECK(make_preset("E5-norm-density", s).id == "E5-norm-density");
    CHECK_THROWS_AS(make_preset("E9", s), ConfigError);
    CHECK_THROWS_AS(make_preset("maintenance", s), ConfigError);
    for (std::string_view id : preset_ids()) {
        CHECK_FALSE(make_preset(id, s).plots.empty());
    }
}

TEST_CASE("preset grids")
{
    Settings paper;
    const Preset e1 = make_preset("E1", paper);
    REQUIRE(e1.cells.size() == 20);
    CHECK(e1.cells[0].config.netgen.users == 100);
    CHECK(e1.cells[0].config.steps == 2000);
    CHECK(e1.cells[0].config.runs == 100);
    CHECK(e1.cells[3].param == doctest::Approx(0.3));
    CHECK(e1.cells[3].config.type_mix[UserType::Obedient] == doctest::Approx(0.7));
    CHECK(e1.cells[13].arm == "baseline");
    CHECK(e1.cells[13].config.type_mix[UserType::Random] == doctest::Approx(0.7));
    CHECK(e1.cells[13].grid_index == e1.cells[3].grid_index);

    const Preset e2 = make_preset("E2", paper);
    REQUIRE(e2.cells.size() == 10);
    CHECK(e2.cells[9].config.type_mix[UserType::Random] == 0.0);
    CHECK(e2.cells[4].config.type_mix[UserType::Obedient] == doctest::Approx(0.1));

    const Preset e3 = make_preset("E3", paper);
    CHECK(e3.cells.size() == 1);
    CHECK(e3.window == 100);
    CHECK(e3.cells[0].config.steps == 4000);
    CHECK(e3.cells[0].config.type_mix[UserType::RelationshipBased] == doctest::Approx(0.6));

    CHECK(make_preset("E4", paper).cells.size() == 70);
    Settings desk;
    desk.profile = Profile::Desk;
    const Preset e4 = make_preset("E4", desk);
    REQUIRE(e4.cells.size() == 20);
    CHECK(e4.cells[0].param == 1.0);
    CHECK(e4.cells[9].param == 35.0);
    CHECK(e4.cells[0].config.netgen.users == 50);

    const Preset e5 = make_preset("E5", paper);
    REQUIRE(e5.cells.size() == 12);
    CHECK(e5.cells[5].config.max_inappropriate_ratio == doctest::Approx(0.30));
    CHECK(e5.cells[5].config.max_sensitive_ratio == doctest::Approx(0.03));
    CHECK(e5.cells[0].config.max_sensitive_ratio == doctest::Approx(0.005));

    const Preset e6 = make_preset("E6", paper);
    REQUIRE(e6.cells.size() == 20);
    CHECK(e6.cells[9].config.type_mix[UserType::Malicious] == doctest::Approx(0.9));
    CHECK(e6.cells[9].config.type_mix[UserType::Compliant] == 0.0);

    const Preset e7 = make_preset("E7", desk);
    CHECK(e7.cells[0].config.steps == 2000);
    const TypeMix& mix = e7.cells[0].config.type_mix;
    CHECK(mix[UserType::Compliant] == doctest::Approx(0.15));
    CHECK(mix[UserType::Obedient] == doctest::Approx(0.11));
    CHECK(mix[UserType::RelationshipBased] == doctest::Approx(0.64));
    CHECK(mix[UserType::Random] == doctest::Approx(0.10));

    Settings fraction = desk;
    fraction.realistic_reading = "fraction";
    const TypeMix& alt = make_preset("E7", fraction).cells[0].config.type_mix;
    CHECK(alt[UserType::Compliant] == doctest::Approx(0.039));
    CHECK(alt[UserType::Obedient] == doctest::Approx(0.221));
    fraction.realistic_reading = "both";
    CHECK_THROWS_AS(make_preset("E7", fraction), ConfigError);
}

TEST_CASE("overrides")
{
    SimConfig cfg;
    apply_override(cfg, "users", "40");
    apply_override(cfg, "close_trusted_ratio", " 0.2 ");
    apply_override(cfg, "malicious_topic", "3");
    apply_override(cfg, "delta", "0.2");
    CHECK(cfg.netgen.users == 40);
    CHECK(cfg.netgen.close_trusted_ratio == 0.2);
    CHECK(cfg.malicious_topic == topic(3));
    CHECK(cfg.rule.delta == 0.2);
    CHECK_THROWS_AS(apply_override(cfg, "colour", "1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "users", "many"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "users", "-3"), ConfigError);

    Settings s;
    s.sim["nabla"] = "0.5";
    CHECK_THROWS_AS(make_preset("E1", s), ConfigError);
}

TEST_CASE("config files")
{
    Settings s;
    load_config(write_temp("good", "[sim]\nusers = 30\nruns = 3\nsteps = 40\nseed = 9\nnabla = 0.02\n"
                                   "[mix]\ncompliant = 0.5\nrelationship-based = 0.5\n"
                                   "[run]\nprofile = desk\nworkers = 2\nwindow = 10\n"),
                s);
    CHECK(s.profile == Profile::Desk);
    CHECK(s.runs == 3u);
    CHECK(s.steps == 40u);
    CHECK(s.seed == 9);
    CHECK(s.workers == 2);
    CHECK(s.window == 10);
    REQUIRE(s.mix.has_value());
    CHECK((*s.mix)[UserType::RelationshipBased] == 0.5);

    const Preset e3 = make_preset("E3", s);
    CHECK(e3.cells[0].config.netgen.users == 30);
    CHECK(e3.cells[0].config.rule.nabla == 0.02);
    CHECK(e3.cells[0].config.steps == 40);
    CHECK(e3.cells[0].config.type_mix[UserType::Compliant] == 0.5);
    CHECK_THROWS_AS(make_preset("E1", s), ConfigError);

    for (const char* bad : {"[sim]\nlegs = 4\n", "[extra]\nx = 1\n", "[mix]\nrandom = 0.5\n", "[mix]\nalien = 1\n",
                            "[run]\nprofile = huge\n", "[run]\ncolour = red\n", "[sim]\nusers = ten\n",
                            "users = 10\n", "[sim\n"}) {
        Settings t;
        CHECK_THROWS_AS(load_config(write_temp("bad", bad), t), ConfigError);
    }
    Settings t;
    CHECK_THROWS_AS(load_config("/nonexistent/dir/config.ini", t), IoError);
}

TEST_CASE("csv output errors")
{
    CHECK_THROWS_AS(write_csv("/nonexistent/dir/out.csv", std::vector<ResultRow>{}), IoError);
}

TEST_CASE("run seeds")
{
    CHECK(run_seed(1, 0, 0) == run_seed(1, 0, 0));
    CHECK(run_seed(1, 0, 1) != run_seed(1, 0, 0));
    CHECK(run_seed(1, 1, 0) != run_seed(1, 0, 0));
    CHECK(run_seed(2, 0, 0) != run_seed(1, 0, 0));
}

TEST_CASE("E1 row count follows the grid")
{
    Settings s = tiny();
    const Preset p = make_preset("E1", s);
    const auto rows = run_preset(p, s);
    // Each arm has one type at 0% compliant and two elsewhere.
    CHECK(rows.size() == 2 * (1 + 9 * 2));
    CHECK(rows.front().preset == "E1-maintenance/iaa");
    CHECK(rows.front().type == UserType::Obedient);
    CHECK(rows.back().preset == "E1-maintenance/baseline");
    for (const ResultRow& r : rows) {
        CHECK(r.runs == 2);
    }
}

TEST_CASE("zero steps give an all-zero table")
{
    Settings s = tiny();
    s.runs = 1;
    s.steps = 0;
    for (const ResultRow& r : run_preset(make_preset("E2", s), s)) {
        CHECK(r.pooled == Counters{});
    }
}

TEST_CASE("reruns are byte identical")
{
    Settings s = tiny();
    const Preset p = make_preset("E3", s);
    s.workers = 1;
    const std::string serial = csv_of(run_preset(p, s));
    s.workers = 3;
    const std::string parallel = csv_of(run_preset(p, s));
    CHECK(serial == parallel);
    CHECK(csv_of(run_preset(p, s)) == parallel);
    // 20 steps in windows of 100: one window per type.
    CHECK(std::count(serial.begin(), serial.end(), '\n') == 3);

    s.seed = 2;
    CHECK(csv_of(run_preset(p, s)) != parallel);
}

TEST_CASE("progress reaches the job count")
{
    Settings s = tiny();
    const Preset p = make_preset("E6", s);
    std::size_t last = 0;
    std::size_t total = 0;
    run_preset(p, s, [&](std::size_t done, std::size_t all) {
        last = done;
        total = all;
    });
    CHECK(total == 40);
    CHECK(last == 40);
}
