#include "ici/harness.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

namespace ici::harness
{

namespace
{

template <typename T> T parse_number(std::string_view key, std::string_view text)
{
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("bad value '" + std::string(text) + "' for " + std::string(key));
    }
    return value;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

TypeMix make_mix(double compliant, double random, double obedient, double relationship, double malicious)
{
    TypeMix m;
    m[UserType::Compliant] = compliant;
    m[UserType::Random] = random;
    m[UserType::Obedient] = obedient;
    m[UserType::RelationshipBased] = relationship;
    m[UserType::Malicious] = malicious;
    for (double& r : m.ratio) {
        // Grid arithmetic such as 0.9 - 0.9 must not leave a negative residue.
        r = std::abs(r) < 1e-12 ? 0.0 : std::round(r * 1e12) / 1e12;
    }
    return m;
}

struct ProfileScale {
    std::size_t users;
    std::size_t steps;
    std::size_t long_steps;
    std::size_t runs;
};

ProfileScale scale(Profile p)
{
    return p == Profile::Desk ? ProfileScale{50, 1000, 2000, 20} : ProfileScale{100, 2000, 4000, 100};
}

const std::vector<PlotSpec>& plots_for(std::string_view id)
{
    static const std::map<std::string_view, std::vector<PlotSpec>> table = {
        {"E1-maintenance",
         {{"inappropriate exchanges per user type vs compliant ratio", {"inapp_mean"}},
          {"dissemination percentage per user type vs compliant ratio", {"diss_pct"}}}},
        {"E2-learning", {{"obedient violation percentages vs compliant ratio", {"inapp_pct", "diss_pct"}}}},
        {"E3-alerts", {{"raised and non-followed alerts vs steps", {"alerts_pct", "unfollowed_pct"}}}},
        {"E4-topics",
         {{"inappropriate percentage vs max topics per message", {"inapp_pct"}},
          {"dissemination percentage vs max topics per message", {"diss_pct"}}}},
        {"E5-norm-density",
         {{"inappropriate percentage vs max inappropriate ratio", {"inapp_pct"}},
          {"dissemination percentage vs max sensitive ratio (param / 10)", {"diss_pct"}}}},
        {"E6-malicious", {{"inappropriate percentage vs malicious ratio", {"inapp_pct"}}}},
        {"E7-realistic",
         {{"inappropriate percentage per user type vs steps", {"inapp_pct"}},
          {"dissemination percentage per user type vs steps", {"diss_pct"}}}},
    };
    return table.at(id);
}

} // namespace

Profile parse_profile(std::string_view text)
{
    if (text == "paper") {
        return Profile::Paper;
    }
    if (text == "desk") {
        return Profile::Desk;
    }
    throw ConfigError("unknown profile '" + std::string(text) + "' (expected desk or paper)");
}

void apply_override(SimConfig& cfg, std::string_view key, std::string_view raw)
{
    const std::string_view value = trim(raw);
    auto size = [&] { return parse_number<std::size_t>(key, value); };
    auto real = [&] { return parse_number<double>(key, value); };
    if (key == "users") {
        cfg.netgen.users = size();
    }
    else if (key == "edges_per_node") {
        cfg.netgen.edges_per_node = size();
    }
    else if (key == "close_trusted_ratio") {
        cfg.netgen.close_trusted_ratio = real();
    }
    else if (key == "topics") {
        cfg.topics = size();
    }
    else if (key == "max_topics_per_msg") {
        cfg.max_topics_per_msg = size();
    }
    else if (key == "max_inappropriate_ratio") {
        cfg.max_inappropriate_ratio = real();
    }
    else if (key == "max_sensitive_ratio") {
        cfg.max_sensitive_ratio = real();
    }
    else if (key == "steps") {
        cfg.steps = size();
    }
    else if (key == "runs") {
        cfg.runs = size();
    }
    else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value);
    }
    else if (key == "malicious_topic") {
        cfg.malicious_topic = topic(parse_number<std::uint32_t>(key, value));
    }
    else if (key == "initial_topic_ratio") {
        cfg.initial_topic_ratio = real();
    }
    else if (key == "compose_attempts") {
        cfg.compose_attempts = size();
    }
    else if (key == "delta") {
        cfg.rule.delta = real();
    }
    else if (key == "nabla") {
        cfg.rule.nabla = real();
    }
    else {
        throw ConfigError("unknown simulation key '" + std::string(key) + "'");
    }
}

void load_config(const std::string& path, Settings& s)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path);
    }
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    }
    catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError("key '" + section + "' outside of a section in " + path);
        }
        if (section == "sim") {
            for (const auto& [key, node] : body) {
                const std::string value = node.get_value<std::string>();
                if (key == "runs") {
                    s.runs = parse_number<std::size_t>(key, trim(value));
                }
                else if (key == "steps") {
                    s.steps = parse_number<std::size_t>(key, trim(value));
                }
                else if (key == "seed") {
                    s.seed = parse_number<std::uint64_t>(key, trim(value));
                }
                else {
                    SimConfig probe;
                    apply_override(probe, key, value);
                    s.sim[key] = value;
                }
            }
        }
        else if (section == "mix") {
            TypeMix mix;
            for (const auto& [key, node] : body) {
                UserType type{};
                try {
                    type = parse_user_type(key);
                }
                catch (const std::invalid_argument& e) {
                    throw ConfigError(e.what());
                }
                mix[type] = parse_number<double>(key, trim(node.get_value<std::string>()));
            }
            try {
                mix.validate();
            }
            catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
            s.mix = mix;
        }
        else if (section == "run") {
            for (const auto& [key, node] : body) {
                const std::string value{trim(node.get_value<std::string>())};
                if (key == "profile") {
                    s.profile = parse_profile(value);
                }
                else if (key == "workers") {
                    s.workers = parse_number<std::size_t>(key, value);
                }
                else if (key == "window") {
                    s.window = parse_number<std::size_t>(key, value);
                }
                else if (key == "realistic_reading") {
                    s.realistic_reading = value;
                }
                else {
                    throw ConfigError("unknown run key '" + key + "'");
                }
            }
        }
        else {
            throw ConfigError("unknown section [" + section + "]");
        }
    }
}

const std::vector<std::string_view>& preset_ids()
{
    static const std::vector<std::string_view> ids = {"E1-maintenance", "E2-learning",  "E3-alerts",   "E4-topics",
                                                      "E5-norm-density", "E6-malicious", "E7-realistic"};
    return ids;
}

Preset make_preset(std::string_view requested, const Settings& s)
{
    std::string_view id;
    for (std::string_view known : preset_ids()) {
        if (known == requested || known.substr(0, known.find('-')) == requested) {
            id = known;
        }
    }
    if (id.empty()) {
        throw ConfigError("unknown preset '" + std::string(requested) + "'");
    }
    if (s.window == 0) {
        throw ConfigError("window must be positive");
    }

    const ProfileScale sc = scale(s.profile);
    const bool step_series = id == "E3-alerts" || id == "E7-realistic";
    SimConfig base;
    base.netgen.users = sc.users;
    base.steps = step_series ? sc.long_steps : sc.steps;
    base.runs = sc.runs;
    for (const auto& [key, value] : s.sim) {
        apply_override(base, key, value);
    }
    if (s.steps) {
        base.steps = *s.steps;
    }
    if (s.runs) {
        base.runs = *s.runs;
    }
    if (s.mix && !step_series) {
        throw ConfigError("preset " + std::string(id) + " sweeps the population; a [mix] section is not allowed");
    }

    Preset p;
    p.id = id;
    p.plots = plots_for(id);
    auto add = [&](std::string arm, double param, std::size_t grid, auto&& tweak) {
        Cell c{std::move(arm), param, grid, base};
        tweak(c.config);
        try {
            c.config.validate();
        }
        catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        p.cells.push_back(std::move(c));
    };

    if (id == "E1-maintenance") {
        p.description = "compliant ratio 0-90%, rest obedient (iaa) or random (baseline)";
        for (std::string arm : {"iaa", "baseline"}) {
            for (std::size_t i = 0; i < 10; ++i) {
                const double c = static_cast<double>(i) / 10.0;
                add(arm, c, i, [&](SimConfig& cfg) {
                    cfg.type_mix = arm == "iaa" ? make_mix(c, 0, 1 - c, 0, 0) : make_mix(c, 1 - c, 0, 0, 0);
                });
            }
        }
    }
    else if (id == "E2-learning") {
        p.description = "compliant ratio 0-90%, 10% obedient, rest random";
        for (std::size_t i = 0; i < 10; ++i) {
            const double c = static_cast<double>(i) / 10.0;
            add("", c, i, [&](SimConfig& cfg) { cfg.type_mix = make_mix(c, 0.9 - c, 0.1, 0, 0); });
        }
    }
    else if (id == "E3-alerts") {
        p.description = "40% compliant, 60% relationship-based, reported per step window";
        p.window = s.window;
        add("", 0.0, 0, [&](SimConfig& cfg) { cfg.type_mix = s.mix ? *s.mix : make_mix(0.4, 0, 0, 0.6, 0); });
    }
    else if (id == "E4-topics") {
        p.description = "max topics per message 1-35, 40% compliant, rest obedient (iaa) or random (baseline)";
        std::vector<std::size_t> grid;
        for (std::size_t k = 1; k <= 35; k += s.profile == Profile::Desk ? 4 : 1) {
            grid.push_back(k);
        }
        if (grid.back() != 35) {
            grid.push_back(35);
        }
        for (std::string arm : {"iaa", "baseline"}) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                add(arm, static_cast<double>(grid[i]), i, [&](SimConfig& cfg) {
                    cfg.max_topics_per_msg = grid[i];
                    cfg.type_mix = arm == "iaa" ? make_mix(0.4, 0, 0.6, 0, 0) : make_mix(0.4, 0.6, 0, 0, 0);
                });
            }
        }
    }
    else if (id == "E5-norm-density") {
        p.description = "max inappropriate ratio 5-30% with max sensitive ratio 0.5-3%, 40% compliant";
        for (std::string arm : {"iaa", "baseline"}) {
            for (std::size_t i = 1; i <= 6; ++i) {
                const double inapp = 0.05 * static_cast<double>(i);
                add(arm, inapp, i - 1, [&](SimConfig& cfg) {
                    cfg.max_inappropriate_ratio = inapp;
                    cfg.max_sensitive_ratio = inapp / 10.0;
                    cfg.type_mix = arm == "iaa" ? make_mix(0.4, 0, 0.6, 0, 0) : make_mix(0.4, 0.6, 0, 0, 0);
                });
            }
        }
    }
    else if (id == "E6-malicious") {
        p.description = "malicious ratio 0-90%, 10% obedient (iaa) or random (baseline), rest compliant";
        for (std::string arm : {"iaa", "baseline"}) {
            for (std::size_t i = 0; i < 10; ++i) {
                const double m = static_cast<double>(i) / 10.0;
                add(arm, m, i, [&](SimConfig& cfg) {
                    cfg.type_mix =
                        arm == "iaa" ? make_mix(0.9 - m, 0, 0.1, 0, m) : make_mix(0.9 - m, 0.1, 0, 0, m);
                });
            }
        }
    }
    else {
        p.description = "realistic population, reported per step window";
        p.window = s.window;
        TypeMix mix;
        if (s.mix) {
            mix = *s.mix;
        }
        else if (s.realistic_reading == "points") {
            mix = make_mix(0.15, 0.10, 0.11, 0.64, 0);
        }
        else if (s.realistic_reading == "fraction") {
            mix = make_mix(0.26 * 0.15, 0.10, 0.26 * 0.85, 0.64, 0);
        }
        else {
            throw ConfigError("realistic_reading must be 'points' or 'fraction'");
        }
        add("", 0.0, 0, [&](SimConfig& cfg) { cfg.type_mix = mix; });
    }
    return p;
}

Stat summarize(std::vector<double> values)
{
    Stat out;
    if (values.empty()) {
        return out;
    }
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - out.mean) * (v - out.mean);
        }
        out.sd = std::sqrt(ss / (n - 1.0));
    }
    return out;
}

namespace
{

double pct(std::uint64_t num, std::uint64_t den)
{
    return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

double ResultRow::inappropriate_pct() const
{
    return pct(pooled.inappropriate, pooled.sent);
}
double ResultRow::dissemination_pct() const
{
    return pct(pooled.disseminations, pooled.sent);
}
double ResultRow::alerts_pct() const
{
    return pct(pooled.alerts_raised, pooled.attempted);
}
double ResultRow::unfollowed_pct() const
{
    return pct(pooled.alerts_not_followed, pooled.attempted);
}

ResultRow aggregate(std::string preset, double param, UserType type, std::size_t users,
                    std::span<const Counters> per_run)
{
    ResultRow row;
    row.preset = std::move(preset);
    row.param = param;
    row.type = type;
    row.runs = per_run.size();
    row.users = users;
    auto stat = [&](std::uint64_t Counters::*field) {
        std::vector<double> v;
        v.reserve(per_run.size());
        for (const Counters& c : per_run) {
            v.push_back(static_cast<double>(c.*field));
        }
        return summarize(std::move(v));
    };
    row.attempted = stat(&Counters::attempted);
    row.sent = stat(&Counters::sent);
    row.inappropriate = stat(&Counters::inappropriate);
    row.disseminations = stat(&Counters::disseminations);
    row.alerts_raised = stat(&Counters::alerts_raised);
    row.alerts_not_followed = stat(&Counters::alerts_not_followed);
    for (const Counters& c : per_run) {
        row.pooled += c;
    }
    return row;
}

void write_csv(std::ostream& out, std::span<const ResultRow> rows)
{
    out << csv_header << '\n';
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return std::string_view(buf);
    };
    for (const ResultRow& r : rows) {
        out << r.preset << ',' << num(r.param) << ',' << name(r.type) << ',' << r.runs;
        for (double v : {r.sent.mean, r.sent.sd, r.inappropriate.mean, r.inappropriate.sd, r.inappropriate_pct(),
                         r.disseminations.mean, r.disseminations.sd, r.dissemination_pct(), r.alerts_pct(),
                         r.unfollowed_pct()}) {
            out << ',' << num(v);
        }
        out << '\n';
    }
}

void write_csv(const std::string& path, std::span<const ResultRow> rows)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    write_csv(out, rows);
    out.flush();
    if (!out) {
        throw IoError("error while writing " + path);
    }
}

std::uint64_t run_seed(std::uint64_t base, std::size_t grid_index, std::size_t run)
{
    return mix_seed(mix_seed(base, grid_index), run);
}

std::vector<ResultRow> run_preset(const Preset& preset, const Settings& s, const Progress& progress)
{
    struct Job {
        std::size_t cell;
        std::size_t run;
    };
    using Windows = std::vector<std::array<Counters, user_type_count>>;

    std::vector<Job> jobs;
    for (std::size_t c = 0; c < preset.cells.size(); ++c) {
        for (std::size_t r = 0; r < preset.cells[c].config.runs; ++r) {
            jobs.push_back({c, r});
        }
    }
    std::vector<Windows> results(jobs.size());
    std::vector<std::array<std::size_t, user_type_count>> users(preset.cells.size());

    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex mutex;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            try {
                const Cell& cell = preset.cells[jobs[j].cell];
                SimConfig cfg = cell.config;
                cfg.seed = run_seed(s.seed, cell.grid_index, jobs[j].run);
                const Metrics m = run_simulation(cfg);
                const std::size_t width = preset.window ? preset.window : std::max<std::size_t>(1, cfg.steps);
                const std::size_t count = preset.window ? (cfg.steps + width - 1) / width : 1;
                Windows w(count);
                for (std::size_t i = 0; i < count; ++i) {
                    for (UserType t : all_user_types) {
                        w[i][static_cast<std::size_t>(t)] = m.window(t, i * width, (i + 1) * width);
                    }
                }
                results[j] = std::move(w);
                std::lock_guard lock(mutex);
                if (jobs[j].run == 0) {
                    users[jobs[j].cell] = m.users;
                }
                ++done;
                if (progress) {
                    progress(done, jobs.size());
                }
            }
            catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = jobs.size();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(s.workers, 1, std::max<std::size_t>(1, jobs.size()));
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<ResultRow> rows;
    std::size_t j = 0;
    for (std::size_t c = 0; c < preset.cells.size(); ++c) {
        const Cell& cell = preset.cells[c];
        const std::size_t runs = cell.config.runs;
        if (runs == 0) {
            continue;
        }
        const std::string label = cell.arm.empty() ? preset.id : preset.id + "/" + cell.arm;
        const std::size_t windows = results[j].size();
        for (std::size_t w = 0; w < windows; ++w) {
            const double param =
                preset.window ? static_cast<double>(std::min((w + 1) * preset.window, cell.config.steps)) : cell.param;
            for (UserType t : all_user_types) {
                const std::size_t n = users[c][static_cast<std::size_t>(t)];
                if (n == 0) {
                    continue;
                }
                std::vector<Counters> per_run;
                for (std::size_t r = 0; r < runs; ++r) {
                    per_run.push_back(results[j + r][w][static_cast<std::size_t>(t)]);
                }
                rows.push_back(aggregate(label, param, t, n, per_run));
            }
        }
        j += runs;
    }
    return rows;
}

} // namespace ici::harness
