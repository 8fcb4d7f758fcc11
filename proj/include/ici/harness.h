#ifndef ICI_HARNESS_H
#define ICI_HARNESS_H

#include "ici/sim.h"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ici::harness
{

/// Invalid configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output (CLI exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Profile
{
    Paper, // 100 users, 2000 steps (4000 for the step-series presets), 100 runs
    Desk,  // 50 users, 1000 steps (2000), 20 runs
};

Profile parse_profile(std::string_view text);

/// A plot reproduced from the CSV: `param` on the x axis against `columns`.
struct PlotSpec {
    std::string_view title;
    std::vector<std::string_view> columns;
};

struct Cell {
    std::string arm; // empty for single-arm presets
    double param = 0.0;
    std::size_t grid_index = 0; // shared by the arms of one grid point
    SimConfig config;
};

struct Preset {
    std::string id;
    std::string_view description;
    std::vector<Cell> cells;
    /// Non-zero: each run is reported per window of this many steps and param is the window end.
    std::size_t window = 0;
    std::vector<PlotSpec> plots;
};

struct Settings {
    Profile profile = Profile::Paper;
    std::uint64_t seed = 1;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> steps;
    std::size_t workers = 1;
    std::size_t window = 100;
    /// SimConfig field overrides, applied to every cell before the swept parameter.
    std::map<std::string, std::string> sim;
    /// Population override for presets whose mix is not swept.
    std::optional<TypeMix> mix;
    /// Reading of the realistic population: "points" (default) or "fraction".
    std::string realistic_reading = "points";
};

/// Sets one SimConfig field by name. Throws ConfigError for unknown keys or bad values.
void apply_override(SimConfig& cfg, std::string_view key, std::string_view value);

/// Reads an INI file with [sim], [mix] and [run] sections into s. Throws IoError or ConfigError.
void load_config(const std::string& path, Settings& s);

const std::vector<std::string_view>& preset_ids();

/// Builds a preset with its grid. Throws ConfigError for unknown ids or bad settings.
Preset make_preset(std::string_view id, const Settings& s);

struct Stat {
    double mean = 0.0;
    double sd = 0.0;
};

/// Sample mean and sample standard deviation; independent of input order.
Stat summarize(std::vector<double> values);

struct ResultRow {
    std::string preset;
    double param = 0.0;
    UserType type = UserType::Random;
    std::size_t runs = 0;
    std::size_t users = 0;
    Stat attempted, sent, inappropriate, disseminations, alerts_raised, alerts_not_followed;
    Counters pooled;

    /// 100 * inappropriate / sent over all runs, 0 when nothing was sent.
    double inappropriate_pct() const;
    double dissemination_pct() const;
    /// Percentages of attempted messages.
    double alerts_pct() const;
    double unfollowed_pct() const;
};

ResultRow aggregate(std::string preset, double param, UserType type, std::size_t users,
                    std::span<const Counters> per_run);

inline constexpr std::string_view csv_header = "preset,param,user_type,runs,msgs_mean,msgs_sd,inapp_mean,inapp_sd,"
                                               "inapp_pct,diss_mean,diss_sd,diss_pct,alerts_pct,unfollowed_pct";

void write_csv(std::ostream& out, std::span<const ResultRow> rows);
/// Throws IoError if the file cannot be written.
void write_csv(const std::string& path, std::span<const ResultRow> rows);

/// Per-run seed of a grid point; arms of one point share seeds.
std::uint64_t run_seed(std::uint64_t base, std::size_t grid_index, std::size_t run);

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every cell `runs` times on `workers` threads. Rows come out in cell, window, user-type order.
std::vector<ResultRow> run_preset(const Preset& preset, const Settings& s, const Progress& progress = {});

} // namespace ici::harness

#endif
