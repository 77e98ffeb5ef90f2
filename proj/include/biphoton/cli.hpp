#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "biphoton/bell.hpp"
#include "biphoton/mc.hpp"

namespace biphoton::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kSeedEnvVar = "BIPHOTON_SEED";
inline constexpr std::uint64_t kDefaultSeed = 20250810ULL;

enum class OutputFormat { csv, json };

/// Effective run configuration, always in radians.
struct Config {
    int grid = 65;             // inclusive sweep points over [0, 2pi]
    std::uint64_t trials = 0;  // 0 = analytic only (bell substitutes its default)
    std::uint64_t seed = kDefaultSeed;
    OutputFormat format = OutputFormat::csv;
    std::string out_path;      // empty = stdout

    // mz
    double phi_1 = 0.0;        // base phase on path 1; the sweep varies phi_2
    BlockedPath block = BlockedPath::none;

    // rto
    RtoLayout layout = RtoLayout::calibrated();
    bool table1 = false;

    // bell
    ChshSettings settings = ChshSettings::optimal();

    // check
    int check_grid = 32;
    int check_layouts = 100;
};

/// One source of configuration values (a config file, or the flags).
/// Absent fields fall through to the next-lower-precedence source.
struct ConfigOverrides {
    std::optional<int> grid;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<OutputFormat> format;
    std::optional<std::string> out_path;
    std::optional<bool> degrees;  // angle values in this and lower sources are degrees
    std::optional<double> phi_1;
    std::optional<BlockedPath> block;
    std::optional<double> phi_w, phi_x, phi_y, phi_z, mirror_phase;
    std::optional<bool> table1;
    std::optional<double> a1, a2, b1, b2;
    std::optional<int> check_grid;
    std::optional<int> check_layouts;
};

struct CommandResult {
    int exit_code = 0;
    std::string output;  // emitted table or report
    std::string error;   // diagnostic for nonzero exits
};

/// Format a double with 9 significant digits, '.' decimal separator,
/// locale independent.
std::string format_double(double v);

/// Parse and schema-validate a JSON config file. Unknown keys or badly
/// typed values throw std::invalid_argument.
ConfigOverrides load_config_file(const std::string& path);

/// Merge defaults <- env seed <- config file <- flags into an effective
/// config. Angle values from the file/flag sources are converted from
/// degrees when degrees mode is on; built-in defaults are already radians.
/// Throws std::invalid_argument on out-of-range values (grid < 2, ...).
Config finalize_config(const ConfigOverrides& file, const ConfigOverrides& flags,
                       std::optional<std::uint64_t> env_seed);

CommandResult run_mz(const Config& cfg);
CommandResult run_rto(const Config& cfg);
CommandResult run_bell(const Config& cfg);

/// Run the internal invariant suite: element unitarity, fringe identities,
/// no-signaling marginals, fixed-phase offsets, coincidence normalization
/// and the CHSH bounds. One line per check; exit code 0 iff all pass.
CommandResult run_check(const Config& cfg);

}  // namespace biphoton::cli
