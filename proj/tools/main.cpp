#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "biphoton/cli.hpp"

namespace {

using biphoton::BlockedPath;
using biphoton::cli::CommandResult;
using biphoton::cli::Config;
using biphoton::cli::ConfigOverrides;
using biphoton::cli::OutputFormat;

// Flag capture for one subcommand; CLI11 fills the optionals only for
// flags the user actually passed, so precedence stays with the user.
struct FlagCapture {
    ConfigOverrides over;
    std::string config_path;

    void add_shared(CLI::App& cmd) {
        cmd.add_option("--grid", over.grid, "Sweep points over [0, 2pi], endpoints included")
            ->check(CLI::PositiveNumber);
        cmd.add_option("--trials", over.trials,
                       "Monte Carlo trials per sweep point (bell: per setting)");
        cmd.add_option("--seed", over.seed, "Master seed for the splitmix64 trial generator");
        cmd.add_option("--out", over.out_path, "Write output to this path instead of stdout");
        cmd.add_option("--format", over.format, "Output format")
            ->transform(CLI::CheckedTransformer(
                std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv},
                                                    {"json", OutputFormat::json}}));
        cmd.add_option("--config", config_path, "JSON config file (flags win over file values)");
        cmd.add_flag("--degrees", [this](std::int64_t count) { if (count > 0) over.degrees = true; },
                     "Interpret angle flags and config values as degrees");
    }
};

std::optional<std::uint64_t> env_seed(std::string& error) {
    const char* raw = std::getenv(biphoton::cli::kSeedEnvVar);
    if (raw == nullptr) return std::nullopt;
    std::uint64_t value = 0;
    const char* end = raw + std::string_view(raw).size();
    const auto [ptr, ec] = std::from_chars(raw, end, value);
    if (ec != std::errc{} || ptr != end) {
        error = std::string(biphoton::cli::kSeedEnvVar) + " must be an unsigned integer, got '" + raw + "'";
        return std::nullopt;
    }
    return value;
}

int emit(const CommandResult& result, const Config& cfg) {
    if (!result.error.empty()) std::cerr << "error: " << result.error << '\n';
    if (result.exit_code != 0 && result.output.empty()) return result.exit_code;
    if (cfg.out_path.empty()) {
        std::cout << result.output;
    } else {
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write to '" << cfg.out_path << "'\n";
            return 1;
        }
        out << result.output;
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Linear-optics interferometry simulator: single-photon fringes, "
        "entangled-pair coincidence statistics and a CHSH test harness"};
    app.require_subcommand(0, 1);
    bool top_check = false;
    app.add_flag("--check", top_check, "Run the internal invariant suite and exit");

    FlagCapture mz_flags, rto_flags, bell_flags, check_flags;

    CLI::App* mz = app.add_subcommand("mz", "Sweep the single-photon interferometer fringe");
    mz_flags.add_shared(*mz);
    mz->add_option("--phi1", mz_flags.over.phi_1, "Base phase on path 1 (the sweep varies phi_2)");
    mz->add_option("--block", mz_flags.over.block, "Block one interferometer path")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, BlockedPath>{{"none", BlockedPath::none},
                                               {"path1", BlockedPath::path1},
                                               {"path2", BlockedPath::path2}}));

    CLI::App* rto = app.add_subcommand(
        "rto", "Sweep the entangled-pair coincidence and correlation curves");
    rto_flags.add_shared(*rto);
    rto->add_option("--phi-w", rto_flags.over.phi_w, "Fixed phase on station A's solid arm");
    rto->add_option("--phi-x", rto_flags.over.phi_x, "Fixed phase on station B's solid arm");
    rto->add_option("--phi-y", rto_flags.over.phi_y, "Fixed phase on station A's dashed arm");
    rto->add_option("--phi-z", rto_flags.over.phi_z, "Fixed phase on station B's dashed arm");
    rto->add_option("--mirror-phase", rto_flags.over.mirror_phase, "Global mirror phase");
    rto->add_flag("--table1", [&rto_flags](std::int64_t count) { if (count > 0) rto_flags.over.table1 = true; },
                  "Emit the five-row phase comparison table instead of a sweep");

    CLI::App* bell = app.add_subcommand("bell", "Run the CHSH test and report the violation");
    bell_flags.add_shared(*bell);
    bell->add_option("--a1", bell_flags.over.a1, "First A-station setting");
    bell->add_option("--a2", bell_flags.over.a2, "Second A-station setting");
    bell->add_option("--b1", bell_flags.over.b1, "First B-station setting");
    bell->add_option("--b2", bell_flags.over.b2, "Second B-station setting");

    CLI::App* check = app.add_subcommand("check", "Run the internal invariant suite");
    check_flags.add_shared(*check);
    check->add_option("--layouts", check_flags.over.check_layouts,
                      "Randomized layouts for the layout-independence checks");

    CLI11_PARSE(app, argc, argv);

    try {
        std::string env_error;
        const auto seed_override = env_seed(env_error);
        if (!env_error.empty()) {
            std::cerr << "error: " << env_error << '\n';
            return 2;
        }

        auto build = [&](FlagCapture& flags) {
            ConfigOverrides file;
            if (!flags.config_path.empty())
                file = biphoton::cli::load_config_file(flags.config_path);
            return biphoton::cli::finalize_config(file, flags.over, seed_override);
        };

        if (mz->parsed()) {
            const Config cfg = build(mz_flags);
            return emit(biphoton::cli::run_mz(cfg), cfg);
        }
        if (rto->parsed()) {
            const Config cfg = build(rto_flags);
            return emit(biphoton::cli::run_rto(cfg), cfg);
        }
        if (bell->parsed()) {
            // bell emits a JSON report; an explicit --format csv still errors
            if (!bell_flags.over.format) bell_flags.over.format = OutputFormat::json;
            const Config cfg = build(bell_flags);
            return emit(biphoton::cli::run_bell(cfg), cfg);
        }
        if (check->parsed() || top_check) {
            FlagCapture& flags = check->parsed() ? check_flags : mz_flags;
            if (check->parsed() && flags.over.grid)
                flags.over.check_grid = flags.over.grid;
            Config cfg = build(flags);
            return emit(biphoton::cli::run_check(cfg), cfg);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    std::cout << app.help();
    return 2;
}
