#include "biphoton/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <locale>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace biphoton::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double deg2rad(double v) { return v * kPi / 180.0; }

std::vector<double> sweep_grid(int points) {
    // Inclusive grid over [0, 2pi]; the step divides 2pi by points - 1.
    std::vector<double> g(static_cast<std::size_t>(points));
    const double step = kTwoPi / static_cast<double>(points - 1);
    for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = step * k;
    return g;
}

std::string format_of(OutputFormat f) {
    return f == OutputFormat::csv ? "csv" : "json";
}

std::string block_name(BlockedPath b) {
    switch (b) {
        case BlockedPath::none: return "none";
        case BlockedPath::path1: return "path1";
        case BlockedPath::path2: return "path2";
    }
    return "none";
}

// Effective-config echo for provenance. The output destination is not
// part of it so that identical runs yield identical bytes wherever they
// are written.
ordered_json config_echo(const Config& cfg, const std::string& command) {
    ordered_json j;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["format"] = format_of(cfg.format);
    j["generator"] = std::string(kGeneratorName);
    if (command == "mz") {
        j["grid"] = cfg.grid;
        j["phi_1"] = cfg.phi_1;
        j["block"] = block_name(cfg.block);
    } else if (command == "rto") {
        j["grid"] = cfg.grid;
        j["layout"] = {{"phi_w", cfg.layout.phi_w},
                       {"phi_x", cfg.layout.phi_x},
                       {"phi_y", cfg.layout.phi_y},
                       {"phi_z", cfg.layout.phi_z},
                       {"mirror_phase", cfg.layout.mirror_phase}};
        j["table1"] = cfg.table1;
    } else if (command == "check") {
        j["check_grid"] = cfg.check_grid;
        j["check_layouts"] = cfg.check_layouts;
    }
    return j;
}

const char* kTable1Note =
    "at dphi=pi/4 the probability split is p_same=0.854/p_diff=0.146 while "
    "C=0.707; a quoted 71%/29% split tracks C, not (p_same, p_diff)";

struct RtoRow {
    double dphi;
    CoincidenceDist d;
    Correlation c;
    StationMarginals m;
    std::optional<Estimate> c_hat;
};

RtoRow rto_row(const Config& cfg, double dphi, std::uint64_t stream) {
    RtoPhases ph;
    ph.phi_a = 0.0;
    ph.phi_b = dphi;
    ph.layout = cfg.layout;
    RtoRow row;
    row.dphi = dphi;
    row.d = coincidence_probabilities(ph);
    row.c = correlation(ph);
    row.m = marginals(ph);
    if (cfg.trials > 0) {
        RunSpec spec;
        spec.experiment = Experiment::rto;
        spec.n_trials = cfg.trials;
        spec.seed = derive_stream_seed(cfg.seed, stream);
        spec.rto = ph;
        row.c_hat = estimate_C(sample_run(spec));
    }
    return row;
}

}  // namespace

std::string format_double(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(9) << v;
    return os.str();
}

ConfigOverrides load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");

    auto expect = [](bool ok, const std::string& key, const char* want) {
        if (!ok)
            throw std::invalid_argument("config key '" + key + "' must be " + want);
    };

    ConfigOverrides o;
    for (const auto& [key, value] : j.items()) {
        if (key == "grid") {
            expect(value.is_number_integer(), key, "an integer");
            o.grid = value.get<int>();
        } else if (key == "trials") {
            expect(value.is_number_unsigned() || value.is_number_integer(), key, "an integer");
            if (value.is_number_integer() && value.get<long long>() < 0)
                throw std::invalid_argument("config key 'trials' must be nonnegative");
            o.trials = value.get<std::uint64_t>();
        } else if (key == "seed") {
            expect(value.is_number_unsigned() || value.is_number_integer(), key, "an integer");
            if (value.is_number_integer() && value.get<long long>() < 0)
                throw std::invalid_argument("config key 'seed' must be nonnegative");
            o.seed = value.get<std::uint64_t>();
        } else if (key == "format") {
            expect(value.is_string(), key, "\"csv\" or \"json\"");
            const auto s = value.get<std::string>();
            if (s == "csv") o.format = OutputFormat::csv;
            else if (s == "json") o.format = OutputFormat::json;
            else throw std::invalid_argument("config key 'format' must be \"csv\" or \"json\"");
        } else if (key == "out") {
            expect(value.is_string(), key, "a string");
            o.out_path = value.get<std::string>();
        } else if (key == "degrees") {
            expect(value.is_boolean(), key, "a boolean");
            o.degrees = value.get<bool>();
        } else if (key == "phi1") {
            expect(value.is_number(), key, "a number");
            o.phi_1 = value.get<double>();
        } else if (key == "block") {
            expect(value.is_string(), key, "\"none\", \"path1\" or \"path2\"");
            const auto s = value.get<std::string>();
            if (s == "none") o.block = BlockedPath::none;
            else if (s == "path1") o.block = BlockedPath::path1;
            else if (s == "path2") o.block = BlockedPath::path2;
            else throw std::invalid_argument("config key 'block' must be \"none\", \"path1\" or \"path2\"");
        } else if (key == "layout") {
            expect(value.is_object(), key, "an object");
            for (const auto& [lk, lv] : value.items()) {
                expect(lv.is_number(), "layout." + lk, "a number");
                if (lk == "phi_w") o.phi_w = lv.get<double>();
                else if (lk == "phi_x") o.phi_x = lv.get<double>();
                else if (lk == "phi_y") o.phi_y = lv.get<double>();
                else if (lk == "phi_z") o.phi_z = lv.get<double>();
                else if (lk == "mirror_phase") o.mirror_phase = lv.get<double>();
                else throw std::invalid_argument("unknown config key 'layout." + lk + "'");
            }
        } else if (key == "table1") {
            expect(value.is_boolean(), key, "a boolean");
            o.table1 = value.get<bool>();
        } else if (key == "settings") {
            expect(value.is_object(), key, "an object");
            for (const auto& [sk, sv] : value.items()) {
                expect(sv.is_number(), "settings." + sk, "a number");
                if (sk == "a1") o.a1 = sv.get<double>();
                else if (sk == "a2") o.a2 = sv.get<double>();
                else if (sk == "b1") o.b1 = sv.get<double>();
                else if (sk == "b2") o.b2 = sv.get<double>();
                else throw std::invalid_argument("unknown config key 'settings." + sk + "'");
            }
        } else if (key == "check_grid") {
            expect(value.is_number_integer(), key, "an integer");
            o.check_grid = value.get<int>();
        } else if (key == "check_layouts") {
            expect(value.is_number_integer(), key, "an integer");
            o.check_layouts = value.get<int>();
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    return o;
}

Config finalize_config(const ConfigOverrides& file, const ConfigOverrides& flags,
                       std::optional<std::uint64_t> env_seed) {
    Config cfg;
    const bool degrees = flags.degrees.value_or(file.degrees.value_or(false));

    if (env_seed) cfg.seed = *env_seed;

    auto take = [](auto& field, const auto& from_file, const auto& from_flags) {
        if (from_file) field = *from_file;
        if (from_flags) field = *from_flags;
    };
    auto take_angle = [&](double& field, const std::optional<double>& from_file,
                          const std::optional<double>& from_flags) {
        if (from_file) field = degrees ? deg2rad(*from_file) : *from_file;
        if (from_flags) field = degrees ? deg2rad(*from_flags) : *from_flags;
    };

    take(cfg.grid, file.grid, flags.grid);
    take(cfg.trials, file.trials, flags.trials);
    take(cfg.seed, file.seed, flags.seed);
    take(cfg.format, file.format, flags.format);
    take(cfg.out_path, file.out_path, flags.out_path);
    take(cfg.block, file.block, flags.block);
    take(cfg.table1, file.table1, flags.table1);
    take(cfg.check_grid, file.check_grid, flags.check_grid);
    take(cfg.check_layouts, file.check_layouts, flags.check_layouts);

    take_angle(cfg.phi_1, file.phi_1, flags.phi_1);
    take_angle(cfg.layout.phi_w, file.phi_w, flags.phi_w);
    take_angle(cfg.layout.phi_x, file.phi_x, flags.phi_x);
    take_angle(cfg.layout.phi_y, file.phi_y, flags.phi_y);
    take_angle(cfg.layout.phi_z, file.phi_z, flags.phi_z);
    take_angle(cfg.layout.mirror_phase, file.mirror_phase, flags.mirror_phase);
    take_angle(cfg.settings.a1, file.a1, flags.a1);
    take_angle(cfg.settings.a2, file.a2, flags.a2);
    take_angle(cfg.settings.b1, file.b1, flags.b1);
    take_angle(cfg.settings.b2, file.b2, flags.b2);

    if (cfg.grid < 2)
        throw std::invalid_argument("grid must be at least 2 points");
    if ((file.trials && *file.trials == 0) || (flags.trials && *flags.trials == 0))
        throw std::invalid_argument("trials must be at least 1");
    if (cfg.check_grid < 2)
        throw std::invalid_argument("check grid must be at least 2 points");
    if (cfg.check_layouts < 1)
        throw std::invalid_argument("check layouts must be at least 1");
    return cfg;
}

CommandResult run_mz(const Config& cfg) {
    const auto grid = sweep_grid(cfg.grid);
    const bool with_mc = cfg.trials > 0;

    struct Row {
        double dphi;
        MziOutcome out;
        std::optional<Estimate> d1_hat;
    };
    std::vector<Row> rows;
    rows.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        MziConfig mz;
        mz.phi_1 = cfg.phi_1;
        mz.phi_2 = cfg.phi_1 + grid[k];
        mz.blocked = cfg.block;
        Row row;
        row.dphi = grid[k];
        row.out = cfg.block == BlockedPath::none ? mz_probabilities(mz)
                                                 : mz_blocked(mz);
        const double total = row.out.p_d1 + row.out.p_d2 + row.out.p_absorbed;
        if (std::abs(total - 1.0) > kAnalyticTol)
            return {1, "", "internal invariant violation: mz outcome does not sum to 1"};
        if (with_mc) {
            RunSpec spec;
            spec.experiment = Experiment::mz;
            spec.n_trials = cfg.trials;
            spec.seed = derive_stream_seed(cfg.seed, k);
            spec.mz = mz;
            row.d1_hat = estimate_probability(sample_run(spec), "D1");
        }
        rows.push_back(row);
    }

    CommandResult res;
    if (cfg.format == OutputFormat::csv) {
        std::string s = with_mc ? "dphi,p_d1,p_d2,p_d1_hat,se" : "dphi,p_d1,p_d2";
        s += '\n';
        for (const auto& r : rows) {
            s += format_double(r.dphi) + ',' + format_double(r.out.p_d1) + ',' +
                 format_double(r.out.p_d2);
            if (with_mc)
                s += ',' + format_double(r.d1_hat->value) + ',' +
                     format_double(r.d1_hat->std_error);
            s += '\n';
        }
        res.output = std::move(s);
    } else {
        ordered_json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "mz";
        j["config"] = config_echo(cfg, "mz");
        j["rows"] = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json row;
            row["dphi"] = r.dphi;
            row["p_d1"] = r.out.p_d1;
            row["p_d2"] = r.out.p_d2;
            row["p_absorbed"] = r.out.p_absorbed;
            if (cfg.block != BlockedPath::none) {
                row["p_d1_given_detected"] = r.out.p_d1_given_detected();
                row["p_d2_given_detected"] = r.out.p_d2_given_detected();
            }
            if (with_mc) {
                row["p_d1_hat"] = r.d1_hat->value;
                row["se"] = r.d1_hat->std_error;
            }
            j["rows"].push_back(std::move(row));
        }
        res.output = j.dump(2) + '\n';
    }
    return res;
}

CommandResult run_rto(const Config& cfg) {
    std::vector<double> grid;
    if (cfg.table1) {
        grid = {0.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0, kPi};
    } else {
        grid = sweep_grid(cfg.grid);
    }

    std::vector<RtoRow> rows;
    rows.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        rows.push_back(rto_row(cfg, grid[k], k));
        const auto& r = rows.back();
        if (std::abs(r.d.sum() - 1.0) > kAnalyticTol ||
            std::abs(r.m.a1 - 0.5) > kAnalyticTol ||
            std::abs(r.m.b1 - 0.5) > kAnalyticTol)
            return {1, "", "internal invariant violation: coincidence normalization or marginals"};
    }

    const bool with_mc = cfg.trials > 0;
    CommandResult res;
    if (cfg.format == OutputFormat::csv) {
        std::string s;
        if (cfg.table1) s += std::string("# ") + kTable1Note + '\n';
        s += "dphi,p11,p12,p21,p22,p_same,p_diff,C,pA1,pB1";
        if (with_mc) s += ",C_hat,se";
        s += '\n';
        for (const auto& r : rows) {
            s += format_double(r.dphi) + ',' + format_double(r.d.p11) + ',' +
                 format_double(r.d.p12) + ',' + format_double(r.d.p21) + ',' +
                 format_double(r.d.p22) + ',' + format_double(r.c.p_same) + ',' +
                 format_double(r.c.p_different) + ',' + format_double(r.c.degree) +
                 ',' + format_double(r.m.a1) + ',' + format_double(r.m.b1);
            if (with_mc)
                s += ',' + format_double(r.c_hat->value) + ',' +
                     format_double(r.c_hat->std_error);
            s += '\n';
        }
        res.output = std::move(s);
    } else {
        ordered_json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "rto";
        j["config"] = config_echo(cfg, "rto");
        if (cfg.table1) j["note"] = kTable1Note;
        j["rows"] = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json row;
            row["dphi"] = r.dphi;
            row["p11"] = r.d.p11;
            row["p12"] = r.d.p12;
            row["p21"] = r.d.p21;
            row["p22"] = r.d.p22;
            row["p_same"] = r.c.p_same;
            row["p_diff"] = r.c.p_different;
            row["C"] = r.c.degree;
            row["pA1"] = r.m.a1;
            row["pB1"] = r.m.b1;
            if (with_mc) {
                row["C_hat"] = r.c_hat->value;
                row["se"] = r.c_hat->std_error;
            }
            j["rows"].push_back(std::move(row));
        }
        res.output = j.dump(2) + '\n';
    }
    return res;
}

CommandResult run_bell(const Config& cfg) {
    if (cfg.format == OutputFormat::csv)
        throw std::invalid_argument("the bell command emits a JSON report; use --format json");
    const std::uint64_t n = cfg.trials > 0 ? cfg.trials : 10000;
    const double s_analytic = chsh_S(cfg.settings);
    const ChshMcResult mc = chsh_mc(cfg.settings, n, cfg.seed);

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "bell";
    j["config"] = config_echo(cfg, "bell");
    j["settings"] = {{"a1", cfg.settings.a1},
                     {"a2", cfg.settings.a2},
                     {"b1", cfg.settings.b1},
                     {"b2", cfg.settings.b2}};
    j["S_analytic"] = s_analytic;
    j["S_hat"] = mc.s_hat;
    j["sigma_S"] = mc.sigma_s;
    j["n_sigmas_violation"] = mc.n_sigmas_violation;
    j["seed"] = cfg.seed;
    j["n_per_setting"] = n;

    CommandResult res;
    res.output = j.dump(2) + '\n';
    return res;
}

namespace {

struct CheckOutcome {
    std::string name;
    bool pass;
    std::string detail;
};

}  // namespace

CommandResult run_check(const Config& cfg) {
    std::vector<CheckOutcome> outcomes;
    const int g = cfg.check_grid;
    const int layouts = cfg.check_layouts;

    {  // every element operator, plain and lifted, is unitary
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, kTwoPi);
        bool ok = true;
        for (int k = 0; k < 16; ++k) {
            const ModeBasis& a = station_a_basis();
            const ModeBasis& ab = biphoton_basis();
            const Operator ops[] = {
                beam_splitter(a), phase_shifter(a, u(rng), "A2"),
                mirror(a, u(rng)), lift(beam_splitter(a), ab, Subsystem::A),
                lift(phase_shifter(a, u(rng), "A1"), ab, Subsystem::A)};
            for (const auto& op : ops) ok = ok && op.is_unitary();
        }
        outcomes.push_back({"element-unitarity", ok, ""});
    }

    {  // interferometer pipeline matches the closed-form fringe
        double worst = 0.0;
        for (int k = 0; k < 64; ++k) {
            const double dphi = kTwoPi * k / 64.0;
            const MziOutcome out = mz_probabilities({0.0, dphi});
            worst = std::max(worst, std::abs(out.p_d1 - (1.0 + std::cos(dphi)) / 2.0));
        }
        outcomes.push_back({"mz-closed-form", worst < kAnalyticTol,
                            "max deviation " + format_double(worst)});
    }

    {  // blocking kills the fringe; open paths give unit visibility
        double lo = 1.0, hi = 0.0, var = 0.0, base = -1.0;
        for (int k = 0; k < 64; ++k) {
            const double dphi = kTwoPi * k / 64.0;
            const MziOutcome open = mz_probabilities({0.0, dphi});
            lo = std::min(lo, open.p_d1);
            hi = std::max(hi, open.p_d1);
            const MziOutcome blocked = mz_blocked({0.0, dphi, BlockedPath::path2});
            if (base < 0.0) base = blocked.p_d1;
            var = std::max(var, std::abs(blocked.p_d1 - base));
        }
        const double visibility = (hi - lo) / (hi + lo);
        const bool pass = std::abs(visibility - 1.0) < kPhaseTol && var < kAnalyticTol;
        outcomes.push_back({"mz-visibility", pass,
                            "open " + format_double(visibility) + ", blocked variation " +
                                format_double(var)});
    }

    {  // pipeline coincidences match the fringe forms with derived offsets
        const RtoPhases probe{0.0, 0.0, cfg.layout};
        const FixedPhases f = derive_fixed(probe);
        double worst = 0.0;
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) {
                const double pa = kTwoPi * i / g;
                const double pb = kTwoPi * j / g;
                const CoincidenceDist d =
                    coincidence_probabilities({pa, pb, cfg.layout});
                const double want11 = (1.0 + std::cos(pb - pa + f.phi_u)) / 4.0;
                const double want12 = (1.0 + std::cos(pb - pa + f.phi_v)) / 4.0;
                worst = std::max({worst, std::abs(d.p11 - want11),
                                  std::abs(d.p12 - want12),
                                  std::abs(d.sum() - 1.0)});
            }
        }
        outcomes.push_back({"rto-closed-form", worst < kAnalyticTol,
                            "max deviation " + format_double(worst)});
    }

    {  // single-detector marginals are flat at 1/2
        std::mt19937_64 rng(22);
        double worst = 0.0;
        auto scan = [&](const RtoLayout& ly, int grid_points) {
            for (int i = 0; i < grid_points; ++i) {
                for (int j = 0; j < grid_points; ++j) {
                    const double pa = kTwoPi * i / grid_points;
                    const double pb = kTwoPi * j / grid_points;
                    const StationMarginals m = marginals({pa, pb, ly});
                    worst = std::max({worst, std::abs(m.a1 - 0.5), std::abs(m.a2 - 0.5),
                                      std::abs(m.b1 - 0.5), std::abs(m.b2 - 0.5)});
                }
            }
        };
        scan(cfg.layout, g);
        for (int l = 0; l < layouts; ++l) scan(RtoLayout::random(rng), 8);
        outcomes.push_back({"no-signaling-marginals", worst < kAnalyticTol,
                            "max deviation " + format_double(worst)});
    }

    {  // the two fringe offsets differ by pi for any layout
        std::mt19937_64 rng(33);
        double worst = 0.0;
        for (int l = 0; l < layouts; ++l) {
            const RtoPhases probe{0.0, 0.0, RtoLayout::random(rng)};
            const FixedPhases f = derive_fixed(probe);
            worst = std::max(worst, phase_distance(f.phi_v, f.phi_u + kPi));
        }
        outcomes.push_back({"fixed-phase-offsets", worst < kPhaseTol,
                            "max |phi_v - phi_u - pi| " + format_double(worst)});
    }

    {  // CHSH bounds
        const auto dets = chsh_deterministic_values();
        bool classical_ok = chsh_classical_bound() == 2.0;
        for (const double v : dets) classical_ok = classical_ok && v <= 2.0;
        const double s = chsh_S(ChshSettings::optimal());
        const bool quantum_ok = std::abs(s - 2.0 * std::sqrt(2.0)) < 1e-6;
        outcomes.push_back({"chsh-classical-bound", classical_ok, ""});
        outcomes.push_back({"chsh-quantum-maximum", quantum_ok,
                            "S = " + format_double(s)});
    }

    {  // identical specs reproduce identical tallies, chunking included
        RunSpec spec;
        spec.experiment = Experiment::rto;
        spec.n_trials = 20000;
        spec.seed = 42;
        spec.rto.phi_b = kPi / 3.0;
        const TrialTally once = sample_run(spec);
        const TrialTally twice = sample_run(spec);
        RunSpec chunked = spec;
        chunked.chunks = 7;
        const TrialTally merged = sample_run(chunked);
        const bool pass = once.counts == twice.counts && once.counts == merged.counts;
        outcomes.push_back({"sampling-determinism", pass, ""});
    }

    CommandResult res;
    int failed = 0;
    for (const auto& o : outcomes) {
        res.output += o.pass ? "PASS " : "FAIL ";
        res.output += o.name;
        if (!o.detail.empty()) res.output += " (" + o.detail + ")";
        res.output += '\n';
        if (!o.pass) ++failed;
    }
    res.output += std::to_string(outcomes.size() - failed) + "/" +
                  std::to_string(outcomes.size()) + " checks passed\n";
    res.exit_code = failed == 0 ? 0 : 1;
    if (failed > 0) res.error = "invariant checks failed";
    return res;
}

}  // namespace biphoton::cli
