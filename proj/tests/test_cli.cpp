#include "biphoton/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

using namespace biphoton;
using namespace biphoton::cli;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::vector<double>> parse_csv(const std::string& text,
                                           std::string* header = nullptr) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (header != nullptr) *header = line;
            saw_header = true;
            continue;
        }
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string golden_path(const std::string& name) {
    return std::string(BIPHOTON_GOLDEN_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(static_cast<bool>(in), "missing file: " << path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = (std::filesystem::temp_directory_path() /
                ("biphoton_cli_test_" + std::to_string(counter++) + ".json"))
                   .string();
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("format_double uses 9 significant digits with a dot separator") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.8824210936422443) == "0.882421094");
    CHECK(format_double(2.8284271247461903) == "2.82842712");
    CHECK(format_double(0.0) == "0");
}

TEST_CASE("config precedence: defaults, then env, then file, then flags") {
    const Config defaults = finalize_config({}, {}, std::nullopt);
    CHECK(defaults.grid == 65);
    CHECK(defaults.seed == kDefaultSeed);
    CHECK(defaults.format == OutputFormat::csv);

    const Config with_env = finalize_config({}, {}, 111);
    CHECK(with_env.seed == 111);

    ConfigOverrides file;
    file.seed = 222;
    file.grid = 9;
    CHECK(finalize_config(file, {}, 111).seed == 222);

    ConfigOverrides flags;
    flags.seed = 333;
    const Config merged = finalize_config(file, flags, 111);
    CHECK(merged.seed == 333);
    CHECK(merged.grid == 9);
}

TEST_CASE("degrees mode converts supplied angles but not built-in defaults") {
    ConfigOverrides flags;
    flags.degrees = true;
    flags.phi_w = 180.0;
    flags.a1 = 90.0;
    const Config cfg = finalize_config({}, flags, std::nullopt);
    CHECK(cfg.layout.phi_w == doctest::Approx(kPi));
    CHECK(cfg.settings.a1 == doctest::Approx(kPi / 2.0));
    // untouched defaults stay in radians
    CHECK(cfg.settings.b1 == doctest::Approx(kPi / 4.0));
    CHECK(cfg.layout.mirror_phase == doctest::Approx(kPi / 2.0));
}

TEST_CASE("config validation rejects degenerate values") {
    ConfigOverrides flags;
    flags.grid = 1;
    CHECK_THROWS_AS(finalize_config({}, flags, std::nullopt), std::invalid_argument);
    flags.grid = 5;
    flags.trials = 0;
    CHECK_THROWS_AS(finalize_config({}, flags, std::nullopt), std::invalid_argument);
}

TEST_CASE("config files are schema-checked before any run") {
    const TempFile good(R"({"grid": 5, "seed": 7, "format": "json",
                            "layout": {"phi_w": 1.0}, "settings": {"a1": 0.5}})");
    const ConfigOverrides o = load_config_file(good.path);
    CHECK(o.grid == 5);
    CHECK(o.seed == 7);
    CHECK(o.format == OutputFormat::json);
    CHECK(o.phi_w == 1.0);
    CHECK(o.a1 == 0.5);

    const TempFile unknown(R"({"gird": 5})");
    CHECK_THROWS_AS(load_config_file(unknown.path), std::invalid_argument);
    const TempFile bad_type(R"({"grid": "five"})");
    CHECK_THROWS_AS(load_config_file(bad_type.path), std::invalid_argument);
    const TempFile bad_nested(R"({"layout": {"phi_q": 1.0}})");
    CHECK_THROWS_AS(load_config_file(bad_nested.path), std::invalid_argument);
    const TempFile not_json("grid: 5");
    CHECK_THROWS_AS(load_config_file(not_json.path), std::invalid_argument);
    CHECK_THROWS_AS(load_config_file("/nonexistent/path.json"), std::invalid_argument);
}

TEST_CASE("mz sweep hits the textbook endpoints on a 5-point grid") {
    Config cfg;
    cfg.grid = 5;
    const CommandResult res = run_mz(cfg);
    CHECK(res.exit_code == 0);
    std::string header;
    const auto rows = parse_csv(res.output, &header);
    CHECK(header == "dphi,p_d1,p_d2");
    REQUIRE(rows.size() == 5);
    const std::vector<double> want{1.0, 0.5, 0.0, 0.5, 1.0};
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k][0] == doctest::Approx(kPi / 2.0 * k).epsilon(1e-7));
        CHECK(rows[k][1] == doctest::Approx(want[k]).epsilon(1e-9));
        CHECK(rows[k][1] + rows[k][2] == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("a blocked sweep is phase independent") {
    Config cfg;
    cfg.grid = 17;
    cfg.block = BlockedPath::path1;
    const auto rows = parse_csv(run_mz(cfg).output);
    REQUIRE(rows.size() == 17);
    for (const auto& row : rows) {
        CHECK(row[1] == doctest::Approx(rows[0][1]).epsilon(1e-12));
        CHECK(row[1] == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("mz trials append estimate columns seeded per grid point") {
    Config cfg;
    cfg.grid = 5;
    cfg.trials = 2000;
    cfg.seed = 42;
    std::string header;
    const auto rows = parse_csv(run_mz(cfg).output, &header);
    CHECK(header == "dphi,p_d1,p_d2,p_d1_hat,se");
    REQUIRE(rows.size() == 5);
    CHECK(rows[0][3] == doctest::Approx(1.0));  // p = 1 exactly, se = 0
    CHECK(rows[0][4] == doctest::Approx(0.0));
    for (const auto& row : rows)
        CHECK(std::abs(row[3] - row[1]) <= 4.0 * std::sqrt(0.25 / 2000.0) + 1e-12);
}

TEST_CASE("rto sweep: correlation endpoints and flat marginals") {
    Config cfg;
    cfg.grid = 3;
    std::string header;
    const auto rows = parse_csv(run_rto(cfg).output, &header);
    CHECK(header == "dphi,p11,p12,p21,p22,p_same,p_diff,C,pA1,pB1");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][7] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rows[1][7] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(rows[2][7] == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& row : rows) {
        CHECK(row[8] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(row[9] == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("the five-row comparison table carries its footnote") {
    Config cfg;
    cfg.table1 = true;
    const CommandResult res = run_rto(cfg);
    CHECK(res.output.rfind("# ", 0) == 0);
    const auto rows = parse_csv(res.output);
    REQUIRE(rows.size() == 5);
    // dphi = pi/2 row: same and different each carry half
    CHECK(rows[2][0] == doctest::Approx(kPi / 2.0));
    CHECK(rows[2][5] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rows[2][6] == doctest::Approx(0.5).epsilon(1e-12));
    // dphi = pi/4 row: both the 0.854/0.146 split and C = 0.707 appear
    CHECK(rows[1][5] == doctest::Approx(0.8535533905932737).epsilon(1e-9));
    CHECK(rows[1][6] == doctest::Approx(0.1464466094067263).epsilon(1e-9));
    CHECK(rows[1][7] == doctest::Approx(0.7071067811865476).epsilon(1e-9));
}

TEST_CASE("bell reports the violation as JSON with the schema fields") {
    Config cfg;
    cfg.format = OutputFormat::json;
    cfg.trials = 10000;
    cfg.seed = 42;
    const CommandResult res = run_bell(cfg);
    CHECK(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["command"] == "bell");
    CHECK(j["config"]["generator"] == "splitmix64");
    CHECK(j["S_analytic"].get<double>() == doctest::Approx(2.8284271247461903).epsilon(1e-9));
    CHECK(j["n_per_setting"] == 10000);
    CHECK(j["seed"] == 42);
    CHECK(j["settings"]["b2"].get<double>() == doctest::Approx(3.0 * kPi / 4.0));
    CHECK(j["n_sigmas_violation"].get<double>() >= 10.0);
    CHECK(std::abs(j["S_hat"].get<double>() - 2.8284271247461903) <
          4.0 * j["sigma_S"].get<double>());

    Config csv_cfg;
    csv_cfg.format = OutputFormat::csv;
    CHECK_THROWS_AS(run_bell(csv_cfg), std::invalid_argument);
}

TEST_CASE("json sweeps echo the effective config") {
    Config cfg;
    cfg.grid = 4;
    cfg.format = OutputFormat::json;
    cfg.seed = 9;
    const auto j = nlohmann::json::parse(run_rto(cfg).output);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["config"]["grid"] == 4);
    CHECK(j["config"]["seed"] == 9);
    CHECK(j["config"]["layout"]["phi_w"].get<double>() == doctest::Approx(kPi));
    CHECK(j["rows"].size() == 4);
}

TEST_CASE("identical configs reproduce byte-identical output") {
    Config cfg;
    cfg.grid = 9;
    cfg.trials = 2000;
    cfg.seed = 42;
    CHECK(run_mz(cfg).output == run_mz(cfg).output);
    CHECK(run_rto(cfg).output == run_rto(cfg).output);
}

TEST_CASE("golden files: mz, rto and bell outputs are frozen") {
    Config mz_cfg;
    mz_cfg.grid = 9;
    mz_cfg.trials = 2000;
    mz_cfg.seed = 42;
    CHECK(run_mz(mz_cfg).output == read_file(golden_path("mz_grid9_trials2000_seed42.csv")));

    Config mz_plain;
    mz_plain.grid = 9;
    CHECK(run_mz(mz_plain).output == read_file(golden_path("mz_grid9.csv")));

    Config rto_cfg;
    rto_cfg.grid = 9;
    CHECK(run_rto(rto_cfg).output == read_file(golden_path("rto_grid9.csv")));

    Config t1_cfg;
    t1_cfg.table1 = true;
    CHECK(run_rto(t1_cfg).output == read_file(golden_path("rto_table1.csv")));

    Config bell_cfg;
    bell_cfg.format = OutputFormat::json;
    bell_cfg.trials = 10000;
    bell_cfg.seed = 42;
    CHECK(run_bell(bell_cfg).output == read_file(golden_path("bell_trials10000_seed42.json")));
}

TEST_CASE("the invariant suite passes at reduced size") {
    Config cfg;
    cfg.check_grid = 12;
    cfg.check_layouts = 10;
    const CommandResult res = run_check(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("FAIL") == std::string::npos);
    CHECK(res.output.find("checks passed") != std::string::npos);
}
