#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("indicate_cli_" + std::to_string(::getpid()) +
                                            "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(INDICATE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_config(const fs::path& path, const std::string& extra) {
    std::ofstream out(path);
    out << extra;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);

    TempDir dir;
    write_config(dir.path / "bad.conf", "sim_units = 0\n");
    const std::string cfg = " --config " + (dir.path / "bad.conf").string();
    CHECK(run_cli("simulate" + cfg) == 2);
}

TEST_CASE("simulate writes validating, reproducible files") {
    TempDir dir;
    const std::string conf = (dir.path / "run.conf").string();
    write_config(conf,
                 "units_file = " + (dir.path / "units.csv").string() + "\n" +
                 "visits_file = " + (dir.path / "visits.csv").string() + "\n" +
                 "truth_file = " + (dir.path / "truth.csv").string() + "\n" +
                 "out_dir = " + (dir.path / "out").string() + "\n" +
                 "sim_units = 40\nsim_window = 20\n");
    CHECK(run_cli("simulate --config " + conf + " --seed 4") == 0);
    CHECK(fs::exists(dir.path / "units.csv"));
    CHECK(fs::exists(dir.path / "visits.csv"));
    CHECK(fs::exists(dir.path / "truth.csv"));
    CHECK(run_cli("validate --config " + conf) == 0);

    const std::string first = slurp(dir.path / "units.csv");
    CHECK(run_cli("simulate --config " + conf + " --seed 4") == 0);
    CHECK(slurp(dir.path / "units.csv") == first);
    CHECK(run_cli("simulate --config " + conf + " --seed 5") == 0);
    CHECK(slurp(dir.path / "units.csv") != first);
}

TEST_CASE("validation failures exit with code 3") {
    TempDir dir;
    const std::string conf = (dir.path / "run.conf").string();
    write_config(conf,
                 "units_file = " + (dir.path / "units.csv").string() + "\n" +
                 "visits_file = " + (dir.path / "missing.csv").string() + "\n");
    std::ofstream units(dir.path / "units.csv");
    units << "unit_id,treated,indication_day,death_day,followup_end_day,calendar_entry,x0_1\n"
             "a,0,,,10,0,0\n";
    units.close();
    // visits file absent: distinct from usage (2) and success (0)
    CHECK(run_cli("validate --config " + conf) == 3);

    std::ofstream visits(dir.path / "missing.csv");
    visits << "unit_id,day,v_1\na,5,1\n";  // first visit not at day 0
    visits.close();
    CHECK(run_cli("validate --config " + conf) == 3);
}

TEST_CASE("fit on a tiny cohort writes per-window outputs") {
    TempDir dir;
    const std::string conf = (dir.path / "run.conf").string();
    write_config(conf,
                 "units_file = " + (dir.path / "units.csv").string() + "\n" +
                 "visits_file = " + (dir.path / "visits.csv").string() + "\n" +
                 "truth_file = " + (dir.path / "truth.csv").string() + "\n" +
                 "out_dir = " + (dir.path / "out").string() + "\n" +
                 "sim_units = 50\nsim_window = 10\nwindows = 5, 10\n" +
                 "chains = 2\niterations = 150\nburn_in = 50\nmc_paths = 40\n" +
                 "dic_max_draws = 10\nskip_matching = true\n");
    REQUIRE(run_cli("simulate --config " + conf + " --seed 21") == 0);
    CHECK(run_cli("fit --config " + conf + " --allow-unconverged") == 0);
    for (const std::string K : {"5", "10"}) {
        CHECK(fs::exists(dir.path / "out" / K / "draws.csv"));
        CHECK(fs::exists(dir.path / "out" / K / "imputations.csv"));
        CHECK(fs::exists(dir.path / "out" / K / "diagnostics.csv"));
        CHECK(fs::exists(dir.path / "out" / K / "dic.csv"));
    }
    CHECK(run_cli("report --config " + conf) == 0);
    CHECK(fs::exists(dir.path / "out" / "effects.csv"));
    CHECK(fs::exists(dir.path / "out" / "rsm.csv"));

    // Single-chain run still succeeds and notes the missing R-hat.
    CHECK(run_cli("fit --config " + conf + " --chains 1 --allow-unconverged") == 0);
    const std::string diag = slurp(dir.path / "out" / "5" / "diagnostics.csv");
    CHECK(diag.find("geweke_z_chain1") != std::string::npos);
    CHECK(diag.find("geweke_z_chain2") == std::string::npos);
}
