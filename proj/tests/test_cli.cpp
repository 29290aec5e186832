#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = TEST_CLI_PATH;
const std::string kData = TEST_DATA_DIR;

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "v2isim_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("--config a.json --sweep b.json") == 2);
    CHECK(run_cli("--sweep " + kData + "/small_sweep.json --trace packets") == 2);
    CHECK(run_cli("--config " + kData + "/single_point.json --trace bogus") == 2);
    CHECK(run_cli("--config " + kData + "/does_not_exist.json") == 2);
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("a malformed config file exits with code 2") {
    const fs::path bad = scratch_dir() / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run_cli("--config " + bad.string()) == 2);

    const fs::path invalid = scratch_dir() / "invalid.json";
    std::ofstream(invalid) << R"({"scenario":"umi","tech":"lte","app_rate_bps":-1})";
    CHECK(run_cli("--config " + invalid.string()) == 2);
}

TEST_CASE("a single campaign point produces a deterministic metrics file") {
    const fs::path dir = scratch_dir();
    const fs::path out = dir / "point.csv";
    const std::string base = "--config " + kData + "/single_point.json";

    REQUIRE(run_cli(base + " --out " + out.string()) == 0);
    const std::string first = slurp(out);

    CHECK(first.rfind("# v2isim-metrics-v1\n", 0) == 0);
    CHECK(first.find("scenario,tech,enb_density_per_km2,app_rate_bps,n_runs,metric,mean,ci95") !=
          std::string::npos);
    CHECK(first.find("umi,lte,") != std::string::npos);
    CHECK(first.find("avg_throughput_bps") != std::string::npos);
    CHECK(first.find("jain") != std::string::npos);
    // Comment, header, six metric rows.
    CHECK(count_lines(first) == 8);

    const fs::path again = dir / "point_again.csv";
    REQUIRE(run_cli(base + " --out " + again.string()) == 0);
    CHECK(slurp(again) == first);

    const fs::path par = dir / "point_par.csv";
    REQUIRE(run_cli(base + " --out " + par.string() + " --parallel 2") == 0);
    CHECK(slurp(par) == first);
}

TEST_CASE("command line overrides replace file values") {
    const fs::path dir = scratch_dir();
    const fs::path out = dir / "override.csv";
    REQUIRE(run_cli("--config " + kData + "/single_point.json --runs 1 --seed 9 --out " +
                    out.string()) == 0);
    const std::string text = slurp(out);
    // The n_runs column reflects the override.
    CHECK(text.find(",1,avg_throughput_bps,") != std::string::npos);
}

TEST_CASE("a sweep writes one row per point and metric") {
    const fs::path out = scratch_dir() / "sweep.csv";
    REQUIRE(run_cli("--sweep " + kData + "/small_sweep.json --out " + out.string()) == 0);
    const std::string text = slurp(out);
    CHECK(text.rfind("# v2isim-metrics-v1\n", 0) == 0);
    // Two (scenario, tech) cases, one density, one rate, six metrics each.
    CHECK(count_lines(text) == 2 + 12);
    CHECK(text.find("umi,lte,") != std::string::npos);
    CHECK(text.find("umi,mmwave,") != std::string::npos);
}

TEST_CASE("topology tracing writes the deployment next to the metrics") {
    const fs::path dir = scratch_dir();
    const fs::path out = dir / "traced.csv";
    REQUIRE(run_cli("--config " + kData + "/single_point.json --runs 1 --trace topology --out " +
                    out.string()) == 0);

    const fs::path topo = dir / "traced.csv.topology.csv";
    REQUIRE(fs::exists(topo));
    const std::string text = slurp(topo);
    CHECK(text.rfind("kind,id,x_m,y_m,serving_enb\n", 0) == 0);
    CHECK(text.find("enb,0,") != std::string::npos);
    CHECK(text.find("vehicle,0,") != std::string::npos);
    CHECK(fs::exists(out));
}
