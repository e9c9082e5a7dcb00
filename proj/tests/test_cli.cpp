#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(HWEPI_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("hwepi_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const auto p = dir / "model.cfg";
    std::ofstream(p) << body;
    return p;
}

const char* kModel = "h=4\nd=1\ntheta=0.4\nbeta=3\npi_g=0.025\npi_h_given_gc=0.5\nn=200\n";

}  // namespace

TEST_CASE("every CSV output starts with the schema line") {
    const auto dir = scratch("schema");
    const auto cfg = write_config(dir, kModel).string();
    REQUIRE(run("generate --config " + cfg + " --out " + (dir / "pop.csv").string()) == 0);
    REQUIRE(run("simulate --config " + cfg + " --sims 20 --out " + (dir / "runs.csv").string()) == 0);
    REQUIRE(run("analyze --config " + cfg + " --out " + (dir / "an.csv").string()) == 0);
    REQUIRE(run("tables --config " + cfg + " --kind susset --out " + (dir / "t.csv").string()) == 0);
    for (const char* f : {"pop.csv", "runs.csv", "an.csv", "t.csv"}) {
        CHECK(slurp(dir / f).rfind("#schema=v1\n", 0) == 0);
        CHECK(fs::exists(dir / (std::string(f) + ".manifest.json")));
    }
}

TEST_CASE("configuration errors exit with status 2") {
    const auto dir = scratch("errors");
    CHECK(run("analyze --config " + (dir / "missing.cfg").string() + " --out " + (dir / "x.csv").string()) == 2);
    const auto bad = write_config(dir, "h=4\nd=1\ntheta=1.5\nbeta=3\npi_g=0.025\npi_h_given_gc=0.5\n").string();
    CHECK(run("analyze --config " + bad + " --out " + (dir / "x.csv").string()) == 2);
    const auto odd = write_config(dir, "h=4\nd=1\ntheta=0.4\nbeta=3\npi_g=0.025\npi_h_given_gc=0.5\nn=201\n").string();
    CHECK(run("generate --config " + odd + " --out " + (dir / "x.csv").string()) == 2);
    CHECK(run("nonsense") == 2);
    CHECK(run("analyze --exact sometimes --out x.csv") == 2);
}

TEST_CASE("replay with another thread count reproduces outputs") {
    const auto dir = scratch("replay");
    const auto cfg = write_config(dir, kModel).string();
    const auto out = dir / "runs.csv";
    REQUIRE(run("simulate --config " + cfg + " --sims 50 --seed 9 --threads 1 --out " + out.string()) == 0);
    const auto again = dir / "again";
    CHECK(run("replay " + (dir / "runs.csv.manifest.json").string() + " --threads 2 --out-dir " + again.string()) == 0);
    CHECK(slurp(out) == slurp(again / "runs.csv"));

    std::ofstream(again / "runs.csv", std::ios::app) << "tampered\n";
    const auto third = dir / "third";
    CHECK(run("replay " + (dir / "runs.csv.manifest.json").string() + " --out-dir " + third.string()) == 0);
    CHECK(run("replay " + (dir / "nope.json").string()) == 2);
}

TEST_CASE("zero simulations write header-only histograms") {
    const auto dir = scratch("fig1");
    REQUIRE(run("fig1 --sims 0 --out-dir " + dir.string()) == 0);
    for (int i = 1; i <= 4; ++i)
        CHECK(slurp(dir / ("fig1_panel" + std::to_string(i) + ".csv")) ==
              "#schema=v1\ntheta,n,final_size,fraction,count\n");
    CHECK(fs::exists(dir / "manifest.json"));
}
