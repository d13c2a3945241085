#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "mobilab/cli.hpp"
#include "mobilab/config.hpp"
#include "mobilab/csv.hpp"
#include "mobilab/metrics.hpp"
#include "mobilab/models.hpp"
#include "mobilab/trace_io.hpp"

using namespace mobilab;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mobilab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("mobilab_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("generate writes a ninety-line BonnMotion trace") {
    fs::path dir = scratch_dir("generate");
    write(dir / "default.cfg", render_config(LabConfig{}));
    Result r = cli({"--config", (dir / "default.cfg").string(), "--seed", "7", "generate", "--format",
                    "bonnmotion", "--out", (dir / "trace.bm").string()});
    CHECK(r.code == kExitOk);
    CHECK(count_lines(slurp(dir / "trace.bm")) == 90);

    Result trailing = cli({"generate", "--seed", "7", "--config", (dir / "default.cfg").string()});
    CHECK(trailing.code == kExitOk);
    CHECK(trailing.out == slurp(dir / "trace.bm"));

    Result ns2 = cli({"generate", "--format", "ns2", "--seed", "7"});
    CHECK(ns2.code == kExitOk);
    CHECK(ns2.out.find("setdest") != std::string::npos);
}

TEST_CASE("metrics on an exported trace match the library path") {
    fs::path dir = scratch_dir("metrics");
    ScenarioConfig cfg;
    cfg.model = MobilityModel::RPGM;
    cfg.seed = 3;
    write(dir / "run.cfg", "[scenario]\nmodel = RPGM\nseed = 3\n");
    Result gen = cli({"generate", "--config", (dir / "run.cfg").string(), "--out", (dir / "t.bm").string()});
    REQUIRE(gen.code == kExitOk);
    Result met = cli({"metrics", "--config", (dir / "run.cfg").string(), "--trace", (dir / "t.bm").string()});
    REQUIRE(met.code == kExitOk);

    Scenario imported = import_bonnmotion(slurp(dir / "t.bm"), cfg.duration, cfg.area());
    MetricReport from_file = compute_all(imported, 75.0, 1.0);
    CHECK(met.out == metrics_csv(std::span(&from_file, 1)));

    MetricReport direct = compute_all(generate(cfg), 75.0, 1.0);
    CHECK(from_file.avg_node_degree == direct.avg_node_degree);
    CHECK(from_file.avg_partitions == direct.avg_partitions);
    CHECK(from_file.link_changes == direct.link_changes);
    CHECK(from_file.avg_link_duration == direct.avg_link_duration);
    CHECK(from_file.avg_relative_speed == doctest::Approx(direct.avg_relative_speed).epsilon(1e-6));

    Result generated = cli({"metrics", "--config", (dir / "run.cfg").string()});
    CHECK(generated.out == metrics_csv(std::span(&direct, 1)));
}

TEST_CASE("unknown config key exits with a usage error naming the key") {
    fs::path dir = scratch_dir("badkey");
    write(dir / "bad.cfg", "[scenario]\nnode_count = 10\nwarp_factor = 9\n");
    Result r = cli({"generate", "--config", (dir / "bad.cfg").string()});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("warp_factor") != std::string::npos);
    CHECK(r.err.find(":3:") != std::string::npos);
}

TEST_CASE("usage errors exit with code one") {
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"teleport"}).code == kExitUsage);
    CHECK(cli({"generate", "--format", "xml"}).code == kExitUsage);
    CHECK(cli({"generate", "--config", "/nonexistent.cfg"}).code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("malformed trace files exit with code two") {
    fs::path dir = scratch_dir("parse");
    write(dir / "bad.bm", "0 1 1\n0 1 oops\n");
    Result r = cli({"metrics", "--trace", (dir / "bad.bm").string()});
    CHECK(r.code == kExitParse);
    CHECK(r.err.find("bad.bm") != std::string::npos);
    CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("validate reports violations with code three") {
    fs::path dir = scratch_dir("validate");
    write(dir / "ok.bm", "0 1 1 900 2 2\n");
    Result ok = cli({"validate", "--trace", (dir / "ok.bm").string()});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("ok") != std::string::npos);

    write(dir / "fast.bm", "0 1 1 10 900 1 900 900 1\n");
    Result fast = cli({"validate", "--trace", (dir / "fast.bm").string()});
    CHECK(fast.code == kExitInvalid);
    CHECK(fast.out.find("speed exceeded") != std::string::npos);
}

TEST_CASE("simulate prints a performance row") {
    fs::path dir = scratch_dir("simulate");
    write(dir / "sim.cfg", "[scenario]\nnode_count = 30\n[routing]\nsimulation_time = 30\nmax_connections = 4\n");
    Result r = cli({"simulate", "--config", (dir / "sim.cfg").string()});
    CHECK(r.code == kExitOk);
    CHECK(count_lines(r.out) == 2);
    CHECK(r.out.find("pdr") != std::string::npos);
    CHECK(cli({"simulate", "--config", (dir / "sim.cfg").string()}).out == r.out);
}

TEST_CASE("experiment CSVs are byte-identical across runs") {
    fs::path dir = scratch_dir("experiment");
    write(dir / "exp.cfg",
          "[scenario]\nnode_count = 30\nduration = 60\n"
          "[routing]\nsimulation_time = 30\nmax_connections = 4\n"
          "[experiment]\nspeed_points = 10, 20\nseeds = 2\noutputs = both\nparallelism = 2\n");
    Result a = cli({"experiment", "--config", (dir / "exp.cfg").string(), "--out", (dir / "a").string()});
    Result b = cli({"experiment", "--config", (dir / "exp.cfg").string(), "--out", (dir / "b").string()});
    REQUIRE(a.code == kExitOk);
    REQUIRE(b.code == kExitOk);
    for (const char* name : {"aggregate.csv", "runs.csv", "separation.csv", "correlation.csv"}) {
        CAPTURE(name);
        std::string x = slurp(dir / "a" / name);
        CHECK_FALSE(x.empty());
        CHECK(x == slurp(dir / "b" / name));
    }
    CHECK(count_lines(slurp(dir / "a" / "aggregate.csv")) == 1 + 8);
    CHECK(count_lines(slurp(dir / "a" / "runs.csv")) == 1 + 16);
    CHECK(count_lines(slurp(dir / "a" / "separation.csv")) == 1 + 10);
    CHECK(count_lines(slurp(dir / "a" / "correlation.csv")) == 1 + 15);
}

TEST_CASE("experiment honours the output directory variable") {
    fs::path dir = scratch_dir("envdir");
    write(dir / "exp.cfg",
          "[scenario]\nnode_count = 20\nduration = 30\n[experiment]\nspeed_points = 10\nseeds = 1\n");
    setenv("MOBILAB_OUT_DIR", (dir / "env").string().c_str(), 1);
    Result r = cli({"experiment", "--config", (dir / "exp.cfg").string()});
    unsetenv("MOBILAB_OUT_DIR");
    CHECK(r.code == kExitOk);
    CHECK(fs::exists(dir / "env" / "aggregate.csv"));
}

TEST_CASE("the installed tool runs") {
    std::string tool = MOBILAB_TOOL_PATH;
    REQUIRE(fs::exists(tool));
    CHECK(std::system((tool + " --help > /dev/null").c_str()) == 0);
    int status = std::system((tool + " frobnicate > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(status) == kExitUsage);
}
