#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* cli = ORBITFLOW_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("orbitflow_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& cmdline) {
  const int rc = std::system(cmdline.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

}  // namespace

TEST_CASE("flow runs are deterministic byte for byte") {
  TempDir tmp;
  write_file(tmp.path / "run.cfg",
             "space = su2\n"
             "grid.L = 12\n"
             "grid.N = 128\n"
             "time.T = 0.1\n"
             "time.snapshots = 3\n"
             "init = sech:0.5\n"
             "out.prefix = det\n");
  const std::string base = std::string(cli) + " --config " + (tmp.path / "run.cfg").string() +
                           " --seed 7 --out ";
  REQUIRE(run(base + (tmp.path / "a").string() + " flow > /dev/null") == 0);
  REQUIRE(run(base + (tmp.path / "b").string() + " flow > /dev/null") == 0);
  CHECK(slurp(tmp.path / "a" / "det_conserved.csv") ==
        slurp(tmp.path / "b" / "det_conserved.csv"));
  CHECK(slurp(tmp.path / "a" / "det_snapshots.jsonl") ==
        slurp(tmp.path / "b" / "det_snapshots.jsonl"));
  // outputs are self-describing: header row plus the config hash
  const std::string csv = slurp(tmp.path / "a" / "det_conserved.csv");
  CHECK(csv.rfind("# orbitflow config=", 0) == 0);
  CHECK(csv.find("t,F0,F1,F2,F3,F4,H,") != std::string::npos);
}

TEST_CASE("exit codes: config error 2, verification pass 0") {
  TempDir tmp;
  const std::string out = " --out " + (tmp.path / "o").string();
  CHECK(run(std::string(cli) + out + " --override space=nope flow 2> /dev/null") == 2);
  CHECK(run(std::string(cli) + " --config /does/not/exist.cfg" + out +
            " flow 2> /dev/null") == 2);
  CHECK(run(std::string(cli) + out + " verify hfm > /dev/null") == 0);
  CHECK(run(std::string(cli) + out + " verify not_a_suite 2> /dev/null") == 3);
}

TEST_CASE("snapshot files can seed later runs") {
  TempDir tmp;
  const std::string out = (tmp.path / "o").string();
  write_file(tmp.path / "run.cfg",
             "space = su2\n"
             "grid.L = 12\n"
             "grid.N = 128\n"
             "time.T = 0.05\n"
             "time.snapshots = 2\n"
             "init = sech:0.4\n"
             "out.prefix = seed\n");
  REQUIRE(run(std::string(cli) + " --config " + (tmp.path / "run.cfg").string() + " --out " +
              out + " flow > /dev/null") == 0);
  // re-ingest the emitted snapshots as explicit samples
  const std::string jsonl = out + "/seed_snapshots.jsonl";
  const int rc = run(std::string(cli) + " --config " + (tmp.path / "run.cfg").string() +
                     " --out " + out + " --override init=jsonl:" + jsonl +
                     " --override out.prefix=seed2 flow > /dev/null");
  CHECK(rc == 0);
  CHECK(fs::exists(out + "/seed2_conserved.csv"));
}

TEST_CASE("develop and finite-type subcommands run") {
  TempDir tmp;
  const std::string out = " --out " + (tmp.path / "o").string();
  CHECK(run(std::string(cli) + out +
            " --override grid.N=128 --override grid.L=12 --override init=sech:0.5"
            " develop > /dev/null") == 0);
  CHECK(run(std::string(cli) + out + " --override finite.T=0.2 finite-type > /dev/null") == 0);
  CHECK(fs::exists((tmp.path / "o" / "run_finite.csv")));
}
