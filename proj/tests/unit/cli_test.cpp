#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_tool(const std::string& args) {
  const std::string cmd = std::string(LTQ_TOOL_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("ltq_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
  static int& counter() { static int c = 0; return c; }
  std::string file(const std::string& name, const std::string& contents) const {
    const fs::path p = path / name;
    std::ofstream(p) << contents;
    return p.string();
  }
  std::string name(const std::string& n) const { return (path / n).string(); }
};

const char* kBase =
    "R = 15\np = 10\nc = 8\nl = 3\nr = 0.5\nlambda = 10\nmu = 12\n";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("solve prints the provider-dynamic summary") {
  TempDir dir;
  const std::string scn = dir.file("base.scn", kBase);
  const RunResult r = run_tool("solve --scenario " + scn + " --problem provider-dynamic");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("bounds [6,10]") != std::string::npos);
  CHECK(r.out.find("n_P=9") != std::string::npos);
  CHECK(r.out.find("P*=94.9") != std::string::npos);
}

TEST_CASE("solve social single matches the published row") {
  TempDir dir;
  const std::string scn = dir.file("base.scn", kBase);
  const RunResult r = run_tool("solve --scenario " + scn + " --problem social-single");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("n_Sc=8") != std::string::npos);
  CHECK(r.out.find("S*_c=105.8") != std::string::npos);
}

TEST_CASE("infeasible service exits 2 with the diagnostic") {
  TempDir dir;
  const std::string scn =
      dir.file("bad.scn", "R = 15\np = 10\nc = 8\nl = 5\nr = 1\nlambda = 10\nmu = 2\n");
  const RunResult r = run_tool("solve --scenario " + scn + " --problem provider-dynamic");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("mu <= r(c - l)") != std::string::npos);
}

TEST_CASE("parse errors exit 1 with the line number") {
  TempDir dir;
  const std::string scn = dir.file("broken.scn", "R = 15\nwat = 3\n");
  const RunResult r = run_tool("solve --scenario " + scn + " --problem provider-dynamic");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("line 2") != std::string::npos);
}

TEST_CASE("sweep writes the expected CSV rows") {
  TempDir dir;
  const std::string scn = dir.file("base.scn", kBase);
  const std::string csv = dir.name("sweep.csv");
  const RunResult r =
      run_tool("sweep --scenario " + scn + " --axis p --grid 5:14:1 --csv " + csv);
  CHECK(r.exit_code == 0);
  const std::string contents = slurp(csv);
  int data_rows = 0;
  for (size_t pos = 0; (pos = contents.find('\n', pos)) != std::string::npos; ++pos) ++data_rows;
  // 2 provenance lines + header + 10 rows
  CHECK(data_rows == 13);
  CHECK(contents.find("provider-dynamic_n_star") != std::string::npos);
}

TEST_CASE("single-value sweep equals solve output") {
  TempDir dir;
  const std::string scn = dir.file("base.scn", kBase);
  const RunResult sweep = run_tool("sweep --scenario " + scn + " --axis p --grid 10");
  CHECK(sweep.exit_code == 0);
  CHECK(sweep.out.find("n_P=9") != std::string::npos);
  CHECK(sweep.out.find("P*=94.9") != std::string::npos);
}

TEST_CASE("policy round trip through solve and simulate is deterministic") {
  TempDir dir;
  const std::string scn = dir.file("base.scn", kBase);
  const std::string pol = dir.name("policy.ltq");
  const RunResult solved = run_tool("solve --scenario " + scn +
                                    " --problem social-dynamic --policy-out " + pol);
  CHECK(solved.exit_code == 0);

  const std::string sim_args = "simulate --scenario " + scn + " --policy " + pol +
                               " --seed 7 --replications 5 --events 50000";
  const RunResult a = run_tool(sim_args);
  const RunResult b = run_tool(sim_args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("social-dynamic") != std::string::npos);
}

TEST_CASE("simulate by problem name reports coverage columns") {
  TempDir dir;
  const std::string scn = dir.file("base.scn", kBase);
  const RunResult r = run_tool("simulate --scenario " + scn +
                               " --problem provider-dynamic --seed 5 --replications 10 "
                               "--events 100000");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("analytic 94.92") != std::string::npos);
  CHECK(r.out.find("occ_exact") != std::string::npos);
}

TEST_CASE("quote-table prints markers") {
  TempDir dir;
  const std::string scn = dir.file("base.scn", kBase);
  const RunResult r = run_tool("quote-table --scenario " + scn);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("inf") != std::string::npos);
  CHECK(r.out.find("-") != std::string::npos);
}

TEST_CASE("min-capacity works without mu and orders curves by r") {
  TempDir dir;
  const std::string scn =
      dir.file("money.scn", "R = 15\np = 10\nc = 8\nl = 3\nr = 0.5\nlambda = 10\n");
  const std::string csv = dir.name("cap.csv");
  const RunResult r = run_tool("min-capacity --scenario " + scn +
                               " --d-grid 0:1:0.5 --r 0 0.1 0.5 --csv " + csv);
  CHECK(r.exit_code == 0);
  const std::string contents = slurp(csv);
  CHECK(contents.find("mu_min_r=0.5") != std::string::npos);
}

TEST_CASE("solve csv re-runs byte-identical") {
  TempDir dir;
  const std::string scn = dir.file("base.scn", kBase);
  const std::string csv1 = dir.name("a.csv");
  const std::string csv2 = dir.name("b.csv");
  run_tool("solve --scenario " + scn + " --problem provider-single --csv " + csv1);
  run_tool("solve --scenario " + scn + " --problem provider-single --csv " + csv2);
  CHECK(slurp(csv1) == slurp(csv2));
}
