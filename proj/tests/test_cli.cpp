#include "support.hpp"

#include "morphic/report.hpp"

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sys/wait.h>

using namespace morphic;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(MORPHIC_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& rel) { return (testing_support::data_dir() / rel).string(); }

}  // namespace

TEST_CASE("decide-ur text output", "[cli]") {
  const Run r = run("decide-ur " + data("other/nonur_001.txt"));
  CHECK(r.code == 0);
  CHECK(r.out.find("NOT uniformly recurrent") != std::string::npos);
}

TEST_CASE("decide-ur JSON output parses and verifies", "[cli]") {
  const Run r = run("decide-ur --json --verify " + data("primitive/thue_morse.txt"));
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["verdict"] == "uniformly_recurrent");
  CHECK(j["certificate"]["type"] == "repetition");
  CHECK(j["verification"]["ok"] == true);
  // same bytes on a second run
  CHECK(run("decide-ur --json --verify " + data("primitive/thue_morse.txt")).out == r.out);
}

TEST_CASE("usage and input errors exit with 1", "[cli]") {
  CHECK(run("").code == 1);
  CHECK(run("decide-ur").code == 1);
  CHECK(run("decide-ur --no-such-flag " + data("primitive/fibonacci.txt")).code == 1);
  CHECK(run("decide-ur /no/such/file.txt").code == 1);

  const std::string bad = (std::filesystem::temp_directory_path() / "morphic_cli_bad.txt").string();
  {
    std::ofstream f(bad);
    f << "start: a\nsigma:\n  a -> a q\n";
  }
  const Run r = run("decide-ur " + bad, true);
  CHECK(r.code == 1);
  CHECK(r.out.find(":3:") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("other subcommands", "[cli]") {
  const std::string fib = data("primitive/fibonacci.txt");
  const Run rw = run("return-words --word a " + fib);
  CHECK(rw.code == 0);
  CHECK(rw.out.find("ab") != std::string::npos);

  const Run cl = run("classify " + fib);
  CHECK(cl.code == 0);

  const Run cs = run("constants --json " + fib);
  REQUIRE(cs.code == 0);
  const Json j = Json::parse(cs.out);
  CHECK(j.contains("K"));

  const Run dv = run("derive --depth 3 --json " + fib);
  CHECK(dv.code == 0);
  CHECK_NOTHROW(Json::parse(dv.out));

  const Run pc = run("periodic-check --word b --json " + data("other/ab_b_constant.txt"));
  REQUIRE(pc.code == 0);
  CHECK(pc.out.find("condition_1") != std::string::npos);

  const Run orc = run("oracle --max-factor 2 --prefix 10000 --bound 10 " + data("other/nonur_001.txt"));
  CHECK(orc.code == 0);
}

TEST_CASE("several files are reported in order", "[cli]") {
  const Run r = run("decide-ur " + data("primitive/fibonacci.txt") + " " + data("other/ab_bb.txt"));
  CHECK(r.code == 0);
  const auto a = r.out.find("fibonacci.txt"), b = r.out.find("ab_bb.txt");
  REQUIRE(a != std::string::npos);
  REQUIRE(b != std::string::npos);
  CHECK(a < b);
}
