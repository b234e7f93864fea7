#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ecmds/analysis.hpp"
#include "ecmds/cli.hpp"
#include "ecmds/code.hpp"

using namespace ecmds;

namespace {

struct CliResult {
  int rc = -1;
  std::string out, err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int rc = cli_run(args, out, err);
  return {rc, out.str(), err.str()};
}

std::string scratch_path(const std::string& name) {
  std::filesystem::create_directories("test_cli_scratch");
  return (std::filesystem::path("test_cli_scratch") / name).string();
}

std::string write_scratch(const std::string& name, const std::string& text) {
  std::string path = scratch_path(name);
  std::ofstream f(path);
  REQUIRE(f.good());
  f << text;
  return path;
}

std::string fixture(const std::string& name) {
  return std::string(ECMDS_FIXTURE_DIR) + "/" + name;
}

// the installed binary, for end-to-end process checks
CliResult run_binary(const std::string& args) {
  std::string cmd = std::string(ECMDS_CLI_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  int status = pclose(p);
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), out, ""};
}

}  // namespace

TEST_CASE("top-level help and dispatch") {
  CliResult help = run({"--help"});
  CHECK(help.rc == 0);
  CHECK(help.out.find("Subcommands:") != std::string::npos);
  CHECK(help.out.find("exit codes: 0 ok, 1 verification failed") !=
        std::string::npos);

  CHECK(run({}).rc == 2);
  CHECK(run({"search"}).rc == 2);            // --q is required
  CHECK(run({"search", "--q", "8", "--bogus"}).rc == 2);
  CHECK(run({"verify"}).rc == 2);            // matrix file is required
}

TEST_CASE("search reports the first curve hit") {
  CliResult r = run({"search", "--q", "8"});
  CHECK(r.rc == 0);
  CHECK(r.out ==
        "q 8\n"
        "modulus 1,1,0,1\n"
        "curve y^2 + xy + y = x^3 + 1\n"
        "coefficients 1 0 1 0 1\n"
        "points 14\n"
        "structure Z_14\n"
        "generator [w^3:w^2:1]\n");

  // explicit target inside the Hasse window
  CliResult odd = run({"search", "--q", "8", "--target-n", "13"});
  CHECK(odd.rc == 0);
  CHECK(odd.out.find("points 13\n") != std::string::npos);

  // target outside the window is rejected up front
  CHECK(run({"search", "--q", "8", "--target-n", "15"}).rc == 2);

  CliResult bad = run({"search", "--q", "6"});
  CHECK(bad.rc == 2);
  CHECK(bad.err.find("not a prime power") != std::string::npos);
  CHECK(bad.out.empty());

  CliResult caps = run(
      {"search", "--q", "16", "--target-n", "25", "--budget", "3"});
  CHECK(caps.rc == 3);
  CHECK(caps.err.find("budget") != std::string::npos);

  CliResult j49 = run(
      {"search", "--q", "49", "--target-n", "64", "--format", "structured"});
  CHECK(j49.rc == 0);
  nlohmann::json j = nlohmann::json::parse(j49.out);
  CHECK(j["q"] == 49);
  CHECK(j["points"] == 64);
  CHECK(j["structure"]["d1"] == 8);
  CHECK(j["structure"]["d2"] == 8);
  CHECK(j["curve"] == "y^2 = x^3 + x");
  CHECK(j["generators"].size() == 2);
}

TEST_CASE("build emits the constructed matrix") {
  CliResult even = run({"build", "--q", "8", "--k", "4", "--curve",
                        "1,0,1,0,1", "--q-point", "[w^3:w^4:1]"});
  CHECK(even.rc == 0);
  CHECK(even.out ==
        "q 8\n"
        "modulus 1,1,0,1\n"
        "n 6\n"
        "k 4\n"
        "1 1 1 1 1 1\n"
        "w w w^2 w^2 w^4 w^4\n"
        "1 w 1 w^2 1 w^4\n"
        "w^5 w^2 0 w w^3 w^4\n"
        "# curve y^2 + xy + y = x^3 + 1\n"
        "# coefficients 1 0 1 0 1\n"
        "# P [0:1:0]\n"
        "# Q [w^3:w^4:1]\n"
        "# construction even k=4 extended=0 ext_row=2\n");

  CliResult odd = run({"build", "--q", "9", "--modulus", "2,2,1", "--curve",
                       "0,0,0,1,0", "--subgroup",
                       "[w:2:1];[w^7:w^2:1];[0:0:1]", "--k", "3", "--q-point",
                       "[2:1:1]"});
  CHECK(odd.rc == 0);
  CHECK(odd.out ==
        "q 9\n"
        "modulus 2,2,1\n"
        "n 8\n"
        "k 3\n"
        "1 1 1 1 1 1 1 1\n"
        "2 2 w^5 w^3 1 w^3 w^5 1\n"
        "2 1 w^2 1 w^2 2 w^6 w^6\n"
        "# curve y^2 = x^3 + x\n"
        "# coefficients 0 0 0 1 0\n"
        "# Q [2:1:1]\n"
        "# construction odd k=3 extended=0\n");

  // the modulus accepts polynomial notation too
  CliResult poly = run({"build", "--q", "9", "--modulus", "x^2+2x+2",
                        "--curve", "0,0,0,1,0", "--subgroup",
                        "[w:2:1];[w^7:w^2:1];[0:0:1]", "--k", "3",
                        "--q-point", "[2:1:1]"});
  CHECK(poly.out == odd.out);

  // structured emission carries the construction record
  CliResult ext = run({"build", "--q", "8", "--k", "4", "--curve",
                       "1,0,1,0,1", "--q-point", "[w^3:w^4:1]", "--extend",
                       "--format", "structured"});
  CHECK(ext.rc == 0);
  MatrixDoc doc = read_matrix_doc(ext.out);
  CHECK(doc.n == 7);
  CHECK(doc.k == 4);
  REQUIRE(doc.has_meta);
  CHECK(doc.extended);
  CHECK(doc.ext_row == 2);
  FieldCtx F = field_of_doc(doc);
  LinearCode C = code_of_doc(F, doc);
  MdsReport R = verify_mds(C, {"minors", "distance"});
  CHECK(R.all_pass());
  CHECK(R.verified_d == 4);

  CHECK(run({"build", "--q", "8", "--k", "3", "--curve", "1,0,1,0,1",
             "--extend"}).rc == 2);
  CHECK(run({"build", "--q", "8", "--k", "3", "--curve", "1,0,1,0,1",
             "--q-point", "[w:1:1]"}).rc == 2);  // Q inside the subgroup
  CHECK(run({"build", "--q", "8", "--k", "4", "--curve", "1,0,1"}).rc == 2);
  CHECK(run({"build", "--q", "8", "--k", "4", "--curve", "1,0,1,0,1",
             "--subgroup", "5"}).rc == 2);
}

TEST_CASE("verify checks fixtures and emitted documents") {
  CliResult q9 = run({"verify", fixture("q9_matrix.txt")});
  CHECK(q9.rc == 0);
  CHECK(q9.out ==
        "[8,3] code, target distance 6\n"
        "  minors: pass (checked 56, exhaustive)\n"
        "  distance: pass (checked 91, exhaustive)\n"
        "  verified distance: 6\n"
        "overall: PASS\n"
        "schur square of [8,3] code: dim 6 (min(2k,n) = 6, GRS baseline = "
        "5)\n"
        "verdict: not-RS-equivalent\n");

  CliResult q8 = run({"verify", fixture("q8_matrix.txt")});
  CHECK(q8.rc == 0);
  CHECK(q8.out.find("verified distance: 3\n") != std::string::npos);
  CHECK(q8.out.find("verdict: inconclusive\n") != std::string::npos);

  // a structured build document brings the construction record along,
  // so the group-law methods run as well
  CliResult built = run({"build", "--q", "8", "--k", "4", "--curve",
                         "1,0,1,0,1", "--q-point", "[w^3:w^4:1]", "--format",
                         "structured"});
  REQUIRE(built.rc == 0);
  std::string path = write_scratch("c84.json", built.out);
  CliResult v = run({"verify", path});
  CHECK(v.rc == 0);
  CHECK(v.out.find("structural: pass (checked 1, exhaustive)\n") !=
        std::string::npos);
  CHECK(v.out.find("subsets: pass (checked 20, exhaustive)\n") !=
        std::string::npos);
  CHECK(v.out.find("length bound: skipped: q = 8 < 289\n") !=
        std::string::npos);

  // extended codes drop the subset criterion from the auto method list
  CliResult builtx = run({"build", "--q", "8", "--k", "4", "--curve",
                          "1,0,1,0,1", "--q-point", "[w^3:w^4:1]", "--extend",
                          "--format", "structured"});
  REQUIRE(builtx.rc == 0);
  std::string pathx = write_scratch("c84x.json", builtx.out);
  CliResult vx = run({"verify", pathx});
  CHECK(vx.rc == 0);
  CHECK(vx.out.find("structural: pass") != std::string::npos);
  CHECK(vx.out.find("subsets:") == std::string::npos);
  CHECK(vx.out.find("verified distance: 4\n") != std::string::npos);
  CHECK(run({"verify", pathx, "--methods", "subsets"}).rc == 2);

  // identity code: trivially MDS, Schur square says nothing
  std::string id3 = write_scratch("id3.txt",
                                  "q 4\nmodulus 1,1,1\nn 3\nk 3\n"
                                  "1 0 0\n0 1 0\n0 0 1\n");
  CliResult vid = run({"verify", id3});
  CHECK(vid.rc == 0);
  CHECK(vid.out.find("[3,3] code, target distance 1\n") != std::string::npos);
  CHECK(vid.out.find("verdict: inconclusive\n") != std::string::npos);

  CliResult vj = run({"verify", fixture("q9_matrix.txt"), "--format",
                      "structured"});
  CHECK(vj.rc == 0);
  nlohmann::json j = nlohmann::json::parse(vj.out);
  CHECK(j["mds"]["all_pass"] == true);
  CHECK(j["mds"]["verified_d"] == 6);
  CHECK(j["mds"]["methods"].size() == 2);
  CHECK(j["schur"]["verdict"] == "not-RS-equivalent");
  CHECK(!j.contains("bound"));  // bare matrix: no construction record
}

TEST_CASE("exit codes separate input, verification, and budget failures") {
  std::string bad = write_scratch("bad42.txt",
                                  "q 8\nmodulus 1,1,0,1\nn 4\nk 2\n"
                                  "1 0 1 0\n0 1 0 1\n");
  CliResult v = run({"verify", bad});
  CHECK(v.rc == 1);
  CHECK(v.out.find("overall: FAIL\n") != std::string::npos);
  CHECK(v.out.find("singular minor at columns {0,2}") != std::string::npos);

  CliResult built = run({"build", "--q", "8", "--k", "4", "--curve",
                         "1,0,1,0,1", "--format", "structured"});
  REQUIRE(built.rc == 0);
  std::string path = write_scratch("c84b.json", built.out);
  CliResult capped = run(
      {"verify", path, "--exhaustive-only", "--budget", "10"});
  CHECK(capped.rc == 3);
  CHECK(capped.err.find("subset criterion needs more than 10") !=
        std::string::npos);

  // without --exhaustive-only the same budget falls back to sampling
  CliResult sampled = run({"verify", path, "--budget", "10"});
  CHECK(sampled.rc == 0);
  CHECK(sampled.out.find("sampled") != std::string::npos);

  CHECK(run({"verify", scratch_path("missing.txt")}).rc == 2);
  CHECK(run({"verify", bad, "--methods", "bogus"}).rc == 2);
  CHECK(run({"verify", bad, "--format", "yaml"}).rc == 2);
}

TEST_CASE("identical invocations produce identical bytes") {
  std::vector<std::string> args = {"verify", fixture("q9_matrix.txt")};
  CliResult a = run(args), b = run(args);
  CHECK(a.rc == b.rc);
  CHECK(a.out == b.out);

  CliResult built = run({"build", "--q", "8", "--k", "4", "--curve",
                         "1,0,1,0,1", "--format", "structured"});
  std::string path = write_scratch("c84c.json", built.out);
  CliResult w1 = run({"verify", path, "--workers", "1"});
  CliResult w4 = run({"verify", path, "--workers", "4"});
  CHECK(w1.rc == 0);
  CHECK(w1.out == w4.out);

  CliResult s1 = run({"sweep", "--q", "7,9", "--k", "3"});
  CliResult s2 = run({"sweep", "--q", "7,9", "--k", "3"});
  CHECK(s1.out == s2.out);
}

TEST_CASE("sweep reproduces the known length table") {
  CliResult table = run({"sweep"});
  CHECK(table.rc == 0);
  CHECK(table.out ==
        "q     N     n     expected  match\n"
        "4     8     4     4         yes\n"
        "7     12    6     6         yes\n"
        "8     14    7     7         yes\n"
        "9     16    8     8         yes\n"
        "11    18    9     9         yes\n"
        "16    24    12    12        yes\n"
        "49    64    32    32        yes\n");

  CliResult codes = run({"sweep", "--q", "7,9", "--k", "3,4"});
  CHECK(codes.rc == 0);
  CHECK(codes.out ==
        "q     N     n     expected  match\n"
        "7     12    6     6         yes\n"
        "9     16    8     8         yes\n"
        "\n"
        "codes:\n"
        "q=7 k=3 [6,3] structural=pass schur_dim=6 baseline=5 "
        "verdict=not-RS-equivalent\n"
        "q=7 k=4 [5,4] structural=pass schur_dim=5 baseline=7 "
        "verdict=inconclusive\n"
        "q=9 k=3 [8,3] structural=pass schur_dim=6 baseline=5 "
        "verdict=not-RS-equivalent\n"
        "q=9 k=4 [7,4] structural=pass schur_dim=7 baseline=7 "
        "verdict=inconclusive\n");

  // bad fields are reported per row and poison the exit code
  CliResult mixed = run({"sweep", "--q", "6,8"});
  CHECK(mixed.rc == 1);
  CHECK(mixed.out.find("error: 6 is not a prime power") != std::string::npos);
  CHECK(mixed.out.find("8     14    7     7         yes\n") !=
        std::string::npos);

  CliResult j = run({"sweep", "--q", "8", "--k", "2", "--format",
                     "structured"});
  CHECK(j.rc == 0);
  nlohmann::json arr = nlohmann::json::parse(j.out);
  REQUIRE(arr.size() == 1);
  CHECK(arr[0]["q"] == 8);
  CHECK(arr[0]["N"] == 14);
  CHECK(arr[0]["n"] == 7);
  CHECK(arr[0]["match"] == true);
  REQUIRE(arr[0]["codes"].size() == 1);
  CHECK(arr[0]["codes"][0]["k"] == 2);
  CHECK(arr[0]["codes"][0]["n"] == 6);
  CHECK(arr[0]["codes"][0]["structural"] == true);
  CHECK(arr[0]["codes"][0]["verdict"] == "inconclusive");
}

TEST_CASE("installed binary round-trips the library behavior") {
  CliResult s = run_binary("search --q 8");
  CHECK(s.rc == 0);
  CHECK(s.out == run({"search", "--q", "8"}).out);

  std::string bad = write_scratch("bad42bin.txt",
                                  "q 8\nmodulus 1,1,0,1\nn 4\nk 2\n"
                                  "1 0 1 0\n0 1 0 1\n");
  CHECK(run_binary("verify " + bad).rc == 1);
  CHECK(run_binary("search --q 6").rc == 2);
  CHECK(run_binary("search --q 16 --target-n 25 --budget 3").rc == 3);
}
