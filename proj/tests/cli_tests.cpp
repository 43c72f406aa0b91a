#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

// Drives the command-line binary as a subprocess.  The binary path is baked
// in at configure time.

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output; // stdout only
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  // -u keeps the ambient test environment from leaking a cache directory
  // into the subprocess.
  std::string command = "env -u CONCORDANCE_CACHE ";
  if (!env.empty()) command += env + " ";
  command += std::string(TWOBRIDGE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string write_temp_file(const std::string& contents) {
  static int counter = 0;
  const fs::path path =
      fs::temp_directory_path() /
      ("twobridge-cli-" + std::to_string(getpid()) + "-" +
       std::to_string(counter++) + ".csv");
  std::ofstream out(path);
  out << contents;
  out.close();
  return path.string();
}

std::string fresh_dir(const std::string& tag) {
  const fs::path path =
      fs::temp_directory_path() /
      ("twobridge-cli-" + tag + "-" + std::to_string(getpid()));
  fs::remove_all(path);
  fs::create_directories(path);
  return path.string();
}

} // namespace

TEST_CASE("exit codes: success, invalid input, oracle guard") {
  CHECK(run_cli("tau 3/1").exit_code == 0);
  CHECK(run_cli("obstruct 5/2").exit_code == 0); // inconclusive is success
  CHECK(run_cli("tau 4/2").exit_code == 1);      // invalid knot
  CHECK(run_cli("tau").exit_code == 1);          // missing argument
  CHECK(run_cli("frobnicate 3/1").exit_code == 1);
  CHECK(run_cli("tau 3/1 --format yaml").exit_code == 1);
  CHECK(run_cli("tau 29/11 --oracle").exit_code == 1); // 2pq > 200
}

TEST_CASE("single-knot commands render exact tables") {
  const auto tau = run_cli("tau 3/1");
  CHECK(tau.exit_code == 0);
  CHECK(tau.output ==
        "K_{3,1}  tau by spin^c label\nlabel\ttau\n0\t-1\n1\t0\n2\t0\n");

  const auto d = run_cli("d 5/2 --format csv");
  CHECK(d.exit_code == 0);
  CHECK(d.output == "label,d\n0,0\n1,2/5\n2,-2/5\n3,-2/5\n4,2/5\n");

  const auto hfk = run_cli("hfk 3/1 --format csv");
  CHECK(hfk.exit_code == 0);
  CHECK(hfk.output ==
        "label,a,m\n0,1,3/2\n0,0,1/2\n0,-1,-1/2\n1,0,1/6\n2,0,1/6\n");
}

TEST_CASE("obstruct verdicts") {
  const auto tref = run_cli("obstruct 3/1");
  CHECK(tref.exit_code == 0);
  CHECK(tref.output.find("verdict: infinite-order") != std::string::npos);
  CHECK(tref.output.find("T_3 = 1  [fired]") != std::string::npos);

  const auto stevedore = run_cli("obstruct 9/2");
  CHECK(stevedore.exit_code == 0);
  CHECK(stevedore.output.find("verdict: inconclusive") != std::string::npos);
}

TEST_CASE("JSON reports are byte-identical across jobs, oracle and cache") {
  const std::string base = run_cli("obstruct 29/11 --format json").output;
  REQUIRE(!base.empty());
  CHECK(run_cli("obstruct 29/11 --format json --jobs 2").output == base);
  CHECK(run_cli("obstruct 29/11 --format json --jobs 8").output == base);

  const std::string oracle31 = run_cli("obstruct 3/1 --format json").output;
  CHECK(run_cli("obstruct 3/1 --format json --oracle").output == oracle31);

  // A cache hit returns the stored document byte for byte.
  const std::string dir = fresh_dir("cache");
  const std::string cold =
      run_cli("obstruct 29/11 --format json --cache " + dir).output;
  CHECK(cold == base);
  CHECK(!fs::is_empty(dir));
  const std::string warm =
      run_cli("obstruct 29/11 --format json --cache " + dir).output;
  CHECK(warm == base);
  fs::remove_all(dir);
}

TEST_CASE("CONCORDANCE_CACHE overrides --cache") {
  const std::string flag_dir = fresh_dir("flagdir");
  const std::string env_dir = fresh_dir("envdir");
  const auto result = run_cli("obstruct 3/1 --cache " + flag_dir,
                              "CONCORDANCE_CACHE=" + env_dir);
  CHECK(result.exit_code == 0);
  CHECK(fs::is_empty(flag_dir));
  CHECK(!fs::is_empty(env_dir));
  fs::remove_all(flag_dir);
  fs::remove_all(env_dir);
}

TEST_CASE("twist: closed-form tables and family independence") {
  const auto csv = run_cli("twist 9 --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.output ==
        "label,k,d\n0,0,0\n1,1,4/9\n2,2,-2/9\n3,3,0\n4,4,-8/9\n"
        "5,-4,-8/9\n6,-3,0\n7,-2,-2/9\n8,-1,4/9\n");

  const auto table9 = run_cli("twist 9");
  CHECK(table9.output.find("D_3 = 0\n") != std::string::npos);
  CHECK(table9.output.find("verdict: inconclusive") != std::string::npos);

  const auto table3 = run_cli("twist 3");
  CHECK(table3.output.find("[nonzero]") != std::string::npos);
  CHECK(table3.output.find("verdict: infinite-order") != std::string::npos);

  CHECK(run_cli("twist --family 21,55").output.find("independent: yes") !=
        std::string::npos);
  CHECK(run_cli("twist --family 9").output.find("not certified") !=
        std::string::npos);
  const auto json = run_cli("twist --family 21,55 --format json");
  CHECK(json.output.find("\"independent\": true") != std::string::npos);

  CHECK(run_cli("twist").exit_code == 1);          // needs p or --family
  CHECK(run_cli("twist 4").exit_code == 1);        // even determinant
  CHECK(run_cli("twist --family 3,x").exit_code == 1);
}

TEST_CASE("batch: stdin, files, quarantined rows, jobs determinism") {
  const std::string input =
      "name,p,q\n"
      "tref,3,1\n"
      "fig8,5,2\n"
      "broken,4,2\n";

  const std::string in_file = write_temp_file(input);
  const auto from_file = run_cli("batch " + in_file);
  CHECK(from_file.exit_code == 0);
  CHECK(from_file.output.rfind("name,p,q,det,verdict,tests_fired,values\n",
                               0) == 0);
  CHECK(from_file.output.find("tref,3,1,3,infinite-order,") !=
        std::string::npos);
  CHECK(from_file.output.find("fig8,5,2,5,inconclusive,") !=
        std::string::npos);
  CHECK(from_file.output.find("broken,,,,error,,") != std::string::npos);

  // stdin and file input agree.
  const auto from_stdin = run_cli("batch - < " + in_file);
  CHECK(from_stdin.exit_code == 0);
  CHECK(from_stdin.output == from_file.output);

  // Explicit output file.
  const fs::path out_file =
      fs::temp_directory_path() /
      ("twobridge-cli-out-" + std::to_string(getpid()) + ".csv");
  const auto to_file = run_cli("batch " + in_file + " " + out_file.string());
  CHECK(to_file.exit_code == 0);
  CHECK(to_file.output.empty());
  std::ifstream read_back(out_file);
  std::string written((std::istreambuf_iterator<char>(read_back)),
                      std::istreambuf_iterator<char>());
  CHECK(written == from_file.output);
  fs::remove(out_file);

  // Any --jobs value renders identically (JSON exercises the full report).
  const auto json1 = run_cli("batch " + in_file + " --format json --jobs 1");
  const auto json8 = run_cli("batch " + in_file + " --format json --jobs 8");
  CHECK(json1.exit_code == 0);
  CHECK(json1.output == json8.output);
  CHECK(json1.output.find("\"error\"") != std::string::npos);

  // Empty input: empty output, success.
  const std::string empty_file = write_temp_file("");
  const auto empty = run_cli("batch " + empty_file);
  CHECK(empty.exit_code == 0);
  CHECK(empty.output.empty());
  fs::remove(empty_file);
  fs::remove(in_file);

  // Unreadable input fails cleanly.
  CHECK(run_cli("batch /nonexistent/path.csv").exit_code == 1);
}
