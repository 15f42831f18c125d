#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(CALAB_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("calab_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("simulate writes the space-time file and manifest") {
  const fs::path d = scratch("sim");
  Run r = cli("simulate -a fe --init zero --width 24 --steps 5 --out-dir " + d.string());
  REQUIRE(r.code == 0);
  std::istringstream st(slurp(d / "spacetime.txt"));
  std::string line;
  std::getline(st, line);
  CHECK(line.rfind("# ", 0) == 0);
  long rows = 0;
  while (std::getline(st, line)) {
    ++rows;
    CHECK(line == std::string(24, '0') + " " + std::string(24, '0') + " " + std::string(24, '0'));
  }
  CHECK(rows == 6);
  const auto manifest = nlohmann::json::parse(slurp(d / "manifest.json"));
  CHECK(manifest["rows"] == 6);
  CHECK(manifest["files"].contains("spacetime.txt"));
  fs::remove_all(d);
}

TEST_CASE("render of the all-zero run is white") {
  const fs::path d = scratch("render");
  REQUIRE(cli("simulate -a fe --init zero --width 16 --steps 7 --out-dir " + d.string()).code == 0);
  for (int comp : {0, 1, 2}) {
    const fs::path img = d / ("c" + std::to_string(comp) + ".pnm");
    REQUIRE(cli("render --input " + (d / "spacetime.txt").string() + " --component " + std::to_string(comp) +
                " -o " + img.string())
                .code == 0);
    const std::string bytes = slurp(img);
    const bool gray = bytes.rfind("P5", 0) == 0;
    const std::size_t pixels = 16 * 8 * (gray ? 1 : 3);
    REQUIRE(bytes.size() > pixels);
    const std::string body = bytes.substr(bytes.size() - pixels);
    CAPTURE(comp);
    CHECK(body.find_first_not_of(static_cast<char>(255)) == std::string::npos);
  }
  CHECK(cli("render --input " + (d / "spacetime.txt").string() + " --component 7 -o " + (d / "x.pnm").string()).code ==
        2);
  fs::remove_all(d);
}

TEST_CASE("configuration errors exit with 2, budget overruns with 3") {
  CHECK(cli("cesaro -a nosuch --cylinder 1@0").code == 2);
  CHECK(cli("cesaro -a shift:2 -m uniform:3 --cylinder 1@0").code == 2);
  CHECK(cli("simulate -a shift:2 --init counter:40 --out-dir /tmp/calab_cli_never").code == 2);
  CHECK(cli("entropy --nosuchflag").code == 2);
  CHECK(cli("cesaro -a fe -m mu_I --cylinder 0/0/0@0 --horizon 50 -N 10 --window-budget 10").code == 3);
}

TEST_CASE("results and digests do not depend on the worker count") {
  const std::string args = "cesaro -a fe -m mu_I --cylinder /0R0/@0 --cylinder /000/@2 --horizon 20 -N 300 --seed 5";
  Run one = cli(args + " -j 1"), three = cli(args + " -j 3");
  REQUIRE(one.code == 0);
  REQUIRE(three.code == 0);
  CHECK(one.out == three.out);
  std::istringstream lines(one.out);
  std::string line;
  long records = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("config_digest"));
    CHECK_FALSE(j["config"].contains("workers"));
    ++records;
  }
  CHECK(records == 2);
  // A different seed changes the config and so the digest.
  Run other = cli("cesaro -a fe -m mu_I --cylinder /0R0/@0 --cylinder /000/@2 --horizon 20 -N 300 --seed 6");
  CHECK(nlohmann::json::parse(other.out.substr(0, other.out.find('\n')))["config_digest"] !=
        nlohmann::json::parse(one.out.substr(0, one.out.find('\n')))["config_digest"]);
}
