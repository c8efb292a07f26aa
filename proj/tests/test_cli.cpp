#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::path(COSFIT_TEST_DIR) / "cli_work";

int run(const std::string& args) {
  const std::string cmd = std::string(COSFIT_CLI) + " " + args + " >" + (kDir / "stdout.txt").string() + " 2>" +
                          (kDir / "stderr.txt").string();
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string at(const char* name) { return (kDir / name).string(); }

}  // namespace

TEST_CASE("cli") {
  fs::create_directories(kDir);

  SUBCASE("exit codes") {
    CHECK(run("") == 1);
    CHECK(run("fit --input " + at("missing.csv")) == 2);
    write(kDir / "bad.csv", "x,value\n0.1,1\n0.2,oops\n");
    CHECK(run("fit --input " + at("bad.csv") + " --degree 1") == 2);
    CHECK(slurp(kDir / "stderr.txt").find(":3:") != std::string::npos);
    write(kDir / "dup.csv", "0.1,1\n0.1,2\n0.5,3\n");
    CHECK(run("fit --input " + at("dup.csv") + " --degree 1") == 2);
    CHECK(run("fit --input " + at("dup.csv") + " --degree 1 --merge-duplicates") == 0);
    write(kDir / "ok.csv", "0.1,1\n0.4,2\n0.9,3\n");
    CHECK(run("fit --input " + at("ok.csv") + " --mode multilevel") == 1);
    CHECK(run("fit --input " + at("ok.csv") + " --degree 5") == 1);
    CHECK(run("fit --input " + at("ok.csv") + " --degree 1 --mode bogus") == 1);
  }

  SUBCASE("constant data gives c0 = sqrt(2) times the constant") {
    write(kDir / "const.csv", "x,value\n0.05,3\n0.2,3\n0.5,3\n0.77,3\n0.9,3\n");
    REQUIRE(run("fit --input " + at("const.csv") + " --degree 2 --out " + at("const_coef.csv")) == 0);
    std::ifstream in(kDir / "const_coef.csv");
    std::string line;
    double c0 = 0.0;
    while (std::getline(in, line))
      if (line.rfind("0,", 0) == 0) c0 = std::stod(line.substr(2));
    CHECK(c0 == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-8));
  }

  SUBCASE("synth, fit, eval and error round trip deterministically") {
    REQUIRE(run("synth --seed 3 --out " + at("s.csv") + " --reference " + at("ref.csv")) == 0);
    REQUIRE(run("fit --input " + at("s.csv") + " --dim 2 --degree 10 --out " + at("c.csv")) == 0);
    REQUIRE(run("eval --coeffs " + at("c.csv") + " --grid 150 --out " + at("g.csv") + " --heatmap " + at("h.pgm")) == 0);
    REQUIRE(run("error --dim 2 --fit " + at("g.csv") + " --reference " + at("ref.csv")) == 0);
    const double e = std::stod(slurp(kDir / "stdout.txt"));
    CHECK(e > 0.0);
    CHECK(e <= 0.06);
    CHECK(slurp(kDir / "h.pgm").rfind("P2", 0) == 0);

    const std::string first = slurp(kDir / "c.csv");
    REQUIRE(run("fit --input " + at("s.csv") + " --dim 2 --degree 10 --out " + at("c.csv")) == 0);
    CHECK(slurp(kDir / "c.csv") == first);

    REQUIRE(run("baseline --input " + at("s.csv") + " --dim 2 --degree 10 --reference " + at("ref.csv")) == 0);
    CHECK(slurp(kDir / "stdout.txt").find("\"relative_error\"") != std::string::npos);
  }

  SUBCASE("multilevel report has one line per level") {
    REQUIRE(run("synth --seed 4 --out " + at("m.csv")) == 0);
    REQUIRE(run("fit --input " + at("m.csv") + " --dim 2 --mode multilevel --noise 0.05 --report " + at("r.jsonl") +
                " --out " + at("mc.csv")) == 0);
    std::ifstream in(kDir / "r.jsonl");
    std::string line;
    int levels = 0, summaries = 0;
    while (std::getline(in, line)) {
      if (line.find("\"event\":\"level\"") != std::string::npos) ++levels;
      if (line.find("\"event\":\"fit\"") != std::string::npos) ++summaries;
    }
    CHECK(levels >= 1);
    CHECK(summaries == 1);
  }
}
