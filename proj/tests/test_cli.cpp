#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "qsector/io.hpp"

namespace fs = std::filesystem;
using namespace qsector;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qsector_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qsector");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kSymmetric = R"({"dim": 1, "components": [
  {"type": "gaussian", "mean": [[2.0, -1.0]], "sigma": 0.7, "weight": 1.0}]})";

const char* kMixture = R"({"dim": 1, "components": [
  {"type": "gaussian", "mean": [[1.0, 0.5]], "sigma": 0.7, "weight": 1.0},
  {"type": "gaussian", "mean": [[-2.0, 1.0]], "sigma": 1.2, "weight": 0.5},
  {"type": "disk", "center": [0.5, -1.5], "radius": 0.8, "weight": 0.7}]})";

}  // namespace

TEST_CASE("complex parsing") {
  CHECK(cli::parse_complex("1.5,-2") == Complex(1.5, -2.0));
  CHECK(cli::parse_complex("3") == Complex(3.0, 0.0));
  CHECK_THROWS(cli::parse_complex("1;2"));
  CHECK_THROWS(cli::parse_complex("a,b"));
}

TEST_CASE("measure files round-trip and report field paths") {
  const auto masses = io::parse_masses(kMixture);
  REQUIRE(masses.size() == 1);
  const auto again = io::parse_masses(io::to_json(masses[0]).dump());
  CHECK(again[0] == masses[0]);
  try {
    io::parse_masses(R"({"dim": 1, "components": [{"type": "gaussian", "mean": [[0, 0]], "weight": 1}]})");
    FAIL("expected a SpecError");
  } catch (const io::SpecError& e) {
    CHECK(std::string(e.what()).find("components[0]") != std::string::npos);
    CHECK(std::string(e.what()).find("sigma") != std::string::npos);
  }
  try {
    io::parse_masses("{\n  \"dim\": 1,\n  \"components\": [\n}", "bad.json");
    FAIL("expected a SpecError");
  } catch (const io::SpecError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_masses(R"({"dim": 1, "components": [{"type": "cube"}]})"), io::SpecError);
  CHECK(io::parse_masses(std::string("[") + kSymmetric + "," + kMixture + "]").size() == 2);
}

TEST_CASE("solve on a symmetric instance") {
  TempDir dir;
  const auto spec = dir.write("sym.json", kSymmetric);
  const auto out = dir.file("res.json");
  const Result r = run_cli({"solve", "--measures", spec, "--q", "3", "--exponents", "1", "--seed", "3",
                            "--starts", "4", "--out", out});
  CHECK(r.code == cli::kOk);
  const auto j = io::Json::parse(slurp(out));
  CHECK(j["converged"].get<bool>());
  CHECK(j["apex"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(j["apex"][1].get<double>() == doctest::Approx(-1.0).epsilon(1e-4));
  const auto manifest = io::Json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["seed"].get<int>() == 3);
  CHECK(manifest["inputs"][0]["masses"][0]["dim"].get<int>() == 1);
  CHECK(manifest["argv"].size() == 14);
}

TEST_CASE("input errors exit with code 1") {
  TempDir dir;
  const auto spec = dir.write("sym.json", kSymmetric);
  const auto bad = dir.write("bad.json", "{\"dim\": 1, \"components\": [");
  Result r = run_cli({"solve", "--measures", spec, "--exponents", "0", "--seed", "1", "--out", dir.file("o")});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("positive") != std::string::npos);
  r = run_cli({"solve", "--measures", bad, "--exponents", "1", "--seed", "1", "--out", dir.file("o")});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("bad.json") != std::string::npos);
  r = run_cli({"solve", "--measures", spec, "--exponents", "1", "--out", dir.file("o")});
  CHECK(r.code == cli::kInputError);
  r = run_cli({"scan", "--measure", spec, "--apex", "0,0", "--grid", "100", "--out", dir.file("o")});
  CHECK(r.code == cli::kInputError);
  r = run_cli({"frobnicate"});
  CHECK(r.code == cli::kInputError);
  r = run_cli({"solve", "--measures", dir.file("missing.json"), "--exponents", "1", "--seed", "1", "--out",
               dir.file("o")});
  CHECK(r.code == cli::kInputError);
}

TEST_CASE("scan of a symmetric mass is flat") {
  TempDir dir;
  const auto spec = dir.write("sym.json", kSymmetric);
  const auto out = dir.file("scan.csv");
  const auto coeffs = dir.file("coeffs.csv");
  const Result r = run_cli({"scan", "--measure", spec, "--apex", "2,-1", "--q", "4", "--grid", "64", "--out", out,
                            "--coeffs-out", coeffs});
  REQUIRE(r.code == cli::kOk);
  std::istringstream rows(slurp(out));
  std::string line;
  std::getline(rows, line);
  CHECK(line == "theta,f_theta");
  int count = 0;
  while (std::getline(rows, line)) {
    CHECK(std::stod(line.substr(line.find(',') + 1)) == doctest::Approx(0.25).epsilon(1e-12));
    ++count;
  }
  CHECK(count == 64);
  CHECK(slurp(coeffs).rfind("m,re_c,im_c,abs_c\n", 0) == 0);
  CHECK(fs::exists(out + ".manifest.json"));
}

TEST_CASE("verify writes a passing table") {
  TempDir dir;
  const auto spec = dir.write("mix.json", kMixture);
  const auto out = dir.file("verify.csv");
  const Result r = run_cli({"verify", "--measures", spec, "--q", "2", "--n", "1", "--seed", "2", "--starts", "4",
                            "--out", out});
  CHECK(r.code == cli::kOk);
  const std::string table = slurp(out);
  CHECK(table.find("l2_deviation") != std::string::npos);
  CHECK(table.find("fail") == std::string::npos);
  // A disk component makes the acceleration check inapplicable.
  CHECK(table.find("linf_acceleration") != std::string::npos);
  CHECK(table.find(",skip") != std::string::npos);
}

TEST_CASE("verify checks the stacked dimension") {
  TempDir dir;
  const auto spec = dir.write("mix.json", kMixture);
  const Result r = run_cli({"verify", "--measures", spec, "--n", "2", "--seed", "2", "--out", dir.file("v.csv")});
  CHECK(r.code == cli::kInputError);
}

TEST_CASE("fan6, adversarial and certify") {
  TempDir dir;
  const auto spec = dir.write("mix.json", kMixture);
  Result r = run_cli({"fan6", "--measure", spec, "--out", dir.file("fan.json")});
  CHECK(r.code == cli::kOk);
  const auto fan = io::Json::parse(slurp(dir.file("fan.json")));
  for (const auto& line : fan["lines"]) CHECK(line["bisection_error"].get<double>() <= 1e-8 * 2.2);

  r = run_cli({"adversarial", "--q", "3", "--n", "4", "--seed", "6", "--out", dir.file("a.json")});
  CHECK(r.code == cli::kOk);
  r = run_cli({"adversarial", "--q", "3", "--n", "4", "--seed", "6", "--out", dir.file("b.json")});
  CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));

  r = run_cli({"certify", "--measure", dir.file("a.json"), "--q", "3", "--grid", "128", "--sweep-points", "9",
               "--sweep-extent", "110", "--out", dir.file("cert.csv"), "--profile-out", dir.file("prof.csv")});
  CHECK(r.code == cli::kOk);
  const std::string cert = slurp(dir.file("cert.csv"));
  CHECK(cert.find("six_fan_linf") != std::string::npos);
  CHECK(cert.find("center_sweep_min_linf") != std::string::npos);
  CHECK(cert.find("fail") == std::string::npos);
  CHECK(fs::exists(dir.file("prof.csv")));

  r = run_cli({"certify", "--measure", spec, "--q", "2", "--out", dir.file("c2.csv")});
  CHECK(r.code == cli::kInputError);
}

TEST_CASE("tailsum") {
  const Result r = run_cli({"tailsum", "--q", "2", "--n", "1", "--terms", "100000"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("0.2337") != std::string::npos);
}
