#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pvw/cli.hpp"
#include "pvw/errors.hpp"
#include "pvw/special_functions.hpp"

using namespace pvw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pvw_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config round trip and overrides") {
  RunConfig c;
  c.N = 6.0;
  c.K = 2;
  c.scan_nu = {1.0, 2.0};
  CHECK(RunConfig::from_json(c.to_json()) == c);

  RunConfig d;
  d.apply_override("N=6");
  d.apply_override("epsilons=[1e-3,1e-2]");
  d.apply_override("out=results");
  CHECK(d.N == 6.0);
  CHECK(d.epsilons == std::vector<double>{1e-3, 1e-2});
  CHECK(d.out == "results");

  const RunConfig partial = RunConfig::from_json(nlohmann::json{{"K", 1}});
  CHECK(partial.K == 1);
  CHECK(partial.N == 4.0);
}

TEST_CASE("config rejects bad input") {
  RunConfig c;
  CHECK_THROWS_AS(c.apply_override("gamma=2"), ValidationError);
  CHECK_THROWS_AS(c.apply_override("no_such_key=1"), ValidationError);
  CHECK_THROWS_AS(c.apply_override("N"), ValidationError);
  CHECK_THROWS_AS(c.apply_override("N=\"four\""), ValidationError);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::array()), ValidationError);

  RunConfig bad;
  bad.N = 3.5;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = RunConfig{};
  bad.epsilon = 0.9;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = RunConfig{};
  bad.scan_nu = {0.7};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_NOTHROW(RunConfig{}.validate());
}

TEST_CASE("exit codes") {
  CHECK(run_cli(std::vector<std::string>{}) == 1);
  CHECK(run_cli({"nonsense"}) == 1);
  const fs::path dir = scratch("codes");
  CHECK(run_cli({"eigen", "--out", dir.string(), "--param", "N=3.5"}) == 1);
  CHECK(run_cli({"eigen", "--out", dir.string(), "--param", "gamma=3"}) == 1);
  CHECK(run_cli({"eigen", "--config", (dir / "missing.json").string()}) == 1);
  fs::remove_all(dir);
}

TEST_CASE("eigen artifacts and manifest checksums") {
  const fs::path dir = scratch("eigen");
  REQUIRE(run_cli({"eigen", "--out", dir.string(), "--param", "eigen_count=5"}) == 0);
  const auto sums = read_manifest_checksums((dir / "manifest.json").string());
  REQUIRE(sums.count("eigenvalues.csv") == 1);
  REQUIRE(sums.count("eigenfunctions.json") == 1);
  for (const auto& [name, sum] : sums) CHECK(sha256_hex(slurp(dir / name)) == sum);

  std::istringstream csv(slurp(dir / "eigenvalues.csv"));
  std::string line;
  int rows = 0;
  std::getline(csv, line);
  CHECK(line == "n,j,lambda,ratio");
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 5);
  fs::remove_all(dir);
}

TEST_CASE("config file is honoured and the Gamma hook is reset") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "cfg.json");
    f << R"({"N": 6, "eigen_count": 3, "gamma_corruption": 1.5})";
  }
  REQUIRE(run_cli({"eigen", "--config", (dir / "cfg.json").string(), "--out", (dir / "o").string()}) == 0);
  CHECK(testing::gamma_corruption() == 1.0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "o" / "manifest.json"));
  CHECK(manifest["config"]["N"] == 6.0);
  CHECK(manifest["gamma"] == doctest::Approx(1.5));
  CHECK(manifest["command"] == "eigen");
  fs::remove_all(dir);
}
