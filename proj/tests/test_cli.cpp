#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "symforge/classical.hpp"
#include "symforge/cli.hpp"

using namespace symforge;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "symforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "symforge_cli_test";
  fs::create_directories(dir);
  return dir;
}

json load(const fs::path& p) {
  std::ifstream f(p);
  return json::parse(f);
}

std::string trimmed(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace

TEST_CASE("case range keeps coprime pairs with k >= 1/2", "[cli]") {
  const auto c = cli::case_range(6);
  const std::vector<std::pair<int, int>> want = {{1, 1}, {1, 2}, {2, 1}, {3, 1}, {2, 3}, {3, 2}, {4, 1}, {5, 1}};
  CHECK(c == want);
  CHECK(cli::case_range(5).size() == 7);
}

TEST_CASE("verify rejects non-coprime input", "[cli]") {
  const auto r = invoke({"verify", "--m", "2", "--n", "4"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("coprime") != std::string::npos);
  CHECK(invoke({"verify", "--m", "2"}).code == cli::kUsage);
  CHECK(invoke({"verify", "--target", "both"}).code == cli::kUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kUsage);
}

TEST_CASE("verify classical (1,1) passes and writes a valid report", "[cli]") {
  const auto path = scratch_dir() / "c11.json";
  const auto r = invoke({"verify", "--target", "classical", "--m", "1", "--n", "1", "--out", path.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("classical algebra") != std::string::npos);
  const json doc = load(path);
  CHECK(cli::validate_report(doc).empty());
  CHECK(doc["summary"]["fail"] == 0);
  CHECK(doc["runs"].size() == 2);
  CHECK(doc["runs"][1]["mode"] == "numeric");
}

TEST_CASE("verify quantum (2,1) matches the worked P1 and P2", "[cli]") {
  const auto path = scratch_dir() / "q21.json";
  const auto r = invoke({"verify", "--target", "quantum", "--m", "2", "--n", "1", "--out", path.string()});
  CHECK(r.code == cli::kOk);
  const json doc = load(path);
  int seen = 0;
  for (const auto& run : doc["runs"])
    for (const auto& e : run["entries"]) {
      const auto id = e["identity"].get<std::string>();
      if (id == "P1 equals the worked example" || id == "P2 equals the worked example") {
        CHECK(e["status"] == "pass");
        ++seen;
      }
    }
  CHECK(seen == 2);
}

TEST_CASE("reports are deterministic apart from timing", "[cli]") {
  const auto a = scratch_dir() / "det_a.json", b = scratch_dir() / "det_b.json";
  for (const auto& p : {a, b})
    REQUIRE(invoke({"verify", "--target", "classical", "--m", "2", "--n", "1", "--seed", "5", "--out", p.string()})
                .code == cli::kOk);
  CHECK(cli::strip_volatile(load(a)).dump() == cli::strip_volatile(load(b)).dump());
  CHECK(load(a)["seed"] == 5);
}

TEST_CASE("schema validation catches violations", "[cli]") {
  const auto path = scratch_dir() / "schema.json";
  REQUIRE(invoke({"verify", "--target", "classical", "--m", "1", "--n", "1", "--out", path.string()}).code == 0);
  const json good = load(path);
  REQUIRE(cli::validate_report(good).empty());

  json v = good;
  v["schema_version"] = 99;
  CHECK_FALSE(cli::validate_report(v).empty());
  v = good;
  v["runs"][0]["entries"][0]["status"] = "maybe";
  CHECK_FALSE(cli::validate_report(v).empty());
  v = good;
  v["runs"][0]["entries"][0]["anchor"] = "";
  CHECK_FALSE(cli::validate_report(v).empty());
  v = good;
  v["runs"][0]["entries"][0].erase("witness");
  CHECK_FALSE(cli::validate_report(v).empty());
  v = good;
  v["summary"]["pass"] = 0;
  CHECK_FALSE(cli::validate_report(v).empty());
}

TEST_CASE("show prints canonical expressions", "[cli]") {
  const auto o = invoke({"show", "--m", "1", "--n", "1", "O"});
  REQUIRE(o.code == cli::kOk);
  const auto g = classical::golden_OE(1, 1);
  const std::string printed = trimmed(o.out);
  CHECK((printed == g->O.to_string() || printed == (-g->O).to_string()));

  const auto p1 = invoke({"show", "--m", "1", "--n", "1", "P1", "--alpha2", "0"});
  CHECK(trimmed(p1.out) == "-Hphi - Hphi^2 + H*Hphi");
  CHECK(invoke({"show", "--m", "1", "--n", "2", "P2"}).code == cli::kOk);
  CHECK(invoke({"show", "--m", "1", "--n", "1", "Ohat"}).code == cli::kOk);
  CHECK(invoke({"show", "--m", "1", "--n", "1", "Q"}).code == cli::kUsage);
  CHECK(invoke({"show", "--m", "2", "--n", "2", "O"}).code == cli::kUsage);
  CHECK(invoke({"show", "--m", "1", "--n", "1", "O", "--alpha2", "x"}).code == cli::kUsage);
}

TEST_CASE("simulate writes a nine-column CSV and a summary", "[cli]") {
  const auto csv = scratch_dir() / "k1.csv";
  const auto r = invoke({"simulate", "--m", "1", "--n", "1", "--tmax", "5", "--out", csv.string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.err.find("max relative drift") != std::string::npos);
  CHECK(r.err.find("|Q+|^2") != std::string::npos);
  std::ifstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "t,theta,phi,p_theta,p_phi,H,Hphi,O,E");
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
  const json side = load(csv.string() + ".report.json");
  CHECK(side["complete"] == true);
  CHECK(side["drift"]["max"].get<double>() < 1e-8);
  CHECK(side["product"]["max_relative_residual"].get<double>() < 1e-10);
}

TEST_CASE("simulate error paths", "[cli]") {
  const auto csv = scratch_dir() / "bad.csv";
  CHECK(invoke({"simulate", "--theta0", "0", "--out", csv.string()}).code == cli::kUsage);
  CHECK(invoke({"simulate", "--m", "2", "--n", "4", "--out", csv.string()}).code == cli::kUsage);
  const auto r = invoke({"simulate", "--tol", "1e-300", "--tmax", "1", "--out", csv.string()});
  CHECK(r.code == cli::kIntegration);
  CHECK(fs::exists(csv));
  CHECK(load(csv.string() + ".report.json")["complete"] == false);
}

TEST_CASE("SYMFORGE_THREADS caps the worker count", "[cli]") {
  ::setenv("SYMFORGE_THREADS", "1", 1);
  CHECK(cli::thread_limit() == 1);
  ::setenv("SYMFORGE_THREADS", "junk", 1);
  CHECK(cli::thread_limit() >= 1);
  ::unsetenv("SYMFORGE_THREADS");
}

TEST_CASE("parallel runs keep job order", "[cli]") {
  std::vector<std::function<cli::SuiteRun()>> jobs;
  for (int i = 0; i < 16; ++i) jobs.emplace_back([i] { return cli::SuiteRun{std::to_string(i), {}}; });
  const auto out = cli::run_parallel(jobs, 4);
  for (int i = 0; i < 16; ++i) CHECK(out[i].suite == std::to_string(i));
}
