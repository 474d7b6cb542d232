#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kt/cli.hpp"
#include "kt/report_io.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using kt::cli::run_cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("kt_hodge_test_" + name);
}

}  // namespace

TEST_CASE("compute reproduces the reference values") {
  auto r = run({"compute", "--d", "1", "--sqrt-rho", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["h01"] == 4);
  CHECK(j["schema_version"] == 1);
  CHECK(j["params"]["sqrt_rho"] == "2");
  CHECK(j["params"]["d"] == "1");

  r = run({"compute", "--d", "1", "--sqrt-rho", "3/2", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["h01"] == 2);

  r = run({"compute", "--d", "1", "--t", "4+1*sqrt(17)", "--nmax", "8", "--format", "json"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["params"]["t"] == "4 + 1*sqrt(17)");
  REQUIRE(j["stokes_certificates"].size() == 2);
  CHECK(j["stokes_certificates"][0] == json{{"n", -1}, {"u", -1}, {"multiplicity", 1}});
  CHECK(j["stokes_certificates"][1] == json{{"n", 1}, {"u", -1}, {"multiplicity", 1}});
  CHECK(j["nmax_used"] == 8);

  r = run({"compute", "--d", "1", "--sqrt-rho", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("h01      4") != std::string::npos);
}

TEST_CASE("usage errors exit with 2 and name the flag") {
  auto r = run({"compute", "--d", "0", "--sqrt-rho", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("d must be positive") != std::string::npos);

  r = run({"compute", "--d", "1/x", "--sqrt-rho", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--d") != std::string::npos);

  r = run({"compute", "--d", "1", "--t", "4+sqrt(y)"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--t") != std::string::npos);

  CHECK(run({"compute", "--d", "1"}).code == 2);
  CHECK(run({"compute", "--sqrt-rho", "2"}).code == 2);
  CHECK(run({"compute", "--d", "1", "--sqrt-rho", "2", "--t", "4+1*sqrt(17)"}).code == 2);
  CHECK(run({"compute", "--d", "1", "--sqrt-rho", "-2"}).code == 2);
  CHECK(run({"compute", "--d", "1", "--sqrt-rho", "2", "--nmax", "0"}).code == 2);
  CHECK(run({"compute", "--d", "1", "--sqrt-rho", "2", "--format", "xml"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("sweep") {
  auto r = run({"sweep", "--d-list", "1", "--sqrt-rho-list", "1,3/2,2,5/2,3"});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == kt::io::csv_header());
  std::vector<std::string> h01;
  for (std::size_t i = 1; i < rows.size(); ++i) h01.push_back(kt::io::csv_split(rows[i])[6]);
  CHECK(h01 == std::vector<std::string>{"4", "2", "4", "2", "4"});

  r = run({"sweep", "--d-list", "", "--sqrt-rho-list", ""});
  CHECK(r.code == 0);
  CHECK(lines(r.out) == std::vector<std::string>{kt::io::csv_header()});

  r = run({"sweep", "--d-list", "0,1", "--sqrt-rho-list", "2"});
  REQUIRE(r.code == 0);
  rows = lines(r.out);
  REQUIRE(rows.size() == 3);
  auto bad = kt::io::csv_split(rows[1]);
  REQUIRE(bad.size() == 10);
  CHECK(bad[0] == "0");
  CHECK_FALSE(bad[9].empty());
  CHECK(bad[6].empty());
  auto good = kt::io::csv_split(rows[2]);
  CHECK(good[6] == "4");
  CHECK(good[9].empty());

  CHECK(run({"sweep", "--d-list", "1,zz", "--sqrt-rho-list", "2"}).code == 2);
  CHECK(run({"sweep"}).code == 2);
  CHECK(run({"sweep", "--grid", "/nonexistent/grid.txt"}).code == 2);
}

TEST_CASE("sweep from a grid file") {
  auto grid = temp_file("grid.txt");
  auto out = temp_file("sweep.csv");
  {
    std::ofstream g(grid);
    g << "# d and metric per line\n"
      << "--d 1 --sqrt-rho 2\n"
      << "\n"
      << "--d 1 --t \"4 + 1*sqrt(17)\" --nmax 4\n"
      << "--d 0 --sqrt-rho 1\n"
      << "--d 25/2 --sqrt-rho 1 --a 7/2\n";
  }
  auto r = run({"sweep", "--grid", grid.string(), "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  auto rows = lines(buf.str());
  REQUIRE(rows.size() == 5);
  CHECK(kt::io::csv_split(rows[1])[6] == "4");
  CHECK(kt::io::csv_split(rows[2])[1] == "4 + 1*sqrt(17)");
  CHECK(kt::io::csv_split(rows[2])[6] == "4");
  CHECK_FALSE(kt::io::csv_split(rows[3])[9].empty());
  CHECK(kt::io::csv_split(rows[4])[4] == "10");
  CHECK(kt::io::csv_split(rows[4])[2] == "7/2");

  // A syntax error anywhere stops the sweep before it starts.
  {
    std::ofstream g(grid);
    g << "--d 1 --sqrt-rho 2\n--d 1 --sqrt-rho two\n";
  }
  r = run({"sweep", "--grid", grid.string()});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("grid line 2") != std::string::npos);
  std::filesystem::remove(grid);
  std::filesystem::remove(out);
}

TEST_CASE("CSV and JSON carry the same numbers") {
  for (const auto& metric : std::vector<std::vector<std::string>>{
           {"--sqrt-rho", "2"}, {"--sqrt-rho", "7/3"}, {"--t", "8+2*sqrt(17)"}}) {
    std::vector<std::string> base{"compute", "--d", "1", "--a", "-3", "--nmax", "16"};
    base.insert(base.end(), metric.begin(), metric.end());
    auto js = base, cs = base;
    js.insert(js.end(), {"--format", "json"});
    cs.insert(cs.end(), {"--format", "csv"});
    auto j = json::parse(run(js).out);
    auto rows = lines(run(cs).out);
    REQUIRE(rows.size() == 2);
    auto c = kt::io::csv_split(rows[1]);
    CHECK(c[0] == j["params"]["d"]);
    CHECK(c[1] == j["params"][metric[0] == "--t" ? "t" : "sqrt_rho"]);
    CHECK(c[2] == j["params"]["a"]);
    CHECK(c[3] == std::to_string(j["params"]["nmax"].get<int>()));
    CHECK(c[4] == std::to_string(j["h_prime"].get<int>()));
    CHECK(c[5] == std::to_string(j["h_double_prime"].get<int>()));
    CHECK(c[6] == std::to_string(j["h01"].get<int>()));
    CHECK(c[7] == std::to_string(j["lattice_points"].size()));
    CHECK(c[8] == std::to_string(j["stokes_certificates"].size()));
  }
}

TEST_CASE("JSON round-trip") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"compute", "--d", "25/2", "--sqrt-rho", "1", "--format", "json"},
           {"compute", "--d", "1", "--t", "12+1*sqrt(145)", "--a", "5/7", "--format", "json"},
           {"compute", "--d", "3/4", "--sqrt-rho", "9/5", "--nmax", "3", "--format", "json"}}) {
    auto j = json::parse(run(args).out);
    auto report = kt::io::report_from_json(j);
    CHECK(kt::io::report_to_json(report) == j);
    CHECK(kt::io::report_from_json(kt::io::report_to_json(report)) == report);
  }
  auto j = json::parse(run({"compute", "--d", "1", "--sqrt-rho", "2", "--format", "json"}).out);
  auto broken = j;
  broken["schema_version"] = 2;
  CHECK_THROWS(kt::io::report_from_json(broken));
  broken = j;
  broken["h01"] = 5;
  CHECK_THROWS(kt::io::report_from_json(broken));
  broken = j;
  broken["params"]["d"] = 1;
  CHECK_THROWS(kt::io::report_from_json(broken));
}

TEST_CASE("verify") {
  auto r = run({"verify", "--d", "1", "--sqrt-rho", "2"});
  CHECK(r.code == 0);
  int toral = 0, stokes = 0;
  for (const auto& line : lines(r.out)) {
    if (line.rfind("PASS  toral l=", 0) == 0) ++toral;
    if (line.find("stokes n=") != std::string::npos) ++stokes;
  }
  CHECK(toral == 4);
  CHECK(stokes == 0);

  r = run({"verify", "--d", "1", "--t", "4+1*sqrt(17)", "--nmax", "2", "--basis-size", "256"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS  stokes n=1 m=0 u=-1") != std::string::npos);
  CHECK(r.out.find("PASS  stokes n=-1 m=0 u=-1") != std::string::npos);

  r = run({"verify", "--d", "1", "--sqrt-rho", "2", "--basis-size", "4"});
  CHECK(r.code == 3);
  CHECK(r.out.find("INDETERMINATE") != std::string::npos);

  r = run({"verify", "--d", "1", "--sqrt-rho", "2", "--basis-size", "32", "--format", "json"});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["report"]["h01"] == 4);
  CHECK(j["claims"].size() == 11);
  for (const auto& c : j["claims"]) CHECK(c["verdict"] == "PASS");

  CHECK(run({"verify", "--d", "-1", "--sqrt-rho", "2"}).code == 2);
}

TEST_CASE("derive") {
  auto r = run({"derive"});
  CHECK(r.code == 0);
  CHECK(r.out.find("  −V̄₂(f) + V̄₁(g) + (b/4)g = 0\n  ρV₁(f) + V₂(g) = 0\n") != std::string::npos);
  CHECK(r.out.find("PASS") == std::string::npos);

  r = run({"derive", "--check-all"});
  CHECK(r.code == 0);
  CHECK(r.out.find("dω = 0 PASS") != std::string::npos);
  CHECK(r.out.find("*φ̄² = −φ^{11̄2̄} PASS") != std::string::npos);
  CHECK(r.out.find("*φ̄¹ = ρφ^{21̄2̄} PASS") != std::string::npos);
  CHECK(r.out.find("d∘d = 0 PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
