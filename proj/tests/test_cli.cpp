#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "modalshift/cli.hpp"
#include "modalshift/pipeline.hpp"

using namespace modalshift;
using namespace fixtures;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "modalshift");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

/// Small workspace: a 6x6 city, a config and a no-op scenario.
struct Workspace {
  TempDir dir;
  std::filesystem::path config;

  explicit Workspace(std::size_t n = 300, double equilibrium = 1.0,
                     const std::string& survey = data_path("survey_table1.json").string()) {
    const Result g = cli({"gen-city", "--out", (dir / "city.json").string(), "--seed", "5", "--width", "6",
                          "--height", "6", "--zone-size", "1.0"});
    REQUIRE(g.code == 0);
    std::ostringstream eq;
    for (int i = 0; i < 12; ++i) eq << (i ? "," : "") << equilibrium;
    config = dir / "config.json";
    write_file(config, R"({"seed": 3, "n_households": )" + std::to_string(n) + R"(,
      "city": "city.json", "survey": ")" + survey + R"(",
      "tariffs": ")" + data_path("tariffs_default.json").string() + R"(",
      "expert_matrix": ")" + data_path("expert_matrix_default.json").string() + R"(",
      "scenario": "noop.json",
      "ga": {"population_size": 20, "generations": 25},
      "competition": {"equilibrium": [)" + eq.str() + R"(]}})");
    write_file(dir / "noop.json", R"({"name": "noop", "kind": "none"})");
    write_file(dir / "subway.json", R"({"name": "line", "kind": "subway", "stations": [[0.5, 1.5], [2.5, 2.5], [4.5, 3.5]],
      "rings": [{"inner_km": 0, "outer_km": 0.5, "multiplier": 1.05}]})");
  }
  std::string cfg() const { return config.string(); }
  std::filesystem::path out() const { return dir / "out"; }
};

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> f;
  std::istringstream in(line);
  for (std::string x; std::getline(in, x, ',');) f.push_back(x);
  return f;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  const Result r = cli({"run", "--workers", "many"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("modalshift: error: usage:", 0) == 0);
  CHECK(cli({"run"}).code == 2);
  CHECK(cli({"--version"}).out == std::string(kToolVersion) + "\n");
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("baseline run writes reproducible outputs") {
  Workspace ws;
  const Result r = cli({"run", "--config", ws.cfg()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  for (const char* f : {"mode_shares.csv", "housing.csv", "unhoused.csv", "decisions.csv", "contests.csv",
                        "alternatives.csv", "manifest.json"}) {
    CHECK(std::filesystem::exists(ws.out() / f));
  }
  const auto lines = csv_lines(read_file(ws.out() / "mode_shares.csv"));
  REQUIRE(lines.size() > 2);
  CHECK(lines[0] == "attribute,category,number,percentage,private_car,subway,bus,brt,taxi,walking");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i]);
    REQUIRE(f.size() == 10);
    if (std::stoul(f[2]) == 0) continue;
    double s = 0;
    for (std::size_t k = 4; k < 10; ++k) s += std::stod(f[k]);
    CHECK(std::abs(s - 100.0) <= 0.1);
  }
  const RunManifest first = parse_manifest(read_file(ws.out() / "manifest.json"));
  REQUIRE(cli({"run", "--config", ws.cfg(), "--workers", "3"}).code == 0);
  const RunManifest second = parse_manifest(read_file(ws.out() / "manifest.json"));
  REQUIRE(first.files.size() == second.files.size());
  for (std::size_t i = 0; i < first.files.size(); ++i) {
    CHECK(first.files[i].name == second.files[i].name);
    CHECK(first.files[i].checksum == second.files[i].checksum);
  }
  CHECK(first.config_hash == second.config_hash);
}

TEST_CASE("synth output is byte-identical on rerun") {
  Workspace ws(1000);
  REQUIRE(cli({"synth", "--config", ws.cfg(), "--seed", "7"}).code == 0);
  const std::string a = read_file(ws.out() / "synth" / "households.csv");
  const std::string aw = read_file(ws.out() / "synth" / "workers.csv");
  REQUIRE(cli({"synth", "--config", ws.cfg(), "--seed", "7"}).code == 0);
  CHECK(read_file(ws.out() / "synth" / "households.csv") == a);
  CHECK(read_file(ws.out() / "synth" / "workers.csv") == aw);
  CHECK(csv_lines(a).size() == 1001);
  REQUIRE(cli({"synth", "--config", ws.cfg(), "--seed", "8"}).code == 0);
  CHECK(read_file(ws.out() / "synth" / "households.csv") != a);
}

TEST_CASE("malformed survey is an input error naming the field") {
  TempDir bad;
  write_file(bad / "survey.json", R"({"rows": [{"attribute": "size", "category": "single", "residential": [1, 2, 3]}]})");
  Workspace ws(100, 1.0, (bad / "survey.json").string());
  const Result r = cli({"run", "--config", ws.cfg()});
  CHECK(r.code == 2);
  CHECK(r.err.find("residential") != std::string::npos);
  CHECK(r.err.rfind("modalshift: error: input:", 0) == 0);
}

TEST_CASE("scenario needs a baseline") {
  Workspace ws;
  const Result r = cli({"scenario", "--config", ws.cfg()});
  CHECK(r.code == 2);
  CHECK(r.err.find("baseline missing") != std::string::npos);
  REQUIRE(cli({"run", "--config", ws.cfg()}).code == 0);
  CHECK(cli({"scenario", "--config", ws.cfg(), "--seed", "4"}).code == 2);
}

TEST_CASE("no-op scenario gives an all-zero shift table") {
  Workspace ws;
  REQUIRE(cli({"run", "--config", ws.cfg()}).code == 0);
  const Result r = cli({"scenario", "--config", ws.cfg()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto lines = csv_lines(read_file(ws.out() / "scenario-noop" / "shift.csv"));
  REQUIRE(lines.size() > 2);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i]);
    for (std::size_t k = 4; k < f.size(); ++k) CHECK(f[k] == "0.00");
  }
  CHECK(read_file(ws.out() / "scenario-noop" / "decisions.csv") == read_file(ws.out() / "decisions.csv"));
  for (const auto& l : csv_lines(read_file(ws.out() / "scenario-noop" / "zone_deltas.csv"))) {
    CHECK(l.find('+') == std::string::npos);
  }
}

TEST_CASE("subway scenario and the diff command agree") {
  Workspace ws;
  REQUIRE(cli({"run", "--config", ws.cfg()}).code == 0);
  const Result s = cli({"scenario", "--config", ws.cfg(), "--scenario", (ws.dir / "subway.json").string()});
  REQUIRE_MESSAGE(s.code == 0, s.err);
  const auto dir = ws.out() / "scenario-line";
  const Result d = cli({"diff", "--baseline", (ws.out() / "decisions.csv").string(), "--scenario",
                        (dir / "decisions.csv").string(), "--city", (ws.dir / "city.json").string(), "--out",
                        (ws.dir / "diff").string()});
  REQUIRE_MESSAGE(d.code == 0, d.err);
  CHECK(read_file(ws.dir / "diff" / "shift.csv") == read_file(dir / "shift.csv"));
  CHECK(d.out == read_file(dir / "shift.csv"));
  // The per-zone table uses the baseline city's zones either way.
  CHECK(read_file(ws.dir / "diff" / "zone_deltas.csv") == read_file(dir / "zone_deltas.csv"));
}

TEST_CASE("capacity-starved markets leave households unhoused") {
  Workspace ws(300, 0.02);
  const Result r = cli({"run", "--config", ws.cfg()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(csv_lines(read_file(ws.out() / "unhoused.csv")).size() > 1);
}

TEST_CASE("validate command") {
  Workspace ws;
  CHECK(cli({"validate", "--config", ws.cfg()}).code == 0);
  CHECK(cli({"validate", "--city", (ws.dir / "city.json").string()}).code == 0);
  CHECK(cli({"validate"}).code == 2);
  write_file(ws.dir / "broken.json", R"({"name": "b", "kind": "subway", "stations": [[0, 0]]})");
  CHECK(cli({"validate", "--scenario", (ws.dir / "broken.json").string()}).code == 2);
  CHECK(cli({"validate", "--city", (ws.dir / "nope.json").string()}).code == 2);
}
