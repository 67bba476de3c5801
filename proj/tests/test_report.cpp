#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "modalshift/report.hpp"

using namespace modalshift;
using namespace fixtures;

namespace {

constexpr std::size_t idx(Mode m) { return static_cast<std::size_t>(m); }

CategoryLabels labels() { return {{"single", "couple", "3-4", ">4"}, {"<10", "10-25", ">25"}, {"0", "1", ">1"}}; }

WorkerOutcome outcome(AgentId id, std::optional<ZoneId> home, ZoneId work, double km, std::optional<Mode> mode,
                      Gender g = Gender::male) {
  WorkerOutcome o;
  o.worker = id;
  o.household = id;
  o.gender = g;
  o.size_class = static_cast<std::size_t>(id % 4);
  o.income_class = static_cast<std::size_t>(id % 3);
  o.car_class = static_cast<std::size_t>(id % 2);
  o.home = home;
  o.work = work;
  o.distance_km = km;
  o.mode = mode;
  return o;
}

std::vector<WorkerOutcome> four_agents() {
  return {outcome(1, 1, 2, 3.0, Mode::bus), outcome(2, 2, 3, 6.0, Mode::car, Gender::female),
          outcome(3, 3, 1, 20.0, Mode::subway), outcome(4, 4, 4, 0.5, Mode::walk)};
}

const ShiftRow& row(const ShiftReport& r, const std::string& attribute, const std::string& category) {
  for (const ShiftRow& x : r.rows) {
    if (x.attribute == attribute && x.category == category) return x;
  }
  throw std::runtime_error("row not found");
}

}  // namespace

TEST_CASE("four-agent relocation fixture") {
  const CityModel city = make_city(grid_zones(2, 3));
  const auto base = four_agents();
  auto scen = base;
  scen[0].home = 5;
  scen[0].mode = Mode::subway;
  const ShiftReport r = diff_report(base, scen, labels(), city);
  const ShiftRow& total = r.total();
  CHECK(total.attribute == "total");
  CHECK(total.number == 4);
  CHECK(total.percentage == doctest::Approx(100.0));
  CHECK(total.relocation == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(total.delta[idx(Mode::subway)] == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(total.delta[idx(Mode::bus)] == doctest::Approx(-25.0).epsilon(1e-12));
  CHECK(total.delta[idx(Mode::car)] == 0.0);
  const ShiftRow& near = row(r, "distance", "<5");
  CHECK(near.number == 2);
  CHECK(near.relocation == doctest::Approx(50.0));
  CHECK(row(r, "gender", "female").relocation == 0.0);
  const std::string csv = shift_csv(r);
  CHECK(csv.find("total,total,4,100.00,25.00,0.00,+25.00,-25.00,0.00,0.00,0.00") != std::string::npos);
}

TEST_CASE("identical runs give zero everywhere") {
  const CityModel city = make_city(grid_zones(2, 3));
  const auto base = four_agents();
  const ShiftReport r = diff_report(base, base, labels(), city);
  for (const ShiftRow& x : r.rows) {
    CHECK(x.relocation == 0.0);
    for (double d : x.delta) CHECK(d == 0.0);
  }
  for (const ZoneDelta& z : r.zones) {
    CHECK(z.baseline_workers == z.scenario_workers);
    for (double d : z.delta) CHECK(d == 0.0);
  }
  CHECK(shift_csv(r).find('+') == std::string::npos);
}

TEST_CASE("deltas of a row sum to zero") {
  const CityModel city = make_city(grid_zones(3, 3));
  Rng rng(3);
  std::vector<WorkerOutcome> base, scen;
  for (AgentId i = 1; i <= 500; ++i) {
    auto draw_mode = [&] { return kAllModes[rng.index(kModes)]; };
    const ZoneId home = 1 + static_cast<ZoneId>(rng.index(9));
    base.push_back(outcome(i, home, 1 + static_cast<ZoneId>(rng.index(9)), rng.uniform(0, 25), draw_mode(),
                           rng.bernoulli(0.3) ? Gender::female : Gender::male));
    WorkerOutcome s = base.back();
    if (rng.bernoulli(0.2)) s.home = 1 + static_cast<ZoneId>(rng.index(9));
    if (rng.bernoulli(0.3)) s.mode = draw_mode();
    scen.push_back(s);
  }
  const ShiftReport r = diff_report(base, scen, labels(), city);
  for (const ShiftRow& x : r.rows) {
    if (x.number == 0) continue;
    double s = 0;
    for (double d : x.delta) s += d;
    CHECK(std::abs(s) < 1e-9);
  }
  const auto shares = mode_share_table(base, labels());
  for (const ModeShareRow& x : shares) {
    if (x.number == 0) continue;
    double s = 0;
    for (double v : x.share) s += v;
    CHECK(s == doctest::Approx(100.0));
  }
  CHECK(shares.back().number == 500);
}

TEST_CASE("categories") {
  const auto cats = categorize(four_agents(), labels());
  std::size_t distance_members = 0, gender_members = 0;
  for (const Category& c : cats) {
    if (c.attribute == "distance") distance_members += c.members.size();
    if (c.attribute == "gender") gender_members += c.members.size();
  }
  CHECK(distance_members == 4);
  CHECK(gender_members == 4);
  CHECK(cats.back().attribute == "total");
  auto unhoused = four_agents();
  unhoused[1].home.reset();
  unhoused[1].mode.reset();
  std::size_t housed_distance = 0;
  for (const Category& c : categorize(unhoused, labels())) {
    if (c.attribute == "distance") housed_distance += c.members.size();
  }
  CHECK(housed_distance == 3);
  CHECK(distance_class(4.99) == DistanceClass::under_5);
  CHECK(distance_class(5.0) == DistanceClass::from_5_to_15);
  CHECK(distance_class(15.0) == DistanceClass::from_5_to_15);
  CHECK(distance_class(15.01) == DistanceClass::over_15);
}

TEST_CASE("losing a home counts as relocation and removes the mode") {
  const CityModel city = make_city(grid_zones(2, 3));
  const auto base = four_agents();
  auto scen = base;
  scen[3].home.reset();
  scen[3].mode.reset();
  const ShiftReport r = diff_report(base, scen, labels(), city);
  CHECK(r.total().relocation == doctest::Approx(25.0));
  CHECK(r.total().delta[idx(Mode::walk)] == doctest::Approx(-25.0));
}

TEST_CASE("outcome CSV round trip") {
  auto outs = four_agents();
  outs[2].home.reset();
  outs[2].mode.reset();
  outs[1].distance_km = 0.1 + 0.2;
  CategoryLabels parsed;
  const auto back = parse_outcomes_csv(outcomes_csv(outs, labels()), parsed);
  CHECK(back == outs);
  CHECK(parsed.size[1] == "couple");
  CHECK(parsed.income[2] == ">25");
  CHECK_THROWS_AS(parse_outcomes_csv("worker_id,household_id\n1,2\n", parsed), InputError);
}

TEST_CASE("fixed formatting never prints negative zero") {
  CHECK(format_fixed(-0.0, 2) == "0.00");
  CHECK(format_fixed(-0.001, 2, true) == "0.00");
  CHECK(format_fixed(0.0, 2, true) == "0.00");
  CHECK(format_fixed(1.005, 1, true) == "+1.0");
  CHECK(format_fixed(-2.5, 2, true) == "-2.50");
  CHECK(format_fixed(3.14159, 3) == "3.142");
}

TEST_CASE("mismatched runs are rejected") {
  const CityModel city = make_city(grid_zones(2, 3));
  const auto base = four_agents();
  auto shorter = base;
  shorter.pop_back();
  CHECK_THROWS_WITH_AS(diff_report(base, shorter, labels(), city), doctest::Contains("population mismatch"), InputError);
  auto renamed = base;
  renamed[2].worker = 99;
  CHECK_THROWS_AS(diff_report(base, renamed, labels(), city), InputError);
}

TEST_CASE("housing CSV") {
  const CityModel city = make_city(grid_zones(2, 1));
  const std::vector<std::int64_t> housed = {3, 0};
  CHECK(housing_csv(city, housed) == "zone_id,x,y,housed\n1,0.500,0.500,3\n2,1.500,0.500,0\n");
}
