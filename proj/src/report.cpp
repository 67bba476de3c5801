#include "modalshift/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace modalshift {

std::string_view report_label(Mode m) {
  switch (m) {
    case Mode::car: return "private_car";
    case Mode::subway: return "subway";
    case Mode::bus: return "bus";
    case Mode::brt: return "brt";
    case Mode::taxi: return "taxi";
    case Mode::walk: return "walking";
  }
  return "unknown";
}

DistanceClass distance_class(double km) {
  if (km < 5.0) return DistanceClass::under_5;
  if (km <= 15.0) return DistanceClass::from_5_to_15;
  return DistanceClass::over_15;
}

std::string_view to_string(DistanceClass c) {
  switch (c) {
    case DistanceClass::under_5: return "<5";
    case DistanceClass::from_5_to_15: return "5-15";
    case DistanceClass::over_15: return ">15";
  }
  return "?";
}

CategoryLabels labels_of(const Population& population) {
  return {population.size_labels, population.income_labels, population.car_labels};
}

std::vector<Category> categorize(std::span<const WorkerOutcome> outcomes, const CategoryLabels& labels) {
  std::vector<Category> cats;
  cats.push_back({"gender", "female", {}});
  cats.push_back({"gender", "male", {}});
  const std::size_t size0 = cats.size();
  for (const auto& l : labels.size) cats.push_back({"household_size", l, {}});
  const std::size_t income0 = cats.size();
  for (const auto& l : labels.income) cats.push_back({"income", l, {}});
  const std::size_t car0 = cats.size();
  for (const auto& l : labels.car) cats.push_back({"cars", l, {}});
  const std::size_t dist0 = cats.size();
  for (std::size_t d = 0; d < kDistanceClasses; ++d) {
    cats.push_back({"distance", std::string(to_string(static_cast<DistanceClass>(d))), {}});
  }
  const std::size_t total = cats.size();
  cats.push_back({"total", "total", {}});
  auto slot = [&](std::size_t base, std::size_t index, std::size_t count, const char* what) -> Category& {
    if (index >= count) throw InputError(std::string("outcome refers to unknown ") + what + " class");
    return cats[base + index];
  };
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const WorkerOutcome& o = outcomes[i];
    cats[o.gender == Gender::female ? 0 : 1].members.push_back(i);
    slot(size0, o.size_class, labels.size.size(), "size").members.push_back(i);
    slot(income0, o.income_class, labels.income.size(), "income").members.push_back(i);
    slot(car0, o.car_class, labels.car.size(), "car").members.push_back(i);
    if (o.home) cats[dist0 + static_cast<std::size_t>(distance_class(o.distance_km))].members.push_back(i);
    cats[total].members.push_back(i);
  }
  return cats;
}

namespace {

std::array<double, kModes> shares(std::span<const WorkerOutcome> outcomes,
                                  const std::vector<std::size_t>& members) {
  std::array<std::size_t, kModes> count{};
  std::size_t with_mode = 0;
  for (std::size_t i : members) {
    if (!outcomes[i].mode) continue;
    ++count[static_cast<std::size_t>(*outcomes[i].mode)];
    ++with_mode;
  }
  std::array<double, kModes> s{};
  if (with_mode == 0) return s;
  for (std::size_t m = 0; m < kModes; ++m) {
    s[m] = 100.0 * static_cast<double>(count[m]) / static_cast<double>(with_mode);
  }
  return s;
}

double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void mode_header(std::ostringstream& out) {
  for (Mode m : kReportModes) out << ',' << report_label(m);
  out << '\n';
}

}  // namespace

std::vector<ModeShareRow> mode_share_table(std::span<const WorkerOutcome> outcomes,
                                           const CategoryLabels& labels) {
  std::vector<ModeShareRow> rows;
  for (const Category& c : categorize(outcomes, labels)) {
    rows.push_back({c.attribute, c.label, c.members.size(), percent(c.members.size(), outcomes.size()),
                    shares(outcomes, c.members)});
  }
  return rows;
}

ShiftReport diff_report(std::span<const WorkerOutcome> baseline,
                        std::span<const WorkerOutcome> scenario, const CategoryLabels& labels,
                        const CityModel& city) {
  if (baseline.size() != scenario.size()) {
    throw InputError("population mismatch: " + std::to_string(baseline.size()) + " baseline workers vs " +
                     std::to_string(scenario.size()) + " scenario workers");
  }
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    if (baseline[i].worker != scenario[i].worker || baseline[i].household != scenario[i].household) {
      throw InputError("population mismatch at row " + std::to_string(i) + ": worker " +
                       std::to_string(baseline[i].worker) + " vs " + std::to_string(scenario[i].worker));
    }
  }
  ShiftReport report;
  for (const Category& c : categorize(baseline, labels)) {
    ShiftRow row;
    row.attribute = c.attribute;
    row.category = c.label;
    row.number = c.members.size();
    row.percentage = percent(c.members.size(), baseline.size());
    std::size_t moved = 0;
    for (std::size_t i : c.members) moved += baseline[i].home != scenario[i].home ? 1 : 0;
    row.relocation = percent(moved, c.members.size());
    const auto before = shares(baseline, c.members);
    const auto after = shares(scenario, c.members);
    for (std::size_t m = 0; m < kModes; ++m) row.delta[m] = after[m] - before[m];
    report.rows.push_back(std::move(row));
  }

  const std::size_t n = city.zone_count();
  std::vector<std::vector<std::size_t>> base_members(n);
  std::vector<std::vector<std::size_t>> scen_members(n);
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    if (baseline[i].home && baseline[i].mode) base_members[city.zone_index(*baseline[i].home)].push_back(i);
    if (scenario[i].home && scenario[i].mode) scen_members[city.zone_index(*scenario[i].home)].push_back(i);
  }
  for (std::size_t z = 0; z < n; ++z) {
    ZoneDelta d;
    d.zone = city.zones()[z].id;
    d.centroid = city.zones()[z].centroid;
    d.baseline_workers = base_members[z].size();
    d.scenario_workers = scen_members[z].size();
    const auto before = shares(baseline, base_members[z]);
    const auto after = shares(scenario, scen_members[z]);
    for (std::size_t m = 0; m < kModes; ++m) d.delta[m] = after[m] - before[m];
    report.zones.push_back(d);
  }
  return report;
}

std::string format_fixed(double v, int decimals, bool sign) {
  char buf[64];
  std::snprintf(buf, sizeof buf, sign ? "%+.*f" : "%.*f", decimals, v);
  std::string s(buf);
  // Anything that rounds to zero prints unsigned.
  if (s.find_first_not_of("+-0.") == std::string::npos) {
    s.erase(0, s.find_first_not_of("+-"));
  }
  return s;
}

std::string mode_share_csv(std::span<const ModeShareRow> rows) {
  std::ostringstream out;
  out << "attribute,category,number,percentage";
  mode_header(out);
  for (const ModeShareRow& r : rows) {
    out << r.attribute << ',' << csv_field(r.category) << ',' << r.number << ','
        << format_fixed(r.percentage, 2);
    for (Mode m : kReportModes) out << ',' << format_fixed(r.share[static_cast<std::size_t>(m)], 2);
    out << '\n';
  }
  return out.str();
}

std::string shift_csv(const ShiftReport& report) {
  std::ostringstream out;
  out << "attribute,category,number,percentage,residential_zone";
  mode_header(out);
  for (const ShiftRow& r : report.rows) {
    out << r.attribute << ',' << csv_field(r.category) << ',' << r.number << ','
        << format_fixed(r.percentage, 2) << ',' << format_fixed(r.relocation, 2);
    for (Mode m : kReportModes) out << ',' << format_fixed(r.delta[static_cast<std::size_t>(m)], 2, true);
    out << '\n';
  }
  return out.str();
}

std::string zone_delta_csv(const ShiftReport& report) {
  std::ostringstream out;
  out << "zone_id,x,y,baseline_workers,scenario_workers";
  mode_header(out);
  for (const ZoneDelta& z : report.zones) {
    out << z.zone << ',' << format_fixed(z.centroid.x, 3) << ',' << format_fixed(z.centroid.y, 3) << ','
        << z.baseline_workers << ',' << z.scenario_workers;
    for (Mode m : kReportModes) out << ',' << format_fixed(z.delta[static_cast<std::size_t>(m)], 2, true);
    out << '\n';
  }
  return out.str();
}

std::string outcomes_csv(std::span<const WorkerOutcome> outcomes, const CategoryLabels& labels) {
  std::ostringstream out;
  out << "worker_id,household_id,gender,size_class,size_label,income_class,income_label,car_class,"
         "car_label,home_zone,work_zone,distance_km,mode\n";
  auto label = [](const std::vector<std::string>& v, std::size_t i) {
    return i < v.size() ? csv_field(v[i]) : std::string();
  };
  for (const WorkerOutcome& o : outcomes) {
    out << o.worker << ',' << o.household << ',' << (o.gender == Gender::female ? "female" : "male") << ','
        << o.size_class << ',' << label(labels.size, o.size_class) << ',' << o.income_class << ','
        << label(labels.income, o.income_class) << ',' << o.car_class << ','
        << label(labels.car, o.car_class) << ',';
    if (o.home) out << *o.home;
    out << ',' << o.work << ',' << shortest(o.distance_km) << ',';
    if (o.mode) out << to_string(*o.mode);
    out << '\n';
  }
  return out.str();
}

std::vector<WorkerOutcome> parse_outcomes_csv(std::string_view text, CategoryLabels& labels) {
  std::vector<WorkerOutcome> out;
  labels = {};
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto integer = [&](const std::string& s, const char* what) {
    std::int64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
      throw InputError("decisions file line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    }
    return v;
  };
  auto set_label = [](std::vector<std::string>& v, std::size_t i, const std::string& l) {
    if (v.size() <= i) v.resize(i + 1);
    v[i] = l;
  };
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 13) {
      throw InputError("decisions file line " + std::to_string(line_no) + ": expected 13 fields, got " +
                       std::to_string(f.size()));
    }
    WorkerOutcome o;
    o.worker = integer(f[0], "worker_id");
    o.household = integer(f[1], "household_id");
    if (f[2] == "female") o.gender = Gender::female;
    else if (f[2] == "male") o.gender = Gender::male;
    else throw InputError("decisions file line " + std::to_string(line_no) + ": bad gender '" + f[2] + "'");
    o.size_class = static_cast<std::size_t>(integer(f[3], "size_class"));
    set_label(labels.size, o.size_class, f[4]);
    o.income_class = static_cast<std::size_t>(integer(f[5], "income_class"));
    set_label(labels.income, o.income_class, f[6]);
    o.car_class = static_cast<std::size_t>(integer(f[7], "car_class"));
    set_label(labels.car, o.car_class, f[8]);
    if (!f[9].empty()) o.home = integer(f[9], "home_zone");
    o.work = integer(f[10], "work_zone");
    const auto r = std::from_chars(f[11].data(), f[11].data() + f[11].size(), o.distance_km);
    if (r.ec != std::errc()) {
      throw InputError("decisions file line " + std::to_string(line_no) + ": bad distance_km '" + f[11] + "'");
    }
    if (!f[12].empty()) o.mode = parse_mode(f[12]);
    out.push_back(o);
  }
  return out;
}

std::string housing_csv(const CityModel& city, std::span<const std::int64_t> housed_per_zone) {
  std::ostringstream out;
  out << "zone_id,x,y,housed\n";
  for (std::size_t z = 0; z < city.zone_count(); ++z) {
    const Zone& zone = city.zones()[z];
    out << zone.id << ',' << format_fixed(zone.centroid.x, 3) << ',' << format_fixed(zone.centroid.y, 3)
        << ',' << (z < housed_per_zone.size() ? housed_per_zone[z] : 0) << '\n';
  }
  return out.str();
}

}  // namespace modalshift
