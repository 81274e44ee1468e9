#include "zonesim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "zonesim/datetime.hpp"
#include "zonesim/error.hpp"

namespace zonesim {

namespace {

std::string strip_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::string normalize_key(std::string_view raw) {
  std::string key;
  bool pending_space = false;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !key.empty();
      continue;
    }
    if (pending_space) {
      key.push_back(' ');
      pending_space = false;
    }
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return key;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Flattens the brace tree into "block.sub.key" -> raw value text.
class FlatConfig {
 public:
  explicit FlatConfig(std::string_view text) {
    const std::string clean = strip_comments(text);
    std::size_t pos = 0;
    parse_block(clean, pos, "");
  }

  const std::string* find(std::string_view path) const {
    auto it = entries_.find(std::string(path));
    if (it != entries_.end()) return &it->second;
    // Configs conventionally wrap everything in one "building" block; accept them
    // with or without the wrapper.
    it = entries_.find("building." + std::string(path));
    if (it != entries_.end()) return &it->second;
    return nullptr;
  }

 private:
  void parse_block(const std::string& text, std::size_t& pos,
                   const std::string& prefix) {
    while (pos < text.size()) {
      while (pos < text.size() &&
             (std::isspace(static_cast<unsigned char>(text[pos])) ||
              text[pos] == ',')) {
        ++pos;
      }
      if (pos >= text.size()) return;
      if (text[pos] == '}') {
        ++pos;
        return;
      }
      const auto colon = text.find(':', pos);
      if (colon == std::string::npos) return;
      const std::string key = normalize_key(text.substr(pos, colon - pos));
      pos = colon + 1;
      while (pos < text.size() &&
             std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      }
      const std::string path = prefix.empty() ? key : prefix + "." + key;
      if (pos < text.size() && text[pos] == '{') {
        ++pos;
        parse_block(text, pos, path);
        continue;
      }
      if (pos < text.size() && text[pos] == '[') {
        const auto close = text.find(']', pos);
        const auto end = close == std::string::npos ? text.size() : close + 1;
        entries_[path] = trim(text.substr(pos, end - pos));
        pos = end;
        continue;
      }
      auto end = text.find_first_of(",\n}", pos);
      if (end == std::string::npos) end = text.size();
      entries_[path] = trim(text.substr(pos, end - pos));
      pos = end;
      if (pos < text.size() && text[pos] == ',') ++pos;
    }
  }

  std::map<std::string, std::string> entries_;
};

[[noreturn]] void out_of_range(const std::string& key, const std::string& bound) {
  throw Error(Errc::out_of_range_value,
              "value of '" + key + "' out of range: expected " + bound);
}

// Numeric values may trail a unit ("2000 kJ/K", "5%"); the number leads.
double parse_number(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr == s.data()) {
    out_of_range(key, "a number, got '" + s + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::string s = trim(raw);
  if (!s.empty() && s.front() == '[') s.erase(s.begin());
  if (!s.empty() && s.back() == ']') s.pop_back();
  std::vector<double> values;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    values.push_back(parse_number(key, item));
  }
  if (values.empty()) out_of_range(key, "a non-empty list");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

struct Reader {
  const FlatConfig& flat;

  bool number(std::initializer_list<const char*> aliases, double& out) const {
    for (const char* a : aliases) {
      if (const std::string* raw = flat.find(a)) {
        out = parse_number(a, *raw);
        return true;
      }
    }
    return false;
  }

  bool integer(std::initializer_list<const char*> aliases, int& out) const {
    double v;
    if (!number(aliases, v)) return false;
    out = static_cast<int>(std::llround(v));
    return true;
  }

  bool text(std::initializer_list<const char*> aliases, std::string& out) const {
    for (const char* a : aliases) {
      if (const std::string* raw = flat.find(a)) {
        out = trim(*raw);
        return true;
      }
    }
    return false;
  }

  bool list(std::initializer_list<const char*> aliases,
            std::vector<double>& out) const {
    for (const char* a : aliases) {
      if (const std::string* raw = flat.find(a)) {
        out = parse_list(a, *raw);
        return true;
      }
    }
    return false;
  }

  bool unsigned64(std::initializer_list<const char*> aliases,
                  std::uint64_t& out) const {
    for (const char* a : aliases) {
      if (const std::string* raw = flat.find(a)) {
        const std::string s = trim(*raw);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
          out_of_range(a, "an unsigned integer, got '" + s + "'");
        }
        return true;
      }
    }
    return false;
  }

  Timestamp required_timestamp(const char* key) const {
    const std::string* raw = flat.find(key);
    if (!raw || trim(*raw).empty()) {
      throw Error(Errc::missing_required_key,
                  std::string("missing required key: ") + key);
    }
    return parse_timestamp(trim(*raw));
  }
};

std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i]);
  }
  out += "]";
  return out;
}

}  // namespace

SimulationConfig parse_config(std::string_view text) {
  const FlatConfig flat(text);
  const Reader read{flat};
  SimulationConfig c;

  read.integer({"zones"}, c.zones);
  read.integer({"rooms"}, c.rooms);
  c.start = read.required_timestamp("start");
  c.stop = read.required_timestamp("stop");
  read.integer({"horizon"}, c.horizon_hours);
  double step = static_cast<double>(c.time_step);
  if (read.number({"time_step", "time step"}, step)) {
    c.time_step = static_cast<std::int64_t>(std::llround(step));
  }
  int control = static_cast<int>(c.control);
  read.integer({"control"}, control);
  if (control < 1 || control > 3) {
    out_of_range("control", "1 (no control), 2 (reactive) or 3 (mpc)");
  }
  c.control = static_cast<ControlVariant>(control);

  read.number({"ahu.heating efficiency", "ahu.heating_efficiency"},
              c.ahu.heating_efficiency);
  read.number({"ahu.cooling efficiency", "ahu.cooling_efficiency"},
              c.ahu.cooling_efficiency);

  read.number({"room.thermal capacity of room", "room.thermal_capacity"},
              c.room.thermal_capacity);
  read.number({"room.heat transfer coefficient for outside",
               "room.heat_transfer_coeff_outside"},
              c.room.heat_transfer_coeff_outside);
  read.number({"room.heat load due to equipments", "room.equipment_load"},
              c.room.equipment_load);
  read.number({"room.heat load due to occupants", "room.occupant_load"},
              c.room.occupant_load);
  read.number({"room.coefficient of fan", "room.fan_coefficient"},
              c.room.fan_coefficient);
  read.number({"room.wall coefficient", "room.wall_coeff"}, c.room.wall_coeff);

  read.number({"air.density"}, c.air.density);
  read.number({"air.specific heat", "air.specific_heat"}, c.air.specific_heat);

  read.number({"pmv.p1"}, c.pmv.p1);
  read.number({"pmv.p2"}, c.pmv.p2);
  read.number({"pmv.p3"}, c.pmv.p3);
  read.number({"pmv.p4"}, c.pmv.p4);

  read.number({"comfort.pmv lower", "comfort.pmv_lower"}, c.comfort.pmv_lower);
  read.number({"comfort.pmv upper", "comfort.pmv_upper"}, c.comfort.pmv_upper);

  read.number({"error.occupancy"}, c.error.occupancy);
  read.number({"error.external temperature", "error.external_temperature"},
              c.error.external_temperature);
  read.number({"error.tolerance"}, c.error.tolerance);

  read.text({"files.weather"}, c.files.weather);
  read.text({"files.occupancy"}, c.files.occupancy);
  read.text({"files.output"}, c.files.output);

  read.number({"mpc.lambda"}, c.mpc.lambda);
  read.list({"mpc.tsa grid", "mpc.tsa_grid"}, c.mpc.tsa_grid);
  read.list({"mpc.airflow grid", "mpc.airflow_grid"}, c.mpc.airflow_grid);
  read.number({"reactive.deadband"}, c.reactive.deadband);

  read.integer({"replicates"}, c.replicates);
  read.unsigned64({"rng_seed", "rng seed"}, c.rng_seed);
  double initial = 0;
  if (read.number({"initial temperature", "initial_temperature"}, initial)) {
    c.initial_temperature = initial;
  }
  return c;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::file_unreadable, "cannot open config " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string print_config(const SimulationConfig& c) {
  std::ostringstream out;
  out << "building: {\n";
  out << "  zones: " << c.zones << ",\n";
  out << "  rooms: " << c.rooms << ",\n";
  out << "  start: " << format_timestamp(c.start) << ",\n";
  out << "  stop: " << format_timestamp(c.stop) << ",\n";
  out << "  horizon: " << c.horizon_hours << ",\n";
  out << "  time_step: " << c.time_step << ",\n";
  out << "  control: " << static_cast<int>(c.control)
      << ", // 1 - No Control, 2 - Reactive, 3 - MPC\n";
  out << "  ahu: {\n";
  out << "    heating efficiency: " << format_number(c.ahu.heating_efficiency) << ",\n";
  out << "    cooling efficiency: " << format_number(c.ahu.cooling_efficiency) << "\n";
  out << "  },\n";
  out << "  room: {\n";
  out << "    thermal capacity of room: " << format_number(c.room.thermal_capacity)
      << " kJ/K,\n";
  out << "    heat transfer coefficient for outside: "
      << format_number(c.room.heat_transfer_coeff_outside) << " kJ/Ks,\n";
  out << "    heat load due to equipments: " << format_number(c.room.equipment_load)
      << " kW,\n";
  out << "    heat load due to occupants: " << format_number(c.room.occupant_load)
      << " kW,\n";
  out << "    coefficient of fan: " << format_number(c.room.fan_coefficient) << ",\n";
  out << "    wall coefficient: " << format_number(c.room.wall_coeff) << " kJ/Ks\n";
  out << "  },\n";
  out << "  air: {\n";
  out << "    density: " << format_number(c.air.density) << " kg/m^3,\n";
  out << "    specific heat: " << format_number(c.air.specific_heat) << " kJ/Kg.K\n";
  out << "  },\n";
  out << "  pmv: {\n";
  out << "    p1: " << format_number(c.pmv.p1) << ",\n";
  out << "    p2: " << format_number(c.pmv.p2) << ",\n";
  out << "    p3: " << format_number(c.pmv.p3) << ",\n";
  out << "    p4: " << format_number(c.pmv.p4) << "\n";
  out << "  },\n";
  out << "  comfort: {\n";
  out << "    pmv lower: " << format_number(c.comfort.pmv_lower) << ",\n";
  out << "    pmv upper: " << format_number(c.comfort.pmv_upper) << "\n";
  out << "  },\n";
  out << "  error: {\n";
  out << "    occupancy: " << format_number(c.error.occupancy) << "%,\n";
  out << "    external temperature: " << format_number(c.error.external_temperature)
      << "%,\n";
  out << "    tolerance: " << format_number(c.error.tolerance) << "%\n";
  out << "  },\n";
  out << "  files: {\n";
  out << "    weather: " << c.files.weather << ",\n";
  out << "    occupancy: " << c.files.occupancy << ",\n";
  out << "    output: " << c.files.output << "\n";
  out << "  },\n";
  out << "  mpc: {\n";
  out << "    lambda: " << format_number(c.mpc.lambda) << ",\n";
  out << "    tsa grid: " << format_list(c.mpc.tsa_grid) << ",\n";
  out << "    airflow grid: " << format_list(c.mpc.airflow_grid) << "\n";
  out << "  },\n";
  out << "  reactive: {\n";
  out << "    deadband: " << format_number(c.reactive.deadband) << "\n";
  out << "  },\n";
  out << "  replicates: " << c.replicates << ",\n";
  out << "  rng_seed: " << c.rng_seed << ",\n";
  if (c.initial_temperature) {
    out << "  initial temperature: " << format_number(*c.initial_temperature) << ",\n";
  }
  out << "}\n";
  return out.str();
}

void validate_config(const SimulationConfig& c) {
  if (c.zones != 1) out_of_range("zones", "1 (a single zone is simulated)");
  if (c.rooms < 1) out_of_range("rooms", ">= 1");
  if (c.start >= c.stop) out_of_range("start/stop", "start < stop");
  if (c.time_step <= 0) out_of_range("time_step", "> 0");
  if (kSecondsPerDay % c.time_step != 0) {
    out_of_range("time_step", "a divisor of 86400");
  }
  if (c.horizon_hours < 1) out_of_range("horizon", ">= 1");
  if (c.ahu.heating_efficiency <= 0 || c.ahu.heating_efficiency > 1) {
    out_of_range("ahu.heating efficiency", "in (0, 1]");
  }
  if (c.ahu.cooling_efficiency <= 0 || c.ahu.cooling_efficiency > 1) {
    out_of_range("ahu.cooling efficiency", "in (0, 1]");
  }
  if (c.room.thermal_capacity <= 0) {
    out_of_range("room.thermal capacity of room", "> 0");
  }
  if (c.room.heat_transfer_coeff_outside <= 0) {
    out_of_range("room.heat transfer coefficient for outside", "> 0");
  }
  if (c.room.equipment_load < 0) out_of_range("room.heat load due to equipments", ">= 0");
  if (c.room.occupant_load < 0) out_of_range("room.heat load due to occupants", ">= 0");
  if (c.room.fan_coefficient < 0) out_of_range("room.coefficient of fan", ">= 0");
  if (c.room.wall_coeff < 0) out_of_range("room.wall coefficient", ">= 0");
  if (c.air.density <= 0) out_of_range("air.density", "> 0");
  if (c.air.specific_heat <= 0) out_of_range("air.specific heat", "> 0");
  if (c.comfort.pmv_lower >= c.comfort.pmv_upper) {
    out_of_range("comfort.pmv lower", "< comfort.pmv upper");
  }
  if (c.error.occupancy < 0 || c.error.occupancy > 100) {
    out_of_range("error.occupancy", "in [0, 100]");
  }
  if (c.error.external_temperature < 0 || c.error.external_temperature > 100) {
    out_of_range("error.external temperature", "in [0, 100]");
  }
  if (c.error.tolerance < 0) out_of_range("error.tolerance", ">= 0");
  if (c.mpc.lambda < 0) out_of_range("mpc.lambda", ">= 0");
  if (c.mpc.tsa_grid.empty()) out_of_range("mpc.tsa grid", "non-empty");
  if (c.mpc.airflow_grid.empty() || c.mpc.airflow_grid.front() < 0) {
    out_of_range("mpc.airflow grid", "non-empty, all entries >= 0");
  }
  if (c.reactive.deadband < 0) out_of_range("reactive.deadband", ">= 0");
  if (c.replicates < 1) out_of_range("replicates", ">= 1");
}

}  // namespace zonesim
