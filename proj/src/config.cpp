#include "uwajam/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "uwajam/errors.hpp"

namespace uwajam::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_key(const std::string& k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

const std::map<std::string, ConfigEntry>* ConfigDocument::section(const std::string& name) const {
  for (const auto& [n, m] : sections) {
    if (n == name) return &m;
  }
  return nullptr;
}

ConfigDocument parse_config(const std::string& text, const std::string& source) {
  ConfigDocument doc;
  doc.source = source;
  std::map<std::string, ConfigEntry>* current = &doc.global;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, "unterminated section header");
      const std::string header = trim(line.substr(1, line.size() - 2));
      const std::string prefix = "scenario.";
      if (header.rfind(prefix, 0) != 0 || !valid_key(header.substr(prefix.size()))) {
        throw ConfigError(source, line_no, "expected [scenario.<name>], got [" + header + "]");
      }
      const std::string name = header.substr(prefix.size());
      if (doc.section(name)) throw ConfigError(source, line_no, "duplicate section " + name);
      doc.sections.emplace_back(name, std::map<std::string, ConfigEntry>{});
      current = &doc.sections.back().second;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(source, line_no, "bad key '" + key + "'");
    if (value.empty()) throw ConfigError(source, line_no, "missing value for " + key);
    if (current->count(key)) throw ConfigError(source, line_no, "duplicate key " + key);
    (*current)[key] = ConfigEntry{value, line_no};
  }
  return doc;
}

ConfigDocument read_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& source, int line,
                    const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  auto res = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError(source, line, key + ": not a number: '" + t + "'");
  }
  return v;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& source, int line,
                                      const std::string& key) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError(source, line, key + ": range is start:stop:step");
    const double a = parse_double(parts[0], source, line, key);
    const double b = parse_double(parts[1], source, line, key);
    const double h = parse_double(parts[2], source, line, key);
    if (!(h > 0) || !(b >= a)) throw ConfigError(source, line, key + ": empty or reversed range");
    const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
    return out;
  }
  for (const auto& p : split(text, ',')) out.push_back(parse_double(p, source, line, key));
  return out;
}

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> keys{
      "label",          "preset",          "depth_km",         "dmax_km",
      "tx_power",       "static_power",    "sjnr_threshold",   "jam_power",
      "intensity_per_km2", "trunc_radius_km", "jammer_psi",    "frequency_khz",
      "bandwidth_hz",   "spreading_factor", "noise_level_db",  "noise_decay",
      "source_level_db", "tap_delays_s",  "tap_gains",        "per_path_sigma"};
  return keys;
}

analysis::Scenario scenario_from_entries(
    const std::vector<const std::map<std::string, ConfigEntry>*>& layers,
    const std::string& source, std::optional<analysis::Depth> preset, const std::string& label) {
  // Later layers win.
  std::map<std::string, ConfigEntry> merged;
  for (const auto* layer : layers) {
    if (!layer) continue;
    for (const auto& [k, v] : *layer) merged[k] = v;
  }
  const auto& known = scenario_keys();
  for (const auto& [k, v] : merged) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError(source, v.line, "unknown key '" + k + "'");
    }
  }
  auto num = [&](const std::string& key) -> std::optional<double> {
    auto it = merged.find(key);
    if (it == merged.end()) return std::nullopt;
    return parse_double(it->second.value, source, it->second.line, key);
  };

  analysis::Depth depth = preset.value_or(analysis::Depth::shallow);
  if (auto it = merged.find("preset"); it != merged.end()) {
    try {
      depth = analysis::parse_depth(it->second.value);
    } catch (const DomainError& e) {
      throw ConfigError(source, it->second.line, e.what());
    }
  }
  analysis::Scenario s = analysis::make_preset(depth);
  if (!label.empty()) s.label = label;
  if (auto it = merged.find("label"); it != merged.end()) s.label = it->second.value;

  if (auto v = num("depth_km")) {
    s.env.depth_km = *v;
    s.field.depth_km = *v;
    s.env.dmax_km = std::sqrt(100.0 + *v * *v);
  }
  if (auto v = num("dmax_km")) s.env.dmax_km = *v;
  if (auto v = num("tx_power")) s.link.tx_power = *v;
  if (auto v = num("static_power")) s.link.static_power = *v;
  if (auto v = num("sjnr_threshold")) s.link.sjnr_threshold = *v;
  if (auto v = num("jam_power")) s.field.jam_power = *v;
  if (auto v = num("intensity_per_km2")) s.field.intensity_per_km2 = *v;
  if (auto v = num("trunc_radius_km")) s.field.trunc_radius_km = *v;
  if (auto v = num("frequency_khz")) s.env.frequency_khz = *v;
  if (auto v = num("bandwidth_hz")) s.env.bandwidth_hz = *v;
  if (auto v = num("spreading_factor")) s.env.spreading_factor = *v;
  if (auto v = num("noise_level_db")) s.env.noise_level_db = *v;
  if (auto v = num("noise_decay")) s.env.noise_decay = *v;
  if (auto v = num("source_level_db")) s.env.source_level_db = *v;
  if (auto v = num("per_path_sigma")) s.taps.per_path_sigma = *v;

  auto delays = merged.find("tap_delays_s");
  auto gains = merged.find("tap_gains");
  if ((delays == merged.end()) != (gains == merged.end())) {
    const auto& e = delays != merged.end() ? delays->second : gains->second;
    throw ConfigError(source, e.line, "tap_delays_s and tap_gains must be given together");
  }
  if (delays != merged.end()) {
    const auto d = parse_double_list(delays->second.value, source, delays->second.line,
                                     "tap_delays_s");
    const auto g = parse_double_list(gains->second.value, source, gains->second.line, "tap_gains");
    if (d.size() != g.size()) {
      throw ConfigError(source, gains->second.line, "tap_gains: length differs from tap_delays_s");
    }
    s.taps.taps.clear();
    for (std::size_t i = 0; i < d.size(); ++i) s.taps.taps.push_back({d[i], g[i]});
  }

  s.taps.validate();
  s.env.validate();
  s.field.jammer_fading = num("jammer_psi") ? uwchannel::FadingParams{*num("jammer_psi")}
                                            : s.fading();
  s.validate();
  return s;
}

analysis::Scenario load_config_text(const std::string& text, const std::string& scenario_name,
                                    const std::string& source) {
  const ConfigDocument doc = parse_config(text, source);
  const std::map<std::string, ConfigEntry>* section = nullptr;
  std::string name = scenario_name;
  if (!name.empty()) {
    section = doc.section(name);
  } else if (!doc.sections.empty()) {
    name = doc.sections.front().first;
    section = &doc.sections.front().second;
  }
  std::optional<analysis::Depth> preset;
  if (!name.empty()) {
    try {
      preset = analysis::parse_depth(name);
    } catch (const DomainError&) {
      if (!section) throw ConfigError(source, 0, "no section [scenario." + name + "]");
    }
  }
  return scenario_from_entries({&doc.global, section}, source, preset, name);
}

analysis::Scenario load_config(const std::filesystem::path& path,
                               const std::string& scenario_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str(), scenario_name, path.string());
}

std::string dump_config(const analysis::Scenario& s) {
  std::ostringstream os;
  auto kv = [&](const char* k, double v) { os << k << " = " << format_double(v) << '\n'; };
  os << "label = " << s.label << '\n';
  kv("depth_km", s.env.depth_km);
  kv("dmax_km", s.env.dmax_km);
  kv("tx_power", s.link.tx_power);
  kv("static_power", s.link.static_power);
  kv("sjnr_threshold", s.link.sjnr_threshold);
  kv("jam_power", s.field.jam_power);
  kv("intensity_per_km2", s.field.intensity_per_km2);
  kv("trunc_radius_km", s.field.trunc_radius_km);
  kv("jammer_psi", s.field.jammer_fading.psi);
  kv("frequency_khz", s.env.frequency_khz);
  kv("bandwidth_hz", s.env.bandwidth_hz);
  kv("spreading_factor", s.env.spreading_factor);
  kv("noise_level_db", s.env.noise_level_db);
  kv("noise_decay", s.env.noise_decay);
  kv("source_level_db", s.env.source_level_db);
  kv("per_path_sigma", s.taps.per_path_sigma);
  os << "tap_delays_s = ";
  for (std::size_t i = 0; i < s.taps.taps.size(); ++i) {
    os << (i ? ", " : "") << format_double(s.taps.taps[i].delay_s);
  }
  os << "\ntap_gains = ";
  for (std::size_t i = 0; i < s.taps.taps.size(); ++i) {
    os << (i ? ", " : "") << format_double(s.taps.taps[i].mean_gain);
  }
  os << '\n';
  return os.str();
}

}  // namespace uwajam::cli
