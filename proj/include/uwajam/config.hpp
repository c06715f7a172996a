#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwajam/analysis.hpp"

namespace uwajam::cli {

/// Malformed config text. what() carries "<source>:<line>: <message>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct ConfigEntry {
  std::string value;
  int line = 0;
};

/// Parsed `key = value` text. Keys before the first section header are global;
/// `[scenario.<name>]` opens a named section.
struct ConfigDocument {
  std::string source = "<string>";
  std::map<std::string, ConfigEntry> global;
  std::vector<std::pair<std::string, std::map<std::string, ConfigEntry>>> sections;

  const std::map<std::string, ConfigEntry>* section(const std::string& name) const;
};

ConfigDocument parse_config(const std::string& text, const std::string& source = "<string>");
ConfigDocument read_config(const std::filesystem::path& path);

/// Keys understood by scenario_from_entries.
const std::vector<std::string>& scenario_keys();

/// Builds a scenario from a preset and key overrides, applied in order.
/// Throws ConfigError on unparsable values and DomainError (naming the field)
/// when the result violates an invariant.
analysis::Scenario scenario_from_entries(
    const std::vector<const std::map<std::string, ConfigEntry>*>& layers,
    const std::string& source, std::optional<analysis::Depth> preset = std::nullopt,
    const std::string& label = "");

/// Scenario from a config file. With a name, picks `[scenario.<name>]` (or the
/// preset of that name when no such section exists); otherwise the first
/// section, or the global keys alone.
analysis::Scenario load_config(const std::filesystem::path& path,
                               const std::string& scenario_name = "");
analysis::Scenario load_config_text(const std::string& text, const std::string& scenario_name = "",
                                    const std::string& source = "<string>");

/// Every effective parameter as config text; load_config_text(dump_config(s)) == s.
std::string dump_config(const analysis::Scenario& scenario);

/// Shortest decimal that round-trips, locale independent.
std::string format_double(double x);
double parse_double(const std::string& text, const std::string& source, int line,
                    const std::string& key);
std::vector<double> parse_double_list(const std::string& text, const std::string& source, int line,
                                      const std::string& key);

}  // namespace uwajam::cli
