#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptspec {

/// Configuration / usage errors; the CLI maps these to exit code 1.
class config_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One batch run. Defaults reproduce the reference-table settings; the
/// config file and command-line flags override them (flag > file > default).
struct RunConfig {
  std::string command;  // spectrum | scan-g | converge | oracle-compare | table1 | table2
  std::string potential = "ahmed_cubic";
  double g = 2.0;  // ahmed_cubic coupling
  double k = 1.0;  // harmonic spring constant
  std::size_t n1 = 700;
  std::size_t n2 = 900;
  double grid_half_width = 12.0;
  std::size_t grid_points = 3000;
  double tol_filter_abs = 1e-6;
  double tol_filter_rel = 1e-8;
  double tol_convergence = 5e-3;
  std::vector<double> g_values;      // scan-g grid; default {0.5, 1.0, 1.5, 2.0}
  std::vector<std::size_t> sizes;    // converge ladder; default {100, 200, 400}
  std::string output;      // file path; empty writes to stdout
  std::string format = "csv";  // csv | json
  std::string dump_matrix;     // write the assembled n2 matrix here if set
  bool strict = false;
  bool fast = false;
  bool timestamps = false;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct ConfigValue {
  std::string text;
  bool quoted = false;
  int line = 0;
};

inline double need_number(const std::string& key, const ConfigValue& v) {
  if (v.quoted)
    throw config_error("line " + std::to_string(v.line) +
                       ": type mismatch for key '" + key +
                       "': expected number, got string");
  double out = 0.0;
  const char* b = v.text.data();
  const char* e = b + v.text.size();
  const auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc() || ptr != e)
    throw config_error("line " + std::to_string(v.line) +
                       ": type mismatch for key '" + key +
                       "': expected number, got '" + v.text + "'");
  return out;
}

inline std::size_t need_count(const std::string& key, const ConfigValue& v) {
  const double d = need_number(key, v);
  if (d < 0.0 || d != static_cast<double>(static_cast<std::size_t>(d)))
    throw config_error("line " + std::to_string(v.line) +
                       ": type mismatch for key '" + key +
                       "': expected non-negative integer, got '" + v.text + "'");
  return static_cast<std::size_t>(d);
}

inline bool need_bool(const std::string& key, const ConfigValue& v) {
  if (!v.quoted && v.text == "true") return true;
  if (!v.quoted && v.text == "false") return false;
  throw config_error("line " + std::to_string(v.line) +
                     ": type mismatch for key '" + key +
                     "': expected true or false, got '" + v.text + "'");
}

template <typename T, typename Parse>
std::vector<T> need_list(const std::string& key, const ConfigValue& v,
                         Parse parse) {
  std::vector<T> out;
  std::string item;
  std::stringstream ss(v.text);
  while (std::getline(ss, item, ',')) {
    ConfigValue elem{trim(item), false, v.line};
    if (elem.text.empty())
      throw config_error("line " + std::to_string(v.line) +
                         ": empty element in list for key '" + key + "'");
    out.push_back(parse(key, elem));
  }
  if (out.empty())
    throw config_error("line " + std::to_string(v.line) +
                       ": empty list for key '" + key + "'");
  return out;
}

inline void apply_key(RunConfig& cfg, const std::string& key,
                      const ConfigValue& v) {
  if (key == "command") cfg.command = v.text;
  else if (key == "potential") cfg.potential = v.text;
  else if (key == "g") cfg.g = need_number(key, v);
  else if (key == "k") cfg.k = need_number(key, v);
  else if (key == "n1") cfg.n1 = need_count(key, v);
  else if (key == "n2") cfg.n2 = need_count(key, v);
  else if (key == "grid_half_width") cfg.grid_half_width = need_number(key, v);
  else if (key == "grid_points") cfg.grid_points = need_count(key, v);
  else if (key == "tol_filter_abs") cfg.tol_filter_abs = need_number(key, v);
  else if (key == "tol_filter_rel") cfg.tol_filter_rel = need_number(key, v);
  else if (key == "tol_convergence") cfg.tol_convergence = need_number(key, v);
  else if (key == "g_values") cfg.g_values = need_list<double>(key, v, need_number);
  else if (key == "sizes") cfg.sizes = need_list<std::size_t>(key, v, need_count);
  else if (key == "output") cfg.output = v.text;
  else if (key == "format") cfg.format = v.text;
  else if (key == "dump_matrix") cfg.dump_matrix = v.text;
  else if (key == "strict") cfg.strict = need_bool(key, v);
  else if (key == "fast") cfg.fast = need_bool(key, v);
  else if (key == "timestamps") cfg.timestamps = need_bool(key, v);
  else
    throw config_error("line " + std::to_string(v.line) + ": unknown key '" +
                       key + "'");
}

}  // namespace detail

/// Parses the flat `key = value` configuration grammar: one assignment per
/// line, `#` starts a comment (outside quotes), values are numbers, bare or
/// double-quoted strings, booleans, or comma-separated lists. Unknown keys
/// and type mismatches are hard errors with line numbers.
inline RunConfig parse_config(const std::string& text,
                              RunConfig cfg = RunConfig{}) {
  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    std::string line;
    bool in_quotes = false;
    for (const char c : raw) {
      if (c == '"') in_quotes = !in_quotes;
      if (c == '#' && !in_quotes) break;
      line += c;
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) +
                         ": expected 'key = value', got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("line " + std::to_string(lineno) + ": missing key");
    if (value.empty())
      throw config_error("line " + std::to_string(lineno) +
                         ": missing value for key '" + key + "'");
    detail::ConfigValue v{value, false, lineno};
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      v.text = value.substr(1, value.size() - 2);
      v.quoted = true;
    } else if (value.front() == '"' || value.back() == '"') {
      throw config_error("line " + std::to_string(lineno) +
                         ": unbalanced quotes in value for key '" + key + "'");
    }
    detail::apply_key(cfg, key, v);
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path,
                                   RunConfig cfg = RunConfig{}) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_config(buffer.str(), std::move(cfg));
}

/// Cross-field checks shared by file and flag input.
inline void validate_config(const RunConfig& cfg) {
  const bool known_command =
      cfg.command == "spectrum" || cfg.command == "scan-g" ||
      cfg.command == "converge" || cfg.command == "oracle-compare" ||
      cfg.command == "table1" || cfg.command == "table2";
  if (!known_command)
    throw config_error(cfg.command.empty()
                           ? "no command given"
                           : "unknown command '" + cfg.command + "'");
  const bool known_potential =
      cfg.potential == "ahmed_cubic" || cfg.potential == "exp_pt" ||
      cfg.potential == "shifted_ho" || cfg.potential == "harmonic";
  if (!known_potential)
    throw config_error("unknown potential '" + cfg.potential + "'");
  if (!(cfg.n1 < cfg.n2))
    throw config_error("sizes must satisfy n1 < n2 (got " +
                       std::to_string(cfg.n1) + ", " + std::to_string(cfg.n2) +
                       ")");
  if (!(cfg.tol_filter_abs > 0.0) || !(cfg.tol_filter_rel >= 0.0) ||
      !(cfg.tol_convergence > 0.0))
    throw config_error("tolerances must be positive");
  if (cfg.format != "csv" && cfg.format != "json")
    throw config_error("format must be csv or json, got '" + cfg.format + "'");
  if (cfg.grid_points < 100)
    throw config_error("grid_points must be >= 100");
  if (!(cfg.grid_half_width > 0.0))
    throw config_error("grid_half_width must be positive");
  for (std::size_t i = 1; i < cfg.g_values.size(); ++i)
    if (!(cfg.g_values[i] > cfg.g_values[i - 1]))
      throw config_error("g_values must be strictly increasing");
  for (std::size_t i = 1; i < cfg.sizes.size(); ++i)
    if (!(cfg.sizes[i] > cfg.sizes[i - 1]))
      throw config_error("sizes must be strictly increasing");
}

}  // namespace ptspec
