#include "bienforce/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bienforce/errors.hpp"

namespace bienforce {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int angle = 0, paren = 0;
  for (char ch : s) {
    if (ch == '<') ++angle;
    if (ch == '>') --angle;
    if (ch == '(') ++paren;
    if (ch == ')') --paren;
    if (ch == ',' && angle == 0 && paren == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

int parse_positive(const std::string& key, const std::string& value) {
  try {
    int n = std::stoi(value);
    if (n < 1) throw Error("ConfigError", key + " must be at least 1");
    return n;
  } catch (const Error&) {
    throw;
  } catch (...) {
    throw Error("ConfigError", "bad integer for " + key + ": " + value);
  }
}

}  // namespace

Config parse_config_text(const std::string& text) {
  Config cfg;
  bool ports_set = false, values_set = false, default_set = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("ConfigError", "expected 'key = value': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "ports") {
      cfg.universe.ports.clear();
      for (const auto& p : split_list(value)) cfg.universe.ports.push_back(p);
      ports_set = true;
    } else if (key == "values") {
      cfg.universe.values.clear();
      for (const auto& v : split_list(value))
        cfg.universe.values.push_back(parse_value(v));
      values_set = true;
    } else if (key == "defaultValue") {
      cfg.default_value = parse_value(value);
      default_set = true;
    } else if (key == "tauBound") {
      cfg.tau_bound = parse_positive(key, value);
    } else if (key == "stateBound") {
      cfg.state_bound = parse_positive(key, value);
    } else if (key == "depth") {
      cfg.depth = parse_positive(key, value);
    } else if (key == "stepBound") {
      cfg.step_bound = parse_positive(key, value);
    } else if (key == "seed") {
      cfg.seed = std::stoull(value);
    } else {
      throw Error("ConfigError", "unknown configuration key: " + key);
    }
  }
  if (ports_set && cfg.universe.ports.empty())
    throw Error("ConfigError", "ports must be nonempty");
  if (values_set && cfg.universe.values.empty())
    throw Error("ConfigError", "values must be nonempty");
  if ((values_set || default_set) && !cfg.universe.has_value(cfg.default_value))
    throw Error("ConfigError", "defaultValue must be one of the configured values");
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Config load_config_file(const std::string& path) {
  return parse_config_text(read_file(path));
}

}  // namespace bienforce
