#include "zsg/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace zsg {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_csv(const std::string& path,
              const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::runtime_error("csv row width does not match header: " + path);
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_g17(row[i]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_manifest(const std::string& path,
                    const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& config_echo,
                    const std::vector<std::string>& outputs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "command " << command << '\n';
  for (const auto& [k, v] : config_echo) out << k << ' ' << v << '\n';
  for (const auto& f : outputs) out << "output " << f << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Trim whitespace from both ends.
    auto l = line.find_first_not_of(" \t\r\n");
    if (l == std::string::npos) continue;
    auto r = line.find_last_not_of(" \t\r\n");
    std::string s = line.substr(l, r - l + 1);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
    auto strip = [](std::string t) {
      auto a = t.find_first_not_of(" \t");
      auto b = t.find_last_not_of(" \t");
      if (a == std::string::npos) return std::string();
      return t.substr(a, b - a + 1);
    };
    std::string key = strip(s.substr(0, eq));
    std::string val = strip(s.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
    kv[key] = val;
  }
  return kv;
}

} // namespace zsg
