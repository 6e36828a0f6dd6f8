#pragma once

#include <map>
#include <string>
#include <vector>

namespace zsg {

// Formats a double with 17 significant digits, enough for exact round-trip
// through text. Integral values print without a trailing fraction.
std::string format_g17(double v);

// Writes a CSV file: one header line, then one line per row, every cell
// rendered with format_g17. Row order is whatever the caller supplies, so
// output is deterministic. An empty row set still writes the header line.
void emit_csv(const std::string& path,
              const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows);

// Run manifest: echoes the effective configuration and lists every file the
// run produced. Plain "key value" lines; "output" keys may repeat.
void write_manifest(const std::string& path,
                    const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& config_echo,
                    const std::vector<std::string>& outputs);

// Parses a flat key=value config file. Blank lines and lines starting with
// '#' are skipped. Throws std::invalid_argument on malformed lines or
// duplicate keys.
std::map<std::string, std::string> parse_config_file(const std::string& path);

} // namespace zsg
