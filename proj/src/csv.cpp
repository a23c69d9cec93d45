#include "afc/csv.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace afc {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv_preamble(std::ostream& os, std::uint64_t config_hash,
                        const std::string& metadata) {
  char hex[24];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(config_hash));
  os << "# config-hash: " << hex << '\n';
  std::istringstream lines(metadata);
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty()) os << "# " << line << '\n';
}

}  // namespace afc
